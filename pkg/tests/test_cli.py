import json

import pytest

from graphsearch.cli import main
from graphsearch.core import parse_decision_tree, parse_instance


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def gen_path3(tmp_path):
    path = tmp_path / "p3.json"
    code = main([
        "gen", "--kind", "path", "--n", "3", "--seed", "0",
        "--wmin", "1", "--wmax", "1", "--cmin", "1", "--cmax", "1",
        "--out", str(path),
    ])
    assert code == 0
    return path


class TestGen:
    def test_deterministic_bytes(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for out in (a, b):
            code, _, _ = run(capsys, "gen", "--kind", "random_tree", "--n", "10",
                             "--seed", "7", "--out", str(out))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_matrix_generation(self, tmp_path, capsys):
        mat = tmp_path / "A.json"
        mat.write_text("[[0, 1], [0, 0]]")
        out = tmp_path / "star.json"
        code, _, _ = run(capsys, "gen", "--kind", "linear_ordering_star",
                         "--matrix", str(mat), "--out", str(out))
        assert code == 0
        inst = parse_instance(out.read_text())
        assert inst.n == 3

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["gen", "--kind", "nonsense"])
        assert err.value.code == 2


class TestSolve:
    def test_oracle_record(self, tmp_path, capsys):
        inst = gen_path3(tmp_path)
        code, out, _ = run(capsys, "solve", str(inst), "--algo", "oracle-avg")
        assert code == 0
        record = json.loads(out)
        assert record["average_cost"] == 5
        assert record["worst_cost"] == 2
        assert record["algo"] == "oracle-avg"
        assert "runtime_ms" in record

    def test_tree4eps_with_ratio(self, tmp_path, capsys):
        inst = gen_path3(tmp_path)
        tree_path = tmp_path / "tree.json"
        code, out, _ = run(capsys, "solve", str(inst), "--algo", "tree4eps",
                           "--epsilon", "1", "--oracle-check", "--out", str(tree_path))
        assert code == 0
        record = json.loads(out)
        assert record["average_cost"] <= 25
        assert record["ratio"] <= record["bound"] == 5.0
        parse_decision_tree(tree_path.read_text())

    def test_model_mismatch_is_error(self, tmp_path, capsys):
        path = tmp_path / "pw.json"
        code, _, _ = run(capsys, "gen", "--kind", "path", "--n", "4",
                         "--cost-model", "pairwise", "--out", str(path))
        assert code == 0
        code, _, err = run(capsys, "solve", str(path), "--algo", "tree4eps")
        assert code == 2
        assert "error" in err

    def test_lp_solver_and_dump(self, tmp_path, capsys):
        path = tmp_path / "mono.json"
        code, _, _ = run(capsys, "gen", "--kind", "random_tree", "--n", "6",
                         "--cost-model", "monotone", "--seed", "3",
                         "--out", str(path))
        assert code == 0
        lp_path = tmp_path / "prog.lp"
        code, out, _ = run(capsys, "solve", str(path), "--algo", "lp2avg",
                           "--dump-lp", str(lp_path))
        assert code == 0
        record = json.loads(out)
        assert record["average_cost"] <= 2 * record["lp_objective"] + 1e-6
        text = lp_path.read_text()
        assert text.startswith("Minimize") and "Subject To" in text

    def test_oracle_path_record(self, tmp_path, capsys):
        inst = gen_path3(tmp_path)
        code, out, _ = run(capsys, "solve", str(inst), "--algo", "oracle-path")
        assert code == 0
        record = json.loads(out)
        assert record["average_cost"] == 5 and record["worst_cost"] is None


class TestSeparatorAndOracle:
    def test_separator_exact(self, tmp_path, capsys):
        inst = gen_path3(tmp_path)
        code, out, _ = run(capsys, "separator", str(inst), "--alpha", "3")
        assert code == 0
        record = json.loads(out)
        assert record["cost"] == 1 and record["separator"] == [1]
        assert record["component_weights"] == [1, 1]

    def test_separator_fptas_flag(self, tmp_path, capsys):
        inst = gen_path3(tmp_path)
        code, out, _ = run(capsys, "separator", str(inst), "--alpha", "2",
                           "--delta", "1/2")
        assert code == 0
        assert json.loads(out)["delta"] == "1/2"

    def test_oracle_cut(self, tmp_path, capsys):
        inst = gen_path3(tmp_path)
        code, out, _ = run(capsys, "oracle", str(inst), "--op", "min-ratio-cut")
        assert code == 0
        record = json.loads(out)
        assert record["s"] == [1] and record["ratio"] == "1/4"


class TestBench:
    def suite(self, tmp_path, algo="tree4eps", oracle_limit=12):
        spec = {
            "rows": [
                {
                    "kind": "random_tree",
                    "params": {"n": 7, "wmin": 0, "wmax": 5},
                    "seeds": [0, 1, 2],
                    "algo": algo,
                    "epsilon": "1",
                    "oracle_limit": oracle_limit,
                }
            ]
        }
        path = tmp_path / "suite.json"
        path.write_text(json.dumps(spec))
        return path

    def test_all_pass_csv(self, tmp_path, capsys):
        suite = self.suite(tmp_path)
        report = tmp_path / "report.csv"
        code, _, err = run(capsys, "bench", str(suite), "--out", str(report))
        assert code == 0
        lines = report.read_text().strip().splitlines()
        assert lines[0].startswith("row_id,instance,algo")
        assert len(lines) == 4
        assert "0 failures" in err

    def test_json_format(self, tmp_path, capsys):
        suite = self.suite(tmp_path)
        code, out, _ = run(capsys, "bench", str(suite), "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["failures"] == 0 and len(doc["rows"]) == 3

    def test_empty_suite(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text('{"rows": []}')
        code, out, err = run(capsys, "bench", str(path), "--format", "json")
        assert code == 0
        assert json.loads(out)["rows"] == []

    def test_broken_algo_fails_with_exit_1(self, tmp_path, capsys, monkeypatch):
        # Break the solver so its guarantee is violated: return a valid but
        # absurdly expensive tree by zeroing the guarantee bound instead.
        import graphsearch.cli as cli

        monkeypatch.setattr(cli, "guarantee_bound", lambda algo, eps: 0.99)
        suite = self.suite(tmp_path)
        code, _, err = run(capsys, "bench", str(suite), "--format", "json")
        assert code == 1
        assert "failures" in err


class TestKernelsCommand:
    def test_info(self, capsys):
        code, out, _ = run(capsys, "kernels")
        assert code == 0
        assert "active backend" in out

    def test_bench_small(self, capsys):
        code, out, _ = run(capsys, "kernels", "--bench", "--n", "9", "--repeat", "1")
        assert code == 0
        assert "subset_dp_average" in out


class TestOracleOrdering:
    def test_linear_ordering_op(self, tmp_path, capsys):
        mat = tmp_path / "A.json"
        mat.write_text("[[0, 1], [0, 0]]")
        code = main(["oracle", "--op", "linear-ordering", "--matrix", str(mat)])
        out, _ = capsys.readouterr()
        assert code == 0
        record = json.loads(out)
        assert record["cost"] == 0 and record["permutation"] == [1, 0]

    def test_missing_instance_is_error(self, capsys):
        code = main(["oracle", "--op", "avg"])
        _, err = capsys.readouterr()
        assert code == 2 and "requires an instance" in err


class TestBenchParallel:
    def test_jobs_flag_merges_deterministically(self, tmp_path, capsys):
        spec = {
            "rows": [
                {"kind": "random_tree", "params": {"n": 6}, "seeds": [0, 1, 2, 3],
                 "algo": "tree4eps", "epsilon": "1"}
            ]
        }
        suite = tmp_path / "suite.json"
        suite.write_text(json.dumps(spec))
        code1 = main(["bench", str(suite), "--format", "json",
                      "--out", str(tmp_path / "seq.json")])
        code2 = main(["bench", str(suite), "--format", "json", "--jobs", "2",
                      "--out", str(tmp_path / "par.json")])
        capsys.readouterr()
        assert code1 == code2 == 0
        seq = json.loads((tmp_path / "seq.json").read_text())
        par = json.loads((tmp_path / "par.json").read_text())
        strip = lambda rows: [{k: v for k, v in r.items() if k != "runtime_ms"}
                              for r in rows]
        assert strip(seq["rows"]) == strip(par["rows"])


class TestSolveFptasAlgos:
    def test_starfptas_and_kfptas(self, tmp_path, capsys):
        star = tmp_path / "star.json"
        code, _, _ = run(capsys, "gen", "--kind", "star", "--n", "6", "--seed", "2",
                         "--wmin", "1", "--out", str(star))
        assert code == 0
        for algo, eps in (("starfptas", "1/2"), ("kfptas", "1")):
            code, out, _ = run(capsys, "solve", str(star), "--algo", algo,
                               "--epsilon", eps, "--oracle-check")
            assert code == 0
            record = json.loads(out)
            assert record["ratio"] <= record["bound"]

    def test_graphrec_greedy_cut(self, tmp_path, capsys):
        g = tmp_path / "g.json"
        code, _, _ = run(capsys, "gen", "--kind", "random_connected_graph",
                         "--n", "9", "--seed", "4", "--wmin", "1", "--out", str(g))
        assert code == 0
        code, out, _ = run(capsys, "solve", str(g), "--algo", "graphrec",
                           "--cut", "greedy")
        assert code == 0
        assert json.loads(out)["average_cost"] > 0
