import random
from fractions import Fraction

import pytest

from conftest import pairwise_instance, path_instance
from graphsearch import oracles
from graphsearch.core import (
    UnsupportedModelError,
    average_cost,
    evaluate_target_cost,
    generate,
    validate_decision_tree,
    worst_cost,
)
from graphsearch.monotone_lp import (
    ReconstructionError,
    build_avg_lp,
    build_worst_lp,
    check_pseudo_separator,
    fractional_objective,
    fractional_target_cost,
    lp_pipeline,
    pseudo_sep_assignment,
    rationalized_x,
    reconstruct_decision_tree,
    solve_lp,
    two_approx_avg,
    two_approx_worst,
)

TWO_PATH = pairwise_instance(2, [(0, 1)], [[1, 1], [1, 1]], monotone=True)


def monotone_instance(n, seed):
    return generate(
        "random_tree", {"n": n, "cost": "monotone", "wmin": 0, "wmax": 6, "cmin": 0,
                        "cmax": 6}, seed
    )


class TestPrograms:
    def test_single_vertex_program(self):
        inst = pairwise_instance(1, [], [[2]], weights=(3,), monotone=True)
        prog = build_avg_lp(inst)
        sol = solve_lp(prog)
        x = rationalized_x(prog, sol)
        assert x[0][0] == 1
        assert fractional_objective(inst, x, "avg") == 6

    def test_two_path_lp_value(self):
        prog = build_avg_lp(TWO_PATH)
        sol = solve_lp(prog)
        assert abs(sol.objective - 3.0) <= 1e-6

    def test_variable_counts(self):
        inst = monotone_instance(6, 0)
        prog = build_avg_lp(inst)
        n = inst.n
        paths = prog.pair_paths
        assert len(paths) == n * (n + 1) // 2
        assert len(prog.y_vars) == sum(len(p) for p in paths.values())

    def test_relaxation_below_optimum(self):
        for seed in range(25):
            inst = monotone_instance(7, seed)
            prog = build_avg_lp(inst)
            sol = solve_lp(prog)
            opt, _ = oracles.opt_average_subset_dp(inst)
            assert sol.objective <= opt + 1e-6

    def test_feasible_point_exists(self):
        # x = 1 everywhere with y the indicator of the path midpoint is
        # feasible, so the solver can never report infeasibility.
        for seed in range(5):
            inst = monotone_instance(5, seed)
            sol = solve_lp(build_avg_lp(inst))
            assert sol.objective >= -1e-9

    def test_model_validation(self):
        with pytest.raises(UnsupportedModelError):
            build_avg_lp(path_instance(3))
        not_monotone = pairwise_instance(
            3, [(0, 1), (1, 2)], [[0, 0, 1], [0, 0, 2], [0, 0, 0]], monotone=True
        )
        from graphsearch.core import ValidationError

        with pytest.raises(ValidationError):
            build_avg_lp(not_monotone)

    def test_lp_text_dump(self):
        text = build_worst_lp(TWO_PATH).to_lp_text()
        assert text.startswith("Minimize")
        assert "M" in text and "Subject To" in text and text.rstrip().endswith("End")


class TestRounding:
    def test_single_vertex_column(self):
        inst = pairwise_instance(1, [], [[1]], monotone=True)
        got = pseudo_sep_assignment(inst.graph, 0, [Fraction(1)])
        assert got == frozenset({0})

    def test_hand_traced_column(self):
        # Path u(0)-v(1), target v, rooted at v: subtree {u} holds mass 1/2,
        # so u is added and zeroed, then the root sees mass 1.
        got = pseudo_sep_assignment(
            TWO_PATH.graph, 1, [Fraction(1, 2), Fraction(1)]
        )
        assert got == frozenset({0, 1})

    def test_only_root_triggers(self):
        # Star rooted at its center: every proper subtree is a single leaf
        # with mass below one half, so only the root can trigger.
        inst = pairwise_instance(
            5,
            [(0, i) for i in range(1, 5)],
            [[0] * 5 for _ in range(5)],
            monotone=True,
        )
        column = [Fraction(1, 5)] * 5
        got = pseudo_sep_assignment(inst.graph, 0, column)
        assert got == frozenset({0})

    def test_rounding_cost_bound(self):
        for seed in range(25):
            inst = monotone_instance(8, seed)
            prog = build_avg_lp(inst)
            x = rationalized_x(prog, solve_lp(prog))
            for v in range(inst.n):
                sv = pseudo_sep_assignment(inst.graph, v, [x[u][v] for u in range(inst.n)])
                assert sv
                cost_sv = sum(inst.query_cost(u, v) for u in sv)
                assert cost_sv <= 2 * fractional_target_cost(inst, x, v)


class TestReconstruction:
    def test_single_vertex(self):
        inst = pairwise_instance(1, [], [[1]], monotone=True)
        tree = reconstruct_decision_tree(inst.graph, {0: frozenset({0})})
        assert tree.root == 0

    def test_hand_traced_pair(self):
        tree = reconstruct_decision_tree(
            TWO_PATH.graph, {0: frozenset({0}), 1: frozenset({0, 1})}
        )
        assert tree.root == 0
        assert dict(tree.children)[1].root == 1

    def test_star_all_assigned_center(self):
        inst = pairwise_instance(
            4,
            [(0, 1), (0, 2), (0, 3)],
            [[0] * 4 for _ in range(4)],
            monotone=True,
        )
        assignment = {v: frozenset({0}) for v in range(4)}
        tree = reconstruct_decision_tree(inst.graph, assignment)
        assert tree.root == 0
        assert validate_decision_tree(inst, tree) == []

    def test_invalid_assignment_raises(self):
        # Two vertices each assigned only themselves: no common subtree vertex.
        with pytest.raises(ReconstructionError):
            reconstruct_decision_tree(
                TWO_PATH.graph, {0: frozenset({0}), 1: frozenset({1})}
            )


class TestPipelines:
    def test_two_path_end_to_end(self):
        res = lp_pipeline(TWO_PATH, "avg")
        assert res.lp_objective == 3
        assert average_cost(TWO_PATH, res.tree) == 3

    def test_average_pipeline_bounds(self):
        for seed in range(25):
            inst = monotone_instance(8, seed)
            res = lp_pipeline(inst, "avg")
            assert validate_decision_tree(inst, res.tree) == []
            assert check_pseudo_separator(inst.graph, res.assignment) == []
            opt, _ = oracles.opt_average_subset_dp(inst)
            assert float(res.lp_objective) <= opt + 1e-6
            # per-target reconstruction bound under monotone costs
            for v in range(inst.n):
                cost_v = evaluate_target_cost(inst, res.tree, v)
                assert cost_v <= sum(inst.query_cost(u, v) for u in res.assignment[v])
            assert average_cost(inst, res.tree) <= 2 * res.lp_objective
            assert average_cost(inst, res.tree) <= 2 * opt

    def test_worst_pipeline_bounds(self):
        for seed in range(15):
            inst = monotone_instance(7, seed)
            res = lp_pipeline(inst, "worst")
            assert validate_decision_tree(inst, res.tree) == []
            assert worst_cost(inst, res.tree) <= 2 * res.lp_objective
            opt, _ = oracles.opt_worst_bruteforce(inst)
            assert worst_cost(inst, res.tree) <= 2 * opt

    def test_wrappers(self):
        tree = two_approx_avg(TWO_PATH)
        assert average_cost(TWO_PATH, tree) == 3
        tree = two_approx_worst(TWO_PATH)
        assert worst_cost(TWO_PATH, tree) <= 2 * 2


class TestWorstRelaxation:
    def test_worst_lp_below_worst_optimum(self):
        for seed in range(20):
            inst = monotone_instance(6, seed)
            sol = solve_lp(build_worst_lp(inst))
            opt, _ = oracles.opt_worst_bruteforce(inst)
            assert sol.objective <= opt + 1e-6, seed
