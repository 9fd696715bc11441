import random
from fractions import Fraction

import mpmath
import pytest

from conftest import path_instance
from graphsearch import oracles
from graphsearch.core import (
    ValidationError,
    average_cost,
    generate,
    validate_decision_tree,
)
from graphsearch.graph_search import (
    VertexCut,
    balanced_partition,
    exact_cut_oracle,
    graph_search_recursive,
    greedy_cut_oracle,
    partition_product_bound,
    sign_q5,
)

mpmath.mp.dps = 60


def ratio_within_recursion_bound(cost: int, opt: int) -> bool:
    """cost <= (12 + 4*sqrt5) * opt, decided in exact integer arithmetic."""
    lhs = cost - 12 * opt
    if lhs <= 0:
        return True
    return lhs * lhs <= 80 * opt * opt


class TestExactAlgebra:
    def test_sign_q5_matches_mpmath(self):
        rng = random.Random(0)
        for _ in range(300):
            a = rng.randint(-50, 50)
            b = rng.randint(-50, 50)
            val = a + b * mpmath.sqrt(5)
            want = 0 if abs(val) < 1e-40 else (1 if val > 0 else -1)
            assert sign_q5(a, b) == want

    def test_product_bound_matches_mpmath(self):
        lam1 = 6 + 2 * mpmath.sqrt(5)
        r = mpmath.sqrt(38 + 2 * mpmath.sqrt(5))
        lam2 = (22 + 2 * mpmath.sqrt(5) + (1 + mpmath.sqrt(5)) * r) / 8
        assert abs(lam2 - mpmath.mpf("5.9465")) < 1e-2
        rng = random.Random(1)
        for _ in range(500):
            product = rng.randint(0, 400)
            total = rng.randint(1, 20)
            assert partition_product_bound(product, total, 1) == (
                product >= total * total / lam1 - mpmath.mpf("1e-45")
            )
            assert partition_product_bound(product, total, 2) == (
                product >= total * total / lam2 - mpmath.mpf("1e-45")
            )


class TestCutOracles:
    def test_exact_cut_path3(self):
        inst = path_instance(3)
        cut = exact_cut_oracle(inst)
        assert (cut.a, cut.s, cut.b) == (frozenset({0}), frozenset({1}), frozenset({2}))
        assert cut.ratio == Fraction(1, 4)
        assert cut.violations(inst) == []

    def test_greedy_cut_valid(self):
        for seed in range(20):
            inst = generate("random_connected_graph", {"n": 9, "wmin": 1}, seed)
            cut = greedy_cut_oracle(inst)
            assert cut.violations(inst) == []
            assert cut.s

    def test_greedy_not_worse_than_trivial(self):
        inst = path_instance(5)
        cut = greedy_cut_oracle(inst)
        whole = Fraction(sum(inst.vertex_costs()), inst.total_weight ** 2)
        assert cut.ratio <= whole

    def test_cut_validation_catches_crossing_edge(self):
        inst = path_instance(3)
        bad = VertexCut(frozenset({0, 1}), frozenset(), frozenset({2}), Fraction(0, 1))
        assert any("crosses" in v for v in bad.violations(inst))


class TestGraphSearchRecursive:
    def test_single_vertex(self):
        inst = path_instance(1, costs=(3,))
        tree = graph_search_recursive(inst)
        assert tree.root == 0

    def test_tree_inputs_within_bound(self):
        for seed in range(30):
            inst = generate("random_tree", {"n": 9, "wmin": 0, "wmax": 10}, seed)
            tree = graph_search_recursive(inst)
            assert validate_decision_tree(inst, tree) == []
            opt, _ = oracles.opt_average_subset_dp(inst)
            assert ratio_within_recursion_bound(average_cost(inst, tree), opt)

    def test_general_graphs_within_bound(self):
        for seed in range(30):
            inst = generate(
                "random_connected_graph", {"n": 8, "wmin": 1, "wmax": 10}, seed
            )
            log = []
            tree = graph_search_recursive(inst, cut_log=log)
            assert validate_decision_tree(inst, tree) == []
            assert log, "exact cut oracle should be consulted"
            opt, _ = oracles.opt_average_subset_dp(inst)
            assert ratio_within_recursion_bound(average_cost(inst, tree), opt)

    def test_greedy_oracle_still_valid(self):
        for seed in range(10):
            inst = generate("random_connected_graph", {"n": 9, "wmin": 1}, seed)
            tree = graph_search_recursive(inst, cut_oracle="greedy")
            assert validate_decision_tree(inst, tree) == []

    def test_zero_weight_fallback(self):
        inst = path_instance(5, weights=(0,) * 5)
        tree = graph_search_recursive(inst)
        assert validate_decision_tree(inst, tree) == []


def random_partition_case(rng):
    """Random weights for components <= w(G)/2 plus a separator weight."""
    total_comp = rng.randint(0, 40)
    sep_w = rng.randint(0, 20)
    total = total_comp + sep_w
    comps = []
    remaining = total_comp
    while remaining > 0:
        cap = min(remaining, max(1, total // 2))
        w = rng.randint(1, cap)
        comps.append(w)
        remaining -= w
    # Components of weight 0 are legal too.
    for _ in range(rng.randint(0, 2)):
        comps.insert(rng.randrange(len(comps) + 1), 0)
    return comps, sep_w


class TestBalancedPartition:
    def _build(self, comp_weights, sep_w):
        # Synthetic vertex ids: one per component, plus one separator vertex.
        comps = [frozenset({i}) for i in range(len(comp_weights))]
        sep = frozenset({len(comp_weights)})
        weights = list(comp_weights) + [sep_w]
        return comps, sep, weights

    def test_example_from_greedy_case(self):
        comps, sep, weights = self._build([3, 3, 2], 0)
        a, b = balanced_partition(comps, sep, weights, variant=1)
        wa = sum(weights[min(c)] for c in a)
        wb = sum(weights[min(c)] for c in b)
        assert (wa + 0) * (wb + 0) >= 64 / (6 + 2 * 5 ** 0.5) - 1e-9
        assert partition_product_bound((wa) * (wb), 8, 1)

    def test_no_components(self):
        a, b = balanced_partition([], frozenset({0, 1}), [3, 4], variant=1)
        assert a == () and b == ()
        assert partition_product_bound(7 * 7, 7, 1)

    def test_precondition_enforced(self):
        comps, sep, weights = self._build([10], 2)
        with pytest.raises(ValidationError):
            balanced_partition(comps, sep, weights, variant=1)

    @pytest.mark.parametrize("variant", [1, 2])
    def test_product_bound_randomized(self, variant):
        rng = random.Random(100 + variant)
        checked = 0
        for _ in range(500):
            comp_weights, sep_w = random_partition_case(rng)
            total = sum(comp_weights) + sep_w
            if total == 0 or any(2 * w > total for w in comp_weights):
                continue
            comps, sep, weights = self._build(comp_weights, sep_w)
            a, b = balanced_partition(comps, sep, weights, variant=variant)
            assert tuple(sorted(set(a) | set(b), key=min)) == tuple(
                sorted(comps, key=min)
            )
            wa = sum(weights[min(c)] for c in a) + sep_w
            wb = sum(weights[min(c)] for c in b) + sep_w
            assert partition_product_bound(wa * wb, total, variant), (
                comp_weights,
                sep_w,
                variant,
            )
            checked += 1
        assert checked > 300


class TestPartitionCase:
    def test_cases_match_mpmath_thresholds(self):
        from graphsearch.graph_search import partition_case

        x = (1 + mpmath.sqrt(5) + mpmath.sqrt(38 + 2 * mpmath.sqrt(5))) / 4
        y = (-1 + 3 * mpmath.sqrt(5) + mpmath.sqrt(38 + 2 * mpmath.sqrt(5))) / 2
        assert abs(x - mpmath.mpf("2.43828")) < 1e-5
        assert abs(y - mpmath.mpf("6.11263")) < 1e-5
        # x and y satisfy the defining pair of equations
        assert abs(1 / x**2 - (mpmath.mpf(1) / 4 - 1 / (2 * y))) < 1e-50
        assert abs(
            1 / x**2
            - (mpmath.mpf(1) / 4 - 1 / (2 * x) + 1 / y - 1 / (x * y) + 1 / y**2)
        ) < 1e-50
        lam1_sqrt = 1 + mpmath.sqrt(5)
        rng = random.Random(9)
        for _ in range(400):
            w = rng.randint(1, 40)
            ws = rng.randint(0, w)
            want1 = 1 if ws >= w / lam1_sqrt - mpmath.mpf("1e-45") else 2
            assert partition_case(ws, w, 1) == want1
            if ws >= w / x - mpmath.mpf("1e-45"):
                want2 = 1
            elif ws <= w / y + mpmath.mpf("1e-45"):
                want2 = 3
            else:
                want2 = 2
            assert partition_case(ws, w, 2) == want2, (ws, w)
