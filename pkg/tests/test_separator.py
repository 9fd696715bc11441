import random
from fractions import Fraction

import pytest

from conftest import path_instance, star_instance
from graphsearch import oracles
from graphsearch.core import ValidationError, generate
from graphsearch.separator import separator_dp, separator_dp_bounded, separator_fptas


def components_ok(graph, weights, sep, cap):
    rest = frozenset(range(graph.n)) - sep
    return all(sum(weights[v] for v in c) <= cap for c in graph.components(rest))


class TestSeparatorDp:
    def test_path3_alpha3(self):
        inst = path_instance(3)
        cost, sep = separator_dp(inst.graph, inst.vertex_costs(), inst.weights, 3)
        assert cost == 1 and sep == frozenset({1})

    def test_star_expensive_center(self):
        inst = star_instance(4, costs=(5, 1, 1, 1))
        cost, sep = separator_dp(inst.graph, inst.vertex_costs(), inst.weights, 2)
        assert cost == 2

    def test_alpha_at_most_one_is_trivial(self):
        inst = path_instance(4)
        cost, sep = separator_dp(inst.graph, inst.vertex_costs(), inst.weights, 1)
        assert cost == 0 and sep == frozenset()

    def test_matches_exhaustive_oracle(self):
        for seed in range(60):
            inst = generate("random_tree", {"n": 10, "wmin": 0, "wmax": 10}, seed)
            for alpha in (Fraction(3, 2), 2, 3):
                want, _ = oracles.exact_alpha_separator(inst, alpha)
                got, sep = separator_dp(
                    inst.graph, inst.vertex_costs(), inst.weights, alpha
                )
                assert got == want
                bound = (inst.total_weight * Fraction(alpha).denominator) // Fraction(
                    alpha
                ).numerator
                assert components_ok(inst.graph, inst.weights, sep, bound)
                assert sum(inst.vertex_costs()[v] for v in sep) == got

    def test_zero_weights_case(self):
        # The separator may leave a zero-weight component around an excluded
        # vertex; the DP must consider components of weight exactly 0.
        inst = path_instance(4, weights=(0, 3, 0, 0), costs=(4, 1, 4, 4))
        for alpha in (2, 3, 4):
            want, _ = oracles.exact_alpha_separator(inst, alpha)
            got, _ = separator_dp(inst.graph, inst.vertex_costs(), inst.weights, alpha)
            assert got == want

    def test_monotone_in_bound(self):
        for seed in range(15):
            inst = generate("random_tree", {"n": 9}, seed)
            prev = None
            for bound in range(inst.total_weight + 1):
                cost, _ = separator_dp_bounded(
                    inst.graph, inst.vertex_costs(), inst.weights, bound
                )
                if prev is not None:
                    assert cost <= prev
                prev = cost

    def test_rejects_non_tree(self):
        inst = generate("random_connected_graph", {"n": 6, "extra_edges": 3}, 1)
        if inst.graph.is_tree():
            pytest.skip("generator produced a tree")
        with pytest.raises(ValidationError):
            separator_dp(inst.graph, inst.vertex_costs(), inst.weights, 2)


class TestSeparatorFptas:
    def test_single_vertex(self):
        inst = path_instance(1, weights=(5,), costs=(2,))
        sep = separator_fptas(inst.graph, inst.vertex_costs(), inst.weights, 2, Fraction(1, 2))
        # One vertex of weight 5: any nonempty component violates the cap.
        assert sep == frozenset({0})

    def test_lossless_when_uniform(self):
        # With uniform weights the scaled instance is weight-equivalent, so
        # the FPTAS cost matches the exact separator cost.
        for seed in range(10):
            inst = generate("random_tree", {"n": 8, "wmin": 1, "wmax": 1}, seed)
            sep = separator_fptas(
                inst.graph, inst.vertex_costs(), inst.weights, 2, Fraction(1, 2)
            )
            exact, _ = oracles.exact_alpha_separator(inst, 2)
            cost = sum(inst.vertex_costs()[v] for v in sep)
            # cost side of the bicriteria guarantee
            assert cost <= exact

    def test_bicriteria_guarantees(self):
        for seed in range(60):
            inst = generate("random_tree", {"n": 9, "wmin": 0, "wmax": 10}, seed)
            costs = inst.vertex_costs()
            for alpha in (2, 3):
                opt_cost, _ = oracles.exact_alpha_separator(inst, alpha)
                for delta in (Fraction(1, 10), Fraction(1, 2), Fraction(1)):
                    sep = separator_fptas(inst.graph, costs, inst.weights, alpha, delta)
                    assert sum(costs[v] for v in sep) <= opt_cost
                    cap = (1 + delta) * Fraction(inst.total_weight, alpha)
                    rest = frozenset(range(inst.n)) - sep
                    for comp in inst.graph.components(rest):
                        assert Fraction(inst.weight_of(comp)) <= cap

    def test_zero_total_weight(self):
        inst = path_instance(3, weights=(0, 0, 0))
        assert separator_fptas(inst.graph, inst.vertex_costs(), inst.weights, 2, 1) == frozenset()

    def test_bad_delta(self):
        inst = path_instance(3)
        with pytest.raises(ValidationError):
            separator_fptas(inst.graph, inst.vertex_costs(), inst.weights, 2, 0)
