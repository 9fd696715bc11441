import random
from fractions import Fraction

import pytest

from conftest import path_instance
from graphsearch import oracles
from graphsearch.core import (
    ValidationError,
    average_cost,
    generate,
    validate_decision_tree,
)
from graphsearch.tree_search import (
    OpenLeaf,
    PartialNode,
    complete_partial,
    greedy_fill_tree,
    open_components,
    partial_tree_from_set,
    tree_search_4eps,
)


class TestPartialTree:
    def test_single_separator_vertex(self):
        inst = path_instance(3)
        partial = partial_tree_from_set(
            inst.graph, frozenset({1}), frozenset(range(3))
        )
        assert isinstance(partial, PartialNode) and partial.root == 1
        assert open_components(partial) == [frozenset({0}), frozenset({2})]

    def test_two_separator_vertices_path4(self):
        inst = path_instance(4)
        partial = partial_tree_from_set(
            inst.graph, frozenset({1, 2}), frozenset(range(4))
        )
        assert partial.root == 1
        sub = dict(partial.children)[2]
        assert isinstance(sub, PartialNode) and sub.root == 2
        assert open_components(partial) == [frozenset({0}), frozenset({3})]
        filled = complete_partial(partial, lambda comp: greedy_fill_tree(inst.graph, comp))
        assert validate_decision_tree(inst, filled) == []

    def test_full_set_gives_complete_tree(self):
        inst = path_instance(4)
        partial = partial_tree_from_set(
            inst.graph, frozenset(range(4)), frozenset(range(4))
        )
        assert open_components(partial) == []
        filled = complete_partial(partial, lambda comp: (_ for _ in ()).throw(AssertionError))
        assert validate_decision_tree(inst, filled) == []

    def test_empty_set_is_open_leaf(self):
        inst = path_instance(3)
        partial = partial_tree_from_set(inst.graph, frozenset(), frozenset(range(3)))
        assert isinstance(partial, OpenLeaf)
        assert partial.component == frozenset(range(3))

    def test_open_components_match_removal(self):
        rng = random.Random(4)
        for seed in range(20):
            inst = generate("random_tree", {"n": 9}, seed)
            full = frozenset(range(inst.n))
            sep = frozenset(rng.sample(range(inst.n), rng.randint(1, inst.n)))
            partial = partial_tree_from_set(inst.graph, sep, full)
            assert open_components(partial) == inst.graph.components(full - sep)


class TestTreeSearch4Eps:
    def test_single_vertex(self):
        inst = path_instance(1, weights=(2,), costs=(3,))
        tree = tree_search_4eps(inst, 1)
        assert tree.root == 0 and average_cost(inst, tree) == 6

    def test_path3_bound(self):
        inst = path_instance(3)
        tree = tree_search_4eps(inst, 1)
        assert validate_decision_tree(inst, tree) == []
        assert average_cost(inst, tree) <= 5 * 5  # (4+eps) * OPT

    def test_ratio_on_random_trees(self):
        for seed in range(40):
            inst = generate("random_tree", {"n": 10, "wmin": 0, "wmax": 10}, seed)
            opt, _ = oracles.opt_average_subset_dp(inst)
            for eps in (Fraction(1, 2), Fraction(1)):
                tree = tree_search_4eps(inst, eps)
                assert validate_decision_tree(inst, tree) == []
                assert average_cost(inst, tree) <= (4 + eps) * opt

    def test_zero_weight_instances_terminate(self):
        inst = path_instance(6, weights=(0,) * 6)
        tree = tree_search_4eps(inst, 1)
        assert validate_decision_tree(inst, tree) == []
        assert average_cost(inst, tree) == 0

    def test_rejects_bad_epsilon_and_graph(self):
        inst = path_instance(3)
        with pytest.raises(ValidationError):
            tree_search_4eps(inst, 0)
        loop = generate("random_connected_graph", {"n": 6, "extra_edges": 4}, 0)
        if not loop.graph.is_tree():
            with pytest.raises(ValidationError):
                tree_search_4eps(loop, 1)
