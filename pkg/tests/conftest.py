import random

from graphsearch.core import (
    DecisionTree,
    Graph,
    PairwiseCost,
    SearchInstance,
    VertexCost,
    make_tree,
)


def path_instance(n, weights=None, costs=None):
    graph = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    w = tuple(weights) if weights is not None else (1,) * n
    c = tuple(costs) if costs is not None else (1,) * n
    return SearchInstance(graph, w, VertexCost(c))


def star_instance(n, weights=None, costs=None):
    graph = Graph.from_edges(n, [(0, i) for i in range(1, n)])
    w = tuple(weights) if weights is not None else (1,) * n
    c = tuple(costs) if costs is not None else (1,) * n
    return SearchInstance(graph, w, VertexCost(c))


def pairwise_instance(n, edges, rows, weights=None, monotone=False):
    graph = Graph.from_edges(n, edges)
    w = tuple(weights) if weights is not None else (1,) * n
    return SearchInstance(graph, w, PairwiseCost(tuple(tuple(r) for r in rows), monotone))


def random_valid_tree(inst, rng: random.Random) -> DecisionTree:
    """A uniformly arbitrary (not optimal) valid decision tree."""

    def build(candidate):
        v = rng.choice(sorted(candidate))
        subs = [build(comp) for comp in inst.graph.components(candidate - {v})]
        return make_tree(v, subs)

    return build(frozenset(range(inst.n)))
