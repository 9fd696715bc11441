"""Recursive strategy construction for trees with target-independent costs.

The driver repeatedly finds a cheap balanced separator, queries its vertices
in a partial decision tree, and recurses on the remaining components.  The
queries to the neighborhood of any untouched component always form a path in
the partial tree, so each recursive result can be attached below the last
such query without ambiguity; with the partial tree kept explicit, that
attachment point is exactly the open leaf tagged with the component.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import (
    DecisionTree,
    Graph,
    SearchInstance,
    ValidationError,
    induced_instance,
    make_tree,
    size_centroid_tree,
)
from .separator import separator_fptas


@dataclass(frozen=True)
class OpenLeaf:
    """A pending branch of a partial decision tree: one untouched component."""

    component: frozenset[int]


@dataclass(frozen=True)
class PartialNode:
    """A query node of a partial decision tree; children sorted by key."""

    root: int
    children: tuple[tuple[int, "PartialNode | OpenLeaf"], ...] = ()


PartialDecisionTree = PartialNode | OpenLeaf


def partial_tree_from_set(
    graph: Graph,
    queried: frozenset[int],
    candidate: frozenset[int],
    priority: Callable[[int], object] | None = None,
) -> PartialDecisionTree:
    """Partial decision tree querying exactly `queried` within `candidate`.

    The next query is the minimum of the remaining set under `priority`
    (vertex id by default).  Components containing no queried vertex remain
    open leaves; with `queried` empty the whole candidate is one open leaf.
    """
    here = queried & candidate
    if not here:
        return OpenLeaf(candidate)
    key = priority if priority is not None else (lambda v: v)
    s = min(here, key=lambda v: (key(v), v))
    children = []
    for comp in graph.components(candidate - {s}):
        children.append((min(comp), partial_tree_from_set(graph, queried, comp, priority)))
    return PartialNode(s, tuple(sorted(children, key=lambda kv: kv[0])))


def open_components(partial: PartialDecisionTree) -> list[frozenset[int]]:
    """The components of candidate - queried, i.e. all open leaves."""
    if isinstance(partial, OpenLeaf):
        return [partial.component]
    out = []
    for _, sub in partial.children:
        out.extend(open_components(sub))
    return sorted(out, key=min)


def complete_partial(
    partial: PartialDecisionTree, fill: Callable[[frozenset[int]], DecisionTree]
) -> DecisionTree:
    """Replace every open leaf with `fill(component)`."""
    if isinstance(partial, OpenLeaf):
        return fill(partial.component)
    children = tuple(
        (key, complete_partial(sub, fill)) for key, sub in partial.children
    )
    return DecisionTree(partial.root, children)


def tree_search_4eps(inst: SearchInstance, epsilon) -> DecisionTree:
    """Average-cost approximation for trees with target-independent costs.

    Each recursion level takes a bicriteria near-optimal 2-separator (with
    slack delta = eps/(4+eps)), queries it cheapest-cost-first, and recurses
    on the leftover components; the resulting cost is within (4+eps) of the
    optimum.  Runs in O(n^4/eps^2).
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    if not inst.graph.is_tree():
        raise ValidationError("tree_search_4eps requires a tree")
    costs = inst.vertex_costs()
    delta = epsilon / (4 + epsilon)
    graph = inst.graph

    def solve(candidate: frozenset[int]) -> DecisionTree:
        if len(candidate) == 1:
            return DecisionTree(next(iter(candidate)))
        sub, mapping = induced_instance(inst, candidate)
        if sub.total_weight == 0:
            return size_centroid_tree(graph, candidate)
        sep_local = separator_fptas(sub.graph, sub.vertex_costs(), sub.weights, 2, delta)
        sep = frozenset(mapping[i] for i in sep_local)
        if not sep:
            # Unreachable for positive weights (the scaled cap is always
            # exceeded by the whole tree); kept as a termination guard.
            return size_centroid_tree(graph, candidate)
        partial = partial_tree_from_set(
            graph, sep, candidate, priority=lambda v: costs[v]
        )
        return complete_partial(partial, solve)

    tree = solve(frozenset(range(inst.n)))
    return tree


def greedy_fill_tree(graph: Graph, candidate: frozenset[int]) -> DecisionTree:
    """Smallest-id-first valid tree; only used as a deterministic filler."""
    v = min(candidate)
    subs = [greedy_fill_tree(graph, comp) for comp in graph.components(candidate - {v})]
    return make_tree(v, subs)
