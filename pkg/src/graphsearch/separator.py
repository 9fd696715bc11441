"""Weighted alpha-separators on trees: exact pseudopolynomial DP and a
bicriteria FPTAS that trades a (1+delta) slack in the component-weight cap
for a polynomial table size.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import _kernels
from .core import Graph, LimitExceededError, ValidationError

_TABLE_CELL_LIMIT = 50_000_000


def _rooted_orders(graph: Graph) -> tuple[list[int], list[list[int]]]:
    """Children lists and a post-order for the tree rooted at vertex 0."""
    parent = graph.bfs_parents(0)
    children: list[list[int]] = [[] for _ in range(graph.n)]
    order: list[int] = []
    stack = [0]
    seen = {0}
    pre = []
    while stack:
        v = stack.pop()
        pre.append(v)
        for u in graph.adjacency[v]:
            if u not in seen:
                seen.add(u)
                children[v].append(u)
                stack.append(u)
    pre.reverse()
    order = pre  # reversed preorder is a valid post-order
    if len(order) != graph.n:
        raise ValidationError("separator DP requires a connected tree")
    return order, children


def separator_dp_bounded(
    graph: Graph, costs: Sequence[int], weights: Sequence[int], bound: int
) -> tuple[int, frozenset[int]]:
    """Optimal separator with every component of T - S weighing at most `bound`."""
    if not graph.is_tree():
        raise ValidationError("separator DP requires a tree")
    if bound < 0:
        raise ValidationError("component weight bound must be nonnegative")
    if graph.n * (bound + 1) > _TABLE_CELL_LIMIT:
        raise LimitExceededError(
            f"separator DP table would need {graph.n * (bound + 1)} cells"
        )
    order, children = _rooted_orders(graph)
    cost, sep = _kernels.separator_dp(order, children, list(costs), list(weights), bound)
    return cost, frozenset(sep)


def separator_dp(
    graph: Graph, costs: Sequence[int], weights: Sequence[int], alpha
) -> tuple[int, frozenset[int]]:
    """Exact weighted alpha-separator on a tree.

    The cap floor(w(T)/alpha) is computed in exact rational arithmetic, so any
    positive rational (or int/float, taken at exact value) alpha is accepted.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    total = sum(weights)
    bound = (total * alpha.denominator) // alpha.numerator
    return separator_dp_bounded(graph, costs, weights, bound)


def separator_fptas(
    graph: Graph, costs: Sequence[int], weights: Sequence[int], alpha, delta
) -> frozenset[int]:
    """Bicriteria separator: never costlier than the optimal alpha-separator,
    with every component of T - S' weighing at most (1+delta) * w(T) / alpha.

    Weights are floor-scaled by K = delta*w(T)/(n*alpha) and the cap parameter
    is rescaled accordingly; both are carried as exact rationals, so only the
    integer cap of the inner DP is ever materialized.  Runs in O(n^3/delta^2).
    """
    alpha = Fraction(alpha)
    delta = Fraction(delta)
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    if delta <= 0:
        raise ValidationError("delta must be positive")
    total = sum(weights)
    if total == 0:
        return frozenset()
    n = graph.n
    scale = delta * total / (n * alpha)  # K: weight units per scaled unit
    scaled = [int(Fraction(w) / scale) for w in weights]
    scaled_total = sum(scaled)
    if scaled_total == 0:
        # Every vertex scaled to weight 0: the empty separator already meets
        # the relaxed cap (n*K = delta*w(T)/alpha <= (1+delta)*w(T)/alpha).
        return frozenset()
    alpha_scaled = alpha * scale * scaled_total / total
    bound = (scaled_total * alpha_scaled.denominator) // alpha_scaled.numerator
    _, sep = separator_dp_bounded(graph, costs, scaled, bound)
    return sep
