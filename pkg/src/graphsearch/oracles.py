"""Exact optimal solvers at desk scale, the ground truth for every bound.

Each solver is deliberately independent of the approximation algorithms it
certifies: subset DP over connected bitmasks for the average-case optimum,
pruned enumeration of whole decision trees for the worst case, and plain
subset/permutation enumeration for separators, cuts, and orderings.
"""

from __future__ import annotations

from fractions import Fraction

from . import _kernels
from .core import (
    DecisionTree,
    LimitExceededError,
    SearchInstance,
    ValidationError,
    make_tree,
    size_centroid_tree,
)

_INF = 1 << 62


def _wc_matrix(inst: SearchInstance) -> list[list[int]]:
    return [
        [inst.weights[x] * inst.query_cost(v, x) for x in range(inst.n)]
        for v in range(inst.n)
    ]


def _cost_matrix(inst: SearchInstance) -> list[list[int]]:
    return [[inst.query_cost(v, x) for x in range(inst.n)] for v in range(inst.n)]


def _mask_set(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def opt_average_subset_dp(inst: SearchInstance, limit: int = 15) -> tuple[int, DecisionTree]:
    """Exact minimum weighted average cost, with one optimal strategy.

    Memoized over connected vertex subsets: the optimum of a candidate set is
    the best over query vertices of the local weighted cost plus the optima of
    the resulting components.  Ties pick the smallest query vertex.
    """
    n = inst.n
    if n > limit:
        raise LimitExceededError(f"subset DP oracle limited to n <= {limit}, got {n}")
    adj = inst.graph.neighbor_masks()
    opt, root = _kernels.subset_dp_average(adj, _wc_matrix(inst))
    full = (1 << n) - 1

    def build(mask: int) -> DecisionTree:
        v = int(root[mask])
        subs = [build(sub) for sub in _kernels.mask_components(adj, mask ^ (1 << v))]
        return make_tree(v, subs)

    return int(opt[full]), build(full)


def opt_worst_bruteforce(inst: SearchInstance, limit: int = 8) -> tuple[int, DecisionTree]:
    """Exact minimum worst-case cost by enumerating all decision trees.

    The per-target accumulated cost vector is carried through the recursion
    (with pairwise costs the objective does not decompose over subsets, so
    subset memoization is unavailable).  Pruned by the best tree found so far,
    seeded with a centroid strategy.
    """
    n = inst.n
    if n > limit:
        raise LimitExceededError(f"worst-case oracle limited to n <= {limit}, got {n}")
    adj = inst.graph.neighbor_masks()
    costmat = _cost_matrix(inst)
    full = (1 << n) - 1
    from .core import worst_cost

    ub = worst_cost(inst, size_centroid_tree(inst.graph, frozenset(range(n)))) + 1
    best = _kernels.worst_enum(adj, costmat, full, [0] * n, ub)

    def rebuild(mask: int, acc: list[int], value: int) -> DecisionTree:
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            row = costmat[v]
            cur = acc[v] + row[v]
            if cur > value:
                continue
            acc2 = list(acc)
            rest = mask ^ (1 << v)
            mm = rest
            while mm:
                x = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                acc2[x] += row[x]
            comps = _kernels.mask_components(adj, rest)
            sub_vals = [_kernels.worst_enum(adj, costmat, comp, acc2, _INF) for comp in comps]
            if max([cur] + sub_vals) == value:
                subs = [
                    rebuild(comp, acc2, val) for comp, val in zip(comps, sub_vals)
                ]
                return make_tree(v, subs)
        raise AssertionError("worst-case reconstruction failed")  # pragma: no cover

    return best, rebuild(full, [0] * n, best)


def opt_path_arbitrary(inst: SearchInstance) -> int:
    """Exact average-case optimum on a path, by interval DP over subpaths."""
    g = inst.graph
    if not g.is_path():
        raise ValidationError("opt_path_arbitrary requires a path")
    n = g.n
    if n == 1:
        return inst.weights[0] * inst.query_cost(0, 0)
    start = min(v for v in range(n) if len(g.adjacency[v]) == 1)
    order = [start]
    prev = -1
    while len(order) < n:
        nxt = [u for u in g.adjacency[order[-1]] if u != prev]
        prev = order[-1]
        order.append(nxt[0])
    # acc[m][j] = sum over targets order[i..j-1] of w * c(order[m], target)
    acc = [[0] * (n + 1) for _ in range(n)]
    for m in range(n):
        vm = order[m]
        for j in range(n):
            x = order[j]
            acc[m][j + 1] = acc[m][j] + inst.weights[x] * inst.query_cost(vm, x)
    best = [[0] * (n + 1) for _ in range(n + 1)]  # best[i][j] over order[i..j-1]
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            b = _INF
            for m in range(i, j):
                val = acc[m][j] - acc[m][i] + best[i][m] + best[m + 1][j]
                if val < b:
                    b = val
            best[i][j] = b
    return best[0][n]


def opt_star_linear_ordering(
    matrix, limit: int = 9, verify_reduction: bool = True
) -> tuple[int, tuple[int, ...]]:
    """Exact minimum of sum A[pi(i)][pi(j)] over i<j, over all orderings.

    Exhaustive search over permutations (branch-and-bound pruned, ties
    lexicographic).  When `verify_reduction` is set, the result is checked
    against the subset-DP optimum of the equivalent star search instance.
    """
    m = len(matrix)
    if m > limit:
        raise LimitExceededError(f"ordering oracle limited to n <= {limit}, got {m}")
    if any(len(row) != m for row in matrix):
        raise ValidationError("matrix must be square")
    best_cost = _INF
    best_perm: tuple[int, ...] = ()
    remaining_all = list(range(m))

    def recurse(prefix: list[int], remaining: list[int], cost: int) -> None:
        nonlocal best_cost, best_perm
        if cost >= best_cost:
            return
        if not remaining:
            best_cost = cost
            best_perm = tuple(prefix)
            return
        for e in remaining:
            added = sum(matrix[e][f] for f in remaining if f != e)
            prefix.append(e)
            recurse(prefix, [f for f in remaining if f != e], cost + added)
            prefix.pop()

    recurse([], remaining_all, 0)
    if verify_reduction:
        from .core import generate

        inst = generate("linear_ordering_star", {"matrix": matrix}, seed=0)
        dp_cost, _ = opt_average_subset_dp(inst, limit=limit + 1)
        # The center's own search path costs 0 by construction, so the star
        # optimum must equal the ordering optimum exactly.
        if dp_cost != best_cost:
            raise AssertionError(
                f"ordering optimum {best_cost} != star optimum {dp_cost}"
            )
    return best_cost, best_perm


def exact_alpha_separator(
    inst: SearchInstance, alpha, limit: int = 18
) -> tuple[int, frozenset[int]]:
    """Cheapest vertex set whose removal caps every component at w(G)/alpha.

    Plain enumeration over all vertex subsets; the weight cap is materialized
    exactly as floor(w(G)/alpha) via rational arithmetic.
    """
    n = inst.n
    if n > limit:
        raise LimitExceededError(f"separator oracle limited to n <= {limit}, got {n}")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    costs = inst.vertex_costs()
    bound = (inst.total_weight * alpha.denominator) // alpha.numerator
    cost, mask = _kernels.alpha_separator(
        inst.graph.neighbor_masks(), list(costs), list(inst.weights), bound
    )
    return cost, _mask_set(mask)


def exact_min_ratio_cut(
    inst: SearchInstance, limit: int = 14
) -> tuple[frozenset[int], frozenset[int], frozenset[int], Fraction]:
    """Exact minimizer of c(S) / (w(A+S) * w(B+S)) over vertex cuts (A, S, B).

    For every candidate S the components of G - S are split between A and B by
    a subset-sum sweep maximizing the weight product; comparisons are integer
    cross-multiplications throughout.  A or B may be empty; splits with a zero
    denominator are infeasible.
    """
    n = inst.n
    if n > limit:
        raise LimitExceededError(f"min-ratio-cut oracle limited to n <= {limit}, got {n}")
    costs = inst.vertex_costs()
    if inst.total_weight == 0:
        raise ValidationError("min-ratio cut requires positive total weight")
    res = _kernels.min_ratio_cut(
        inst.graph.neighbor_masks(), list(costs), list(inst.weights)
    )
    num, den, smask, amask, bmask = res
    return _mask_set(amask), _mask_set(smask), _mask_set(bmask), Fraction(num, den)
