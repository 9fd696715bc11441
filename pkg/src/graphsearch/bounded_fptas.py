"""FPTAS strategies via schedule dynamic programming on geometric time grids.

A decision tree is read as a schedule: a query is a job, and answering a
query splits the machine into one machine per surviving component.  Allowing
idle time lets every query finish on a geometric grid of moments whose
consecutive ratio is at most 1+delta, at a multiplicative cost of (1+delta)
per tree level; stripping the idle time afterwards never increases any
target's cost.  Grids are materialized as integers scaled by 2**32, built by
floor multiplication so the ratio bound is kept exactly.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from . import _kernels
from .core import (
    DecisionTree,
    LimitExceededError,
    SearchInstance,
    ValidationError,
    average_cost,
    make_tree,
)

# Rational lower bound of ln 2; using a lower bound can only shrink delta,
# which refines the grid and preserves every (1+eps) guarantee.
LN2_LOWER = Fraction(693147180559945309, 10**18)

SCHEDULE_BUDGET = 10**6

# Test instrumentation: when set to a list, k_fptas appends the accounted
# aligned-schedule cost (scaled) and the scale bits of the returned tree.
_accounting_probe: list | None = None


# ---------------------------------------------------------------------------
# Moment grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentGrid:
    """Strictly increasing aligned moments {0, 1, ~(1+delta), ~(1+delta)^2, ...}.

    Moments are integers scaled by 2**scale_bits.  Each moment is the floor of
    the previous one times (1 + floor(delta * 2**scale_bits) / 2**scale_bits),
    so consecutive ratios never exceed 1+delta while the grid still reaches
    the requested cap.
    """

    delta: Fraction
    scale_bits: int
    moments: tuple[int, ...]

    @staticmethod
    def build(delta: Fraction, cap_units: int, scale_bits: int = 32) -> "MomentGrid":
        delta = Fraction(delta)
        if delta <= 0:
            raise ValidationError("grid delta must be positive")
        one = 1 << scale_bits
        step = int(delta * one)
        if step < 1:
            raise ValidationError("delta is below the grid resolution")
        cap_scaled = max(0, cap_units) << scale_bits
        moments = [0, one]
        while moments[-1] < cap_scaled:
            moments.append((moments[-1] * (one + step)) >> scale_bits)
        return MomentGrid(delta, scale_bits, tuple(moments))

    def floor_units(self, scaled: int) -> int:
        return scaled >> self.scale_bits


# ---------------------------------------------------------------------------
# Scheduling with rejection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Job:
    """processing time, completion weight, and the cost of rejecting the job."""

    processing: int
    weight: int
    rejection: int


@dataclass(frozen=True)
class ScheduleResult:
    cost: int
    accepted: tuple[int, ...]  # original indices, in scheduled order
    rejected: tuple[int, ...]


def smith_order(jobs: Sequence[Job]) -> list[int]:
    """Indices by nondecreasing processing/weight; zero-weight jobs last."""

    def key(i: int):
        j = jobs[i]
        if j.weight == 0:
            return (1, Fraction(0), i)
        return (0, Fraction(j.processing, j.weight), i)

    return sorted(range(len(jobs)), key=key)


def schedule_with_rejection(
    jobs: Sequence[Job], deadline: int, budget: int = SCHEDULE_BUDGET
) -> ScheduleResult:
    """Exact minimum of sum(w_i C_i) over accepted plus rejection costs.

    Accepted jobs run back to back from time 0 in Smith order and must all
    finish by the deadline; some optimal schedule has this shape, so the DP
    over (job, total processing so far) is exact.  Jobs whose processing
    exceeds the deadline can only be rejected.
    """
    if deadline < 0:
        raise ValidationError("deadline must be nonnegative")
    schedulable = sum(j.processing for j in jobs if j.processing <= deadline)
    if min(schedulable, deadline) > budget:
        raise LimitExceededError(
            f"schedule DP needs {min(schedulable, deadline)} cells, over the "
            f"budget of {budget}"
        )
    order = smith_order(jobs)
    cost, mask = _kernels.schedule_dp(
        [jobs[i].processing for i in order],
        [jobs[i].weight for i in order],
        [jobs[i].rejection for i in order],
        deadline,
        0,
    )
    accepted = tuple(order[pos] for pos in range(len(order)) if (mask >> pos) & 1)
    rejected = tuple(sorted(set(range(len(jobs))) - set(accepted)))
    return ScheduleResult(cost, accepted, rejected)


# ---------------------------------------------------------------------------
# Stars
# ---------------------------------------------------------------------------


def _star_chain_tree(
    center: int, prefix: Sequence[int], rest: Sequence[int]
) -> DecisionTree:
    """Query `prefix` leaves in order, then the center, then the rest."""
    node = make_tree(center, [DecisionTree(leaf) for leaf in rest])
    remaining = {center, *rest}
    for leaf in reversed(list(prefix)):
        node = DecisionTree(leaf, ((min(remaining), node),))
        remaining.add(leaf)
    return node


def star_fptas(inst: SearchInstance, epsilon) -> DecisionTree:
    """Average-cost (1+eps)-approximation on stars, target-independent costs.

    Guess the moment t at which the center is queried on a grid with ratio
    1+eps/3; for each t the best strategy is a scheduling-with-rejection
    instance (leaves queried before the center are accepted jobs, the rest
    pay a fixed post-center cost), solved exactly by the schedule DP.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 3:
        raise ValidationError("star FPTAS requires 0 < epsilon <= 3")
    if not inst.graph.is_star():
        raise ValidationError("star FPTAS requires a star")
    costs = inst.vertex_costs()
    n = inst.n
    if n == 1:
        return DecisionTree(0)
    center = inst.graph.star_center()
    leaves = [v for v in range(n) if v != center]
    total_cost = sum(costs)
    if total_cost == 0:
        return _star_chain_tree(center, (), leaves)
    if total_cost > SCHEDULE_BUDGET:
        raise LimitExceededError(
            f"total cost {total_cost} exceeds the schedule budget {SCHEDULE_BUDGET}"
        )
    grid = MomentGrid.build(epsilon / 3, total_cost)
    shift = grid.scale_bits

    def leaf_key(v: int):
        if inst.weights[v] == 0:
            return (1, Fraction(0), v)
        return (0, Fraction(costs[v], inst.weights[v]), v)

    ordered = sorted(leaves, key=leaf_key)
    proc = [costs[v] for v in ordered]
    wts = [inst.weights[v] for v in ordered]
    best: tuple[int, int, int] | None = None  # (cost, t_scaled, accepted mask)
    for t_scaled in grid.moments:
        tau = grid.floor_units(t_scaled)
        rej = [
            inst.weights[v] * (t_scaled + ((costs[center] + costs[v]) << shift))
            for v in ordered
        ]
        # The center itself: an unschedulable job whose rejection cost is the
        # center's own target contribution when queried at moment t.
        proc_all = proc + [tau + 1]
        wts_all = wts + [0]
        rej_all = rej + [inst.weights[center] * (t_scaled + (costs[center] << shift))]
        cost, mask = _kernels.schedule_dp(proc_all, wts_all, rej_all, tau, shift)
        if best is None or cost < best[0]:
            best = (cost, t_scaled, mask)
    _, _, mask = best
    accepted = [ordered[i] for i in range(len(ordered)) if (mask >> i) & 1]
    rejected = [v for v in ordered if v not in set(accepted)]
    return _star_chain_tree(center, accepted, rejected)


# ---------------------------------------------------------------------------
# Graphs with k non-leaf vertices
# ---------------------------------------------------------------------------


def _skeleton_for_order(graph, inner_order: Sequence[int], n: int):
    """Parent of each inner vertex when queried in the given order.

    Tracks which earlier inner query created the component each vertex sits
    in; leaves never separate anything, so only inner removals matter.
    """
    parent: dict[int, int | None] = {}
    regions: list[tuple[frozenset[int], int | None]] = [(frozenset(range(n)), None)]
    for v in inner_order:
        for i, (region, par) in enumerate(regions):
            if v in region:
                parent[v] = par
                rest = region - {v}
                regions.pop(i)
                regions.extend((comp, v) for comp in graph.components(rest))
                break
    return parent


def k_fptas(inst: SearchInstance, epsilon, k_limit: int = 3) -> DecisionTree:
    """Average-cost (1+eps)-approximation for graphs with few non-leaf vertices.

    Enumerates, over aligned moment grids with delta = eps*ln2/n, the finish
    moments of all non-leaf queries (every query order of the non-leaf
    vertices induces one skeleton).  For each guess, the leaves are slotted by
    a DP over per-gap capacity caps: a leaf is charged either right after its
    neighbor's query or as the last leaf inside a gap between consecutive
    inner queries, shrinking that gap's cap for earlier leaves.  Caps start at
    the latest aligned moment leaving room for the gap's closing query, so
    every accounted value is a real aligned schedule and stripping the idle
    time afterwards never increases any target's cost.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValidationError("k-FPTAS requires 0 < epsilon <= 1")
    costs = inst.vertex_costs()
    n = inst.n
    graph = inst.graph
    if n == 1:
        return DecisionTree(0)
    if n == 2:
        a = _star_chain_tree(0, (), (1,))
        b = _star_chain_tree(1, (), (0,))
        return a if average_cost(inst, a) <= average_cost(inst, b) else b
    inner = [v for v in range(n) if len(graph.adjacency[v]) >= 2]
    k = len(inner)
    if k > k_limit:
        raise LimitExceededError(f"k-FPTAS limited to {k_limit} non-leaf vertices, got {k}")
    leaves = [v for v in range(n) if v not in set(inner)]
    owner = {l: graph.adjacency[l][0] for l in leaves}
    total_cost = sum(costs)
    if total_cost == 0:
        from .core import size_centroid_tree

        return size_centroid_tree(graph, frozenset(range(n)))
    delta = epsilon * LN2_LOWER / n
    grid = MomentGrid.build(delta, _aligned_cap_units(total_cost, delta, n))
    shift = grid.scale_bits
    moments = grid.moments

    def leaf_key(v: int):
        if inst.weights[v] == 0:
            return (1, Fraction(0), v)
        return (0, Fraction(costs[v], inst.weights[v]), v)

    ordered_leaves = sorted(leaves, key=leaf_key)
    c_scaled = [costs[l] << shift for l in ordered_leaves]
    l_wts = [inst.weights[l] for l in ordered_leaves]

    # Distinct skeletons over all query orders of the inner vertices.
    skeletons: dict[tuple, dict[int, int | None]] = {}
    for perm in permutations(inner):
        parent = _skeleton_for_order(graph, perm, n)
        key = tuple(sorted(parent.items()))
        skeletons.setdefault(key, parent)

    best = None  # (accounted cost, parent, dp inputs)
    for parent in skeletons.values():
        root = next(v for v in inner if parent[v] is None)
        gap_id = {v: i for i, v in enumerate(inner)}
        order = _topo_inner(parent, inner)
        # Gaps from the root down to each leaf's owner, in path order.
        paths: list[tuple[int, ...]] = []
        for l in ordered_leaves:
            chain = []
            v = owner[l]
            while v is not None:
                chain.append(gap_id[v])
                v = parent[v]
            chain.reverse()
            paths.append(tuple(chain))

        def enumerate_tuples(pos: int, idx: dict[int, int]):
            if pos == len(order):
                yield dict(idx)
                return
            v = order[pos]
            lo = (moments[idx[parent[v]]] if parent[v] is not None else 0) + (
                costs[v] << shift
            )
            for j, m in enumerate(moments):
                if m >= lo:
                    idx[v] = j
                    yield from enumerate_tuples(pos + 1, idx)
            idx.pop(v, None)

        for idx in enumerate_tuples(0, {}):
            inner_const = sum(inst.weights[v] * moments[idx[v]] for v in inner)
            pred_tau = [
                moments[idx[parent[v]]] if parent[v] is not None else 0 for v in inner
            ]
            # A gap's cap must leave room for its closing query: the latest
            # aligned moment tau with tau + c(v) <= tau_v.  Starting at tau_v
            # itself would let a leaf overlap the query after it, making the
            # accounted cost undercut the realized schedule.
            init_caps = [
                bisect_right(moments, moments[idx[v]] - (costs[v] << shift)) - 1
                for v in inner
            ]
            owner_contrib = [
                l_wts[i] * (moments[idx[owner[ordered_leaves[i]]]] + c_scaled[i])
                for i in range(len(ordered_leaves))
            ]
            total = inner_const + _kernels.gap_dp(
                list(moments), pred_tau, init_caps, c_scaled, l_wts, owner_contrib,
                paths,
            )
            if best is None or total < best[0]:
                best = (total, parent, pred_tau, init_caps, owner_contrib, paths)

    total, parent, pred_tau, init_caps, owner_contrib, paths = best
    _, assign = _kernels.gap_dp(
        list(moments), pred_tau, init_caps, c_scaled, l_wts, owner_contrib, paths,
        trace=True,
    )
    gap_leaves: dict[int, list[int]] = {v: [] for v in inner}
    for i, pick in enumerate(assign):
        if pick:
            gap_leaves[inner[pick - 1]].append(ordered_leaves[i])
    tree = _realize_k_tree(graph, inner, parent, gap_leaves, frozenset(range(n)))
    if _accounting_probe is not None:
        _accounting_probe.append((total, grid.scale_bits))
    return tree


def _aligned_cap_units(total_cost: int, delta: Fraction, n: int) -> int:
    """Upper bound (1+delta)^n * c(G) on any aligned completion, rounded up."""
    num, den = (1 + delta).numerator, (1 + delta).denominator
    cap = Fraction(total_cost)
    for _ in range(n):
        cap *= Fraction(num, den)
    return int(cap) + 1


def _topo_inner(parent: dict[int, int | None], inner: Sequence[int]) -> list[int]:
    order = []
    placed: set[int] = set()
    while len(order) < len(inner):
        for v in inner:
            if v not in placed and (parent[v] is None or parent[v] in placed):
                order.append(v)
                placed.add(v)
    return order


def _realize_k_tree(
    graph,
    inner: Sequence[int],
    parent: dict[int, int | None],
    gap_leaves: dict[int, list[int]],
    full: frozenset[int],
) -> DecisionTree:
    inner_set = set(inner)

    def build(v: int, candidate: frozenset[int]) -> DecisionTree:
        chain = gap_leaves[v]
        after = candidate - set(chain) - {v}
        subs = []
        for comp in graph.components(after):
            comp_inner = [u for u in comp if u in inner_set and parent[u] == v]
            if comp_inner:
                assert len(comp_inner) == 1, "skeleton must give one entry per branch"
                subs.append(build(comp_inner[0], comp))
            else:
                # Leaf-only components are singletons: a leaf's only neighbor
                # is its (already queried) owner.
                assert len(comp) == 1
                subs.append(DecisionTree(next(iter(comp))))
        node = make_tree(v, subs)
        covered = candidate - set(chain)
        for leaf in reversed(chain):
            node = DecisionTree(leaf, ((min(covered), node),))
            covered = covered | {leaf}
        return node

    root = next(v for v in inner if parent[v] is None)
    return build(root, full)
