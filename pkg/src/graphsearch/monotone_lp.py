"""LP-based strategies for trees whose pairwise query costs never decrease
toward the target.

The LP relaxes per-vertex query-set indicators x[u,v] ("u is queried while
searching for v") with covering variables y[u,v,w] forcing some shared query
on every path.  Rounding turns each fractional column into a query set of at
most twice its fractional cost; the sets jointly form a pseudo-separator
assignment, and a Helly-style intersection argument rebuilds a decision tree
whose per-target cost never exceeds the assigned set's cost.  Both the
average-case and the worst-case objective lose only the rounding factor 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .core import (
    DecisionTree,
    Graph,
    GraphSearchError,
    SearchInstance,
    PairwiseCost,
    SolverError,
    UnsupportedModelError,
    ValidationError,
    make_tree,
    monotonicity_violation,
)

# Solver floats within 1e-9 below one half still count as reaching it.
ROUNDING_THRESHOLD = Fraction(1, 2) - Fraction(1, 10**9)

_SNAP_DENOMINATOR = 10**6
_SNAP_TOLERANCE = 1e-7


class ReconstructionError(GraphSearchError):
    """The assignment fed to the reconstruction was not a pseudo-separator."""


# ---------------------------------------------------------------------------
# Program construction
# ---------------------------------------------------------------------------


@dataclass
class LpProgram:
    """A covering LP over query indicators, in A_ub @ x <= b_ub form."""

    n: int
    objective: str  # "avg" | "worst"
    c: np.ndarray
    a_ub: sparse.coo_matrix
    b_ub: np.ndarray
    bounds: list[tuple[float, float | None]]
    y_vars: list[tuple[int, int, int]]  # (u, v, w) with v <= w, u on the path
    pair_paths: dict[tuple[int, int], tuple[int, ...]]
    m_index: int | None  # worst-case scalar, when present

    def x_index(self, u: int, v: int) -> int:
        return u * self.n + v

    @property
    def num_vars(self) -> int:
        return len(self.c)

    def var_name(self, j: int) -> str:
        if self.m_index is not None and j == self.m_index:
            return "M"
        if j < self.n * self.n:
            return f"x_{j // self.n}_{j % self.n}"
        u, v, w = self.y_vars[j - self.n * self.n]
        return f"y_{u}_{v}_{w}"

    def to_lp_text(self) -> str:
        """Objective, constraint rows, and bounds in LP text format."""
        lines = ["Minimize"]
        terms = [
            f"{self.c[j]:+g} {self.var_name(j)}" for j in range(self.num_vars) if self.c[j]
        ]
        lines.append(" obj: " + " ".join(terms))
        lines.append("Subject To")
        mat = self.a_ub.tocsr()
        for i in range(mat.shape[0]):
            row = mat.getrow(i)
            terms = [
                f"{val:+g} {self.var_name(j)}"
                for j, val in zip(row.indices, row.data)
            ]
            lines.append(f" c{i}: " + " ".join(terms) + f" <= {self.b_ub[i]:g}")
        lines.append("Bounds")
        for j, (lo, hi) in enumerate(self.bounds):
            hi_txt = "+inf" if hi is None else f"{hi:g}"
            lines.append(f" {lo:g} <= {self.var_name(j)} <= {hi_txt}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def _require_monotone_tree(inst: SearchInstance) -> PairwiseCost:
    if not inst.graph.is_tree():
        raise ValidationError("the LP pipeline requires a tree")
    if not isinstance(inst.cost, PairwiseCost) or not inst.cost.monotone:
        raise UnsupportedModelError(
            "the LP pipeline requires pairwise costs declared monotone"
        )
    bad = monotonicity_violation(inst.graph, inst.cost.costs)
    if bad is not None:
        u, v, x = bad
        raise ValidationError(
            f"costs are not monotone: c({u},{x}) > c({v},{x}) on the path from {v}"
        )
    return inst.cost


def _build_lp(inst: SearchInstance, objective: str) -> LpProgram:
    _require_monotone_tree(inst)
    g = inst.graph
    n = g.n
    pair_paths: dict[tuple[int, int], tuple[int, ...]] = {}
    y_vars: list[tuple[int, int, int]] = []
    for v in range(n):
        for w in range(v, n):
            path = g.tree_path(v, w)
            pair_paths[(v, w)] = path
            for u in path:
                y_vars.append((u, v, w))
    nx = n * n
    ny = len(y_vars)
    m_index = nx + ny if objective == "worst" else None
    num = nx + ny + (1 if m_index is not None else 0)

    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    b: list[float] = []

    def add(row_entries, rhs):
        i = len(b)
        for j, val in row_entries:
            rows.append(i)
            cols.append(j)
            data.append(val)
        b.append(rhs)

    y_offset = nx
    y_by_pair: dict[tuple[int, int], list[int]] = {}
    for idx, (u, v, w) in enumerate(y_vars):
        j = y_offset + idx
        add([(j, 1.0), (u * n + v, -1.0)], 0.0)  # y <= x_{u,v}
        add([(j, 1.0), (u * n + w, -1.0)], 0.0)  # y <= x_{u,w}
        y_by_pair.setdefault((v, w), []).append(j)
    for pair, js in y_by_pair.items():
        add([(j, -1.0) for j in js], -1.0)  # sum of y over the path >= 1

    c = np.zeros(num)
    if objective == "avg":
        for v in range(n):
            wv = inst.weights[v]
            if wv:
                for u in range(n):
                    c[u * n + v] = wv * inst.query_cost(u, v)
    else:
        c[m_index] = 1.0
        for v in range(n):
            entries = [(u * n + v, float(inst.query_cost(u, v))) for u in range(n)]
            entries.append((m_index, -1.0))
            add(entries, 0.0)  # per-target fractional cost <= M

    bounds: list[tuple[float, float | None]] = [(0.0, 1.0)] * (nx + ny)
    if m_index is not None:
        bounds.append((0.0, None))
    a_ub = sparse.coo_matrix(
        (data, (rows, cols)), shape=(len(b), num)
    )
    return LpProgram(
        n=n,
        objective=objective,
        c=c,
        a_ub=a_ub,
        b_ub=np.array(b),
        bounds=bounds,
        y_vars=y_vars,
        pair_paths=pair_paths,
        m_index=m_index,
    )


def build_avg_lp(inst: SearchInstance) -> LpProgram:
    """Average-cost LP: minimize sum_v w(v) sum_u c(u,v) x[u,v]."""
    return _build_lp(inst, "avg")


def build_worst_lp(inst: SearchInstance) -> LpProgram:
    """Worst-cost LP: minimize M with every per-target fractional cost <= M."""
    return _build_lp(inst, "worst")


# ---------------------------------------------------------------------------
# Solving and post-processing
# ---------------------------------------------------------------------------


@dataclass
class LpSolution:
    values: np.ndarray
    objective: float


def solve_lp(prog: LpProgram) -> LpSolution:
    """Solve with the HiGHS dual simplex (vertex solutions, deterministic)."""
    res = linprog(
        prog.c,
        A_ub=prog.a_ub,
        b_ub=prog.b_ub,
        bounds=prog.bounds,
        method="highs-ds",
    )
    if not res.success:
        raise SolverError(
            f"LP solve failed ({res.status}: {res.message});\n{prog.to_lp_text()}"
        )
    return LpSolution(values=res.x, objective=float(res.fun))


def rationalized_x(prog: LpProgram, sol: LpSolution) -> list[list[Fraction]]:
    """Clip the solver's x block into [0,1] and snap it onto exact rationals.

    Vertex solutions of these small integer-data LPs have small-denominator
    rational coordinates; snapping removes float noise so the combinatorial
    bounds downstream can be checked exactly.  Afterwards the covering sums
    min(x[u,v], x[u,w]) over each path are renormalized to reach 1 exactly,
    which restores the covering constraint against solver tolerance at a cost
    of at most a ~1e-7 relative objective increase.
    """
    n = prog.n
    xmat: list[list[Fraction]] = []
    for u in range(n):
        row = []
        for v in range(n):
            val = min(1.0, max(0.0, float(sol.values[u * n + v])))
            snapped = Fraction(val).limit_denominator(_SNAP_DENOMINATOR)
            row.append(snapped if abs(float(snapped) - val) <= _SNAP_TOLERANCE else Fraction(val))
        xmat.append(row)
    worst_cover = None
    for (v, w), path in prog.pair_paths.items():
        cover = sum(min(xmat[u][v], xmat[u][w]) for u in path)
        if worst_cover is None or cover < worst_cover:
            worst_cover = cover
    if worst_cover is None or worst_cover <= 0:
        raise SolverError("LP solution violates the covering constraints outright")
    if worst_cover < 1:
        scale = 1 / (worst_cover * (1 - Fraction(1, 10**12)))
        xmat = [[min(Fraction(1), x * scale) for x in row] for row in xmat]
    return xmat


def fractional_target_cost(inst: SearchInstance, xmat, v: int) -> Fraction:
    return sum(
        inst.query_cost(u, v) * xmat[u][v] for u in range(inst.n) if xmat[u][v]
    )


def fractional_objective(inst: SearchInstance, xmat, objective: str) -> Fraction:
    per_target = [fractional_target_cost(inst, xmat, v) for v in range(inst.n)]
    if objective == "avg":
        return sum(inst.weights[v] * per_target[v] for v in range(inst.n))
    return max(per_target)


# ---------------------------------------------------------------------------
# Rounding: fractional column -> query set
# ---------------------------------------------------------------------------


def pseudo_sep_assignment(
    graph: Graph,
    target: int,
    column: Sequence[Fraction],
    threshold: Fraction = ROUNDING_THRESHOLD,
) -> frozenset[int]:
    """Round one fractional column into a query set for `target`.

    Process the tree rooted at the target bottom-up; whenever the not yet
    absorbed column mass in the current subtree reaches one half, its root
    joins the set and the subtree's mass is zeroed.  The set's cost against
    the target is at most twice the column's fractional cost.
    """
    n = graph.n
    parent = graph.bfs_parents(target)
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if parent[v] >= 0:
            children[parent[v]].append(v)
    out: set[int] = set()
    remaining = [Fraction(0)] * n
    stack = [(target, False)]
    while stack:
        u, processed = stack.pop()
        if not processed:
            stack.append((u, True))
            for c in children[u]:
                stack.append((c, False))
            continue
        mass = column[u] + sum(remaining[c] for c in children[u])
        if mass >= threshold:
            out.add(u)
            remaining[u] = Fraction(0)
        else:
            remaining[u] = mass
    return frozenset(out)


def check_pseudo_separator(
    graph: Graph, assignment: Mapping[int, frozenset[int]]
) -> list[tuple[int, int]]:
    """Pairs (u, v) with no witnesses u' in S(u), v' in S(v) such that
    u' lies on the v-v' path and v' lies on the u-u' path.  Empty when the
    assignment is a valid pseudo-separator assignment.
    """
    n = graph.n
    paths: dict[tuple[int, int], frozenset[int]] = {}

    def path_set(a: int, b: int) -> frozenset[int]:
        key = (a, b) if a <= b else (b, a)
        got = paths.get(key)
        if got is None:
            got = frozenset(graph.tree_path(key[0], key[1]))
            paths[key] = got
        return got

    bad = []
    for u in range(n):
        for v in range(u, n):
            ok = False
            for u2 in assignment[u]:
                if ok:
                    break
                for v2 in assignment[v]:
                    if u2 in path_set(v, v2) and v2 in path_set(u, u2):
                        ok = True
                        break
            if not ok:
                bad.append((u, v))
    return bad


# ---------------------------------------------------------------------------
# Reconstruction: assignment -> decision tree
# ---------------------------------------------------------------------------


def reconstruct_decision_tree(
    graph: Graph, assignment: Mapping[int, frozenset[int]]
) -> DecisionTree:
    """Rebuild a strategy whose per-target cost is bounded by its query set.

    Per vertex, the union of paths to its assigned set forms a subtree; for
    assignments whose pairwise witnesses lie on the connecting path (as the
    rounding produces, every set containing its own vertex), these subtrees
    pairwise intersect, hence share a common vertex (Helly property on
    subtrees of a tree), which becomes the root.  The recursion restricts
    each set to the component it descends into: the on-path witnesses of any
    pair inside the component survive the restriction, so the argument
    repeats, and no spent assignment vertex is ever charged twice.
    """

    def recurse(candidate: frozenset[int], sets: Mapping[int, frozenset[int]]) -> DecisionTree:
        if len(candidate) == 1:
            return DecisionTree(next(iter(candidate)))
        common: frozenset[int] | None = None
        for v in candidate:
            hull: set[int] = set()
            for u in sets[v]:
                hull.update(graph.tree_path(v, u))
            common = frozenset(hull) if common is None else common & hull
            if not common:
                raise ReconstructionError(
                    "empty subtree intersection: not a pseudo-separator assignment"
                )
        root = min(common)
        subs = []
        for comp in graph.components(candidate - {root}):
            restricted = {v: sets[v] & comp for v in comp}
            subs.append(recurse(comp, restricted))
        return make_tree(root, subs)

    if len(assignment) != graph.n or any(not s for s in assignment.values()):
        raise ReconstructionError("assignment must give a nonempty set per vertex")
    return recurse(frozenset(range(graph.n)), dict(assignment))


# ---------------------------------------------------------------------------
# End-to-end pipelines
# ---------------------------------------------------------------------------


@dataclass
class LpPipelineResult:
    tree: DecisionTree
    objective: str
    lp_objective: Fraction  # recomputed exactly on the post-processed solution
    solver_objective: float
    x: list[list[Fraction]]
    assignment: dict[int, frozenset[int]]
    program: LpProgram


def lp_pipeline(inst: SearchInstance, objective: str = "avg") -> LpPipelineResult:
    """Solve the LP, round per target, and reconstruct the decision tree."""
    if objective not in ("avg", "worst"):
        raise ValidationError(f"unknown LP objective {objective!r}")
    prog = _build_lp(inst, objective)
    sol = solve_lp(prog)
    xmat = rationalized_x(prog, sol)
    assignment = {
        v: pseudo_sep_assignment(inst.graph, v, [xmat[u][v] for u in range(inst.n)])
        for v in range(inst.n)
    }
    tree = reconstruct_decision_tree(inst.graph, assignment)
    return LpPipelineResult(
        tree=tree,
        objective=objective,
        lp_objective=fractional_objective(inst, xmat, objective),
        solver_objective=sol.objective,
        x=xmat,
        assignment=assignment,
        program=prog,
    )


def two_approx_avg(inst: SearchInstance) -> DecisionTree:
    """Average-case strategy within twice the optimum (monotone tree costs)."""
    return lp_pipeline(inst, "avg").tree


def two_approx_worst(inst: SearchInstance) -> DecisionTree:
    """Worst-case strategy within twice the optimum (monotone tree costs)."""
    return lp_pipeline(inst, "worst").tree
