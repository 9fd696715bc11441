"""Search instances, cost models, decision trees, and their basic calculus.

A search instance is a connected graph with per-vertex weights (how often each
vertex is the target) and a query-cost model.  A strategy is a decision tree:
its root is the first queried vertex, and each child corresponds to one
connected component of the candidate subgraph left after removing the queried
vertex.  This module owns the data types, validation, cost evaluation, the
level decomposition of a strategy into separators, instance generators, and
the canonical file formats.

Instances and decision trees are frozen after construction and every
operation here is a pure function of its inputs, so values can be shared
freely across threads or processes.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

I64_MAX = 2**63 - 1


class GraphSearchError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(GraphSearchError):
    """An input violates a documented precondition."""


class UnsupportedModelError(GraphSearchError):
    """The operation does not support the instance's cost model."""


class LimitExceededError(GraphSearchError):
    """An exact solver was asked to exceed its configured size limit."""


class ParseError(GraphSearchError):
    """A serialized document is malformed; the message names the field."""


class SolverError(GraphSearchError):
    """An embedded numerical solver failed."""


def ensure_i64(value: int, what: str) -> int:
    """Reject results that exceed 64-bit integer capacity (no wraparound)."""
    if not -I64_MAX - 1 <= value <= I64_MAX:
        raise OverflowError(f"{what} exceeds 64-bit integer capacity: {value}")
    return value


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 0..n-1 with sorted adjacency lists.

    Construction is permissive so that malformed graphs can be built and then
    reported by :func:`validate_instance`; the documented invariants (simple,
    connected) are checked there, not here.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_edges(n: int, edges: Sequence[Sequence[int]]) -> "Graph":
        if n < 1:
            raise ValidationError("graph needs at least one vertex")
        adj: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u},{v}) out of range for n={n}")
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        return Graph(n, tuple(tuple(sorted(a)) for a in adj))

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def is_simple(self) -> bool:
        for v in range(self.n):
            a = self.adjacency[v]
            if v in a:
                return False
            if len(set(a)) != len(a):
                return False
        return True

    def is_connected(self) -> bool:
        return len(self.component_of(0, frozenset(range(self.n)))) == self.n

    def is_tree(self) -> bool:
        return self.is_simple() and self.is_connected() and self.edge_count() == self.n - 1

    def is_path(self) -> bool:
        if not self.is_tree():
            return False
        degs = [len(a) for a in self.adjacency]
        return self.n == 1 or max(degs) <= 2

    def is_star(self) -> bool:
        if not self.is_tree():
            return False
        if self.n <= 2:
            return True
        return sum(1 for a in self.adjacency if len(a) == self.n - 1) == 1

    def star_center(self) -> int:
        """Center of a star; for n <= 2 the convention is vertex 0."""
        if not self.is_star():
            raise ValidationError("graph is not a star")
        if self.n <= 2:
            return 0
        return max(range(self.n), key=lambda v: len(self.adjacency[v]))

    def component_of(self, start: int, within: frozenset[int]) -> frozenset[int]:
        """Connected component of `start` in the subgraph induced by `within`."""
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for nb in self.adjacency[u]:
                if nb in within and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        return frozenset(seen)

    def components(self, within: frozenset[int]) -> list[frozenset[int]]:
        """Connected components of the induced subgraph, sorted by min vertex."""
        remaining = set(within)
        comps = []
        while remaining:
            comp = self.component_of(min(remaining), frozenset(remaining))
            comps.append(comp)
            remaining -= comp
        comps.sort(key=min)
        return comps

    def bfs_parents(self, root: int, within: frozenset[int] | None = None) -> list[int]:
        """Parent of each vertex on a BFS tree from `root` (-1 for root/unreached)."""
        allowed = within if within is not None else frozenset(range(self.n))
        parent = [-1] * self.n
        seen = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for nb in self.adjacency[u]:
                if nb in allowed and nb not in seen:
                    seen.add(nb)
                    parent[nb] = u
                    queue.append(nb)
        return parent

    def tree_path(self, u: int, v: int) -> tuple[int, ...]:
        """Vertices on the unique u-v path (inclusive); graph must be a tree."""
        parent = self.bfs_parents(u)
        path = [v]
        while path[-1] != u:
            p = parent[path[-1]]
            if p < 0:
                raise ValidationError(f"no path between {u} and {v}")
            path.append(p)
        path.reverse()
        return tuple(path)

    def distances_from(self, v: int) -> list[int]:
        dist = [-1] * self.n
        dist[v] = 0
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for nb in self.adjacency[u]:
                if dist[nb] < 0:
                    dist[nb] = dist[u] + 1
                    queue.append(nb)
        return dist

    def neighbor_masks(self) -> list[int]:
        """Adjacency encoded as bitmasks; only valid for n <= 63."""
        if self.n > 63:
            raise LimitExceededError("bitmask form requires n <= 63")
        return [sum(1 << u for u in a) for a in self.adjacency]


# ---------------------------------------------------------------------------
# Cost models and instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexCost:
    """Query cost that depends only on the queried vertex."""

    costs: tuple[int, ...]

    def cost(self, v: int, x: int) -> int:
        return self.costs[v]


@dataclass(frozen=True)
class PairwiseCost:
    """Query cost c(v, x) depending on the queried vertex and the target.

    `monotone` asserts that on a tree, costs never decrease when the query
    moves away from the target along the path between them.
    """

    costs: tuple[tuple[int, ...], ...]
    monotone: bool = False

    def cost(self, v: int, x: int) -> int:
        return self.costs[v][x]


CostModel = VertexCost | PairwiseCost


@dataclass(frozen=True)
class SearchInstance:
    """A graph, per-vertex target weights, and a query-cost model."""

    graph: Graph
    weights: tuple[int, ...]
    cost: CostModel

    @property
    def n(self) -> int:
        return self.graph.n

    def weight(self, v: int) -> int:
        return self.weights[v]

    def weight_of(self, vertices) -> int:
        return sum(self.weights[v] for v in vertices)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @property
    def is_trivial(self) -> bool:
        """True when no vertex has positive weight: any valid tree is optimal."""
        return self.total_weight == 0

    def query_cost(self, v: int, x: int) -> int:
        return self.cost.cost(v, x)

    def vertex_costs(self) -> tuple[int, ...]:
        if not isinstance(self.cost, VertexCost):
            raise UnsupportedModelError("operation requires target-independent costs")
        return self.cost.costs


def monotonicity_violation(
    graph: Graph, costs: Sequence[Sequence[int]]
) -> tuple[int, int, int] | None:
    """First triple (u, v, x) with u on the v-x path and c(u,x) > c(v,x).

    Stepwise check along BFS trees toward each target: it suffices that the
    cost never increases when moving one hop toward the target, which the
    path-wise condition is equivalent to by transitivity.
    """
    for x in range(graph.n):
        parent = graph.bfs_parents(x)
        for v in range(graph.n):
            if v == x:
                continue
            u = parent[v]  # next hop from v toward x
            if u >= 0 and costs[u][x] > costs[v][x]:
                return (u, v, x)
    return None


def validate_instance(inst: SearchInstance) -> list[str]:
    """Return all invariant violations; an empty list means the instance is valid."""
    out: list[str] = []
    g = inst.graph
    if g.n < 1:
        return ["graph has no vertices"]
    for v in range(g.n):
        a = g.adjacency[v]
        if v in a:
            out.append(f"self-loop at vertex {v}")
        if len(set(a)) != len(a):
            out.append(f"parallel edges at vertex {v}")
        for u in a:
            if v not in g.adjacency[u]:
                out.append(f"asymmetric adjacency between {v} and {u}")
    if not g.is_connected():
        out.append("graph is disconnected")
    if len(inst.weights) != g.n:
        out.append(f"weights length {len(inst.weights)} != n {g.n}")
    elif any(w < 0 for w in inst.weights):
        out.append("negative weight")
    cost = inst.cost
    if isinstance(cost, VertexCost):
        if len(cost.costs) != g.n:
            out.append(f"cost vector length {len(cost.costs)} != n {g.n}")
        elif any(c < 0 for c in cost.costs):
            out.append("negative cost")
    else:
        if len(cost.costs) != g.n or any(len(row) != g.n for row in cost.costs):
            out.append(f"cost matrix is not {g.n}x{g.n}")
        elif any(c < 0 for row in cost.costs for c in row):
            out.append("negative cost")
        elif cost.monotone:
            if not g.is_tree():
                out.append("monotone cost flag requires a tree")
            else:
                bad = monotonicity_violation(g, cost.costs)
                if bad is not None:
                    u, v, x = bad
                    out.append(
                        f"monotonicity violated: c({u},{x})={cost.costs[u][x]} > "
                        f"c({v},{x})={cost.costs[v][x]} with {u} on the path from {v} to {x}"
                    )
    if not out:
        total_cost = (
            sum(cost.costs)
            if isinstance(cost, VertexCost)
            else sum(c for row in cost.costs for c in row)
        )
        # Capacity bound: every cost aggregate in the package is at most
        # total_weight * total_cost, so checking the product once up front
        # makes downstream 64-bit arithmetic safe.
        if max(1, inst.total_weight) * max(1, total_cost) > I64_MAX:
            out.append("weights and costs exceed 64-bit arithmetic capacity")
    return out


# ---------------------------------------------------------------------------
# Decision trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecisionTree:
    """A search strategy: query `root` first, then recurse per response.

    Children are keyed by the connected component of the candidate subgraph
    minus the root that each response selects; the canonical key is the
    minimum vertex id in that component.  Children are kept sorted by key.
    """

    root: int
    children: tuple[tuple[int, "DecisionTree"], ...] = ()

    def child(self, key: int) -> "DecisionTree":
        for k, sub in self.children:
            if k == key:
                return sub
        raise KeyError(key)

    def vertices(self) -> frozenset[int]:
        out = {self.root}
        for _, sub in self.children:
            out |= sub.vertices()
        return frozenset(out)

    def node_count(self) -> int:
        return 1 + sum(sub.node_count() for _, sub in self.children)

    def walk(self) -> Iterator["DecisionTree"]:
        yield self
        for _, sub in self.children:
            yield from sub.walk()


def make_tree(root: int, subtrees: Sequence[DecisionTree]) -> DecisionTree:
    """Assemble a node whose children are keyed by their min covered vertex."""
    keyed = sorted(((min(sub.vertices()), sub) for sub in subtrees), key=lambda kv: kv[0])
    return DecisionTree(root, tuple(keyed))


def trivial_tree(graph: Graph, candidate: frozenset[int], pick: Callable[[frozenset[int]], int]) -> DecisionTree:
    """Build a valid decision tree for `candidate` by repeatedly applying `pick`."""
    v = pick(candidate)
    subs = [trivial_tree(graph, comp, pick) for comp in graph.components(candidate - {v})]
    return make_tree(v, subs)


def size_centroid_tree(graph: Graph, candidate: frozenset[int]) -> DecisionTree:
    """Decision tree querying the vertex-count centroid at every step.

    Used as the degenerate fallback on zero-total-weight candidates, where any
    valid tree has cost 0 but termination still needs shrinking components.
    """

    def pick(cand: frozenset[int]) -> int:
        def key(v: int) -> tuple[int, int]:
            comps = graph.components(cand - {v})
            return (max((len(c) for c in comps), default=0), v)

        return min(cand, key=key)

    return trivial_tree(graph, candidate, pick)


def validate_decision_tree(inst: SearchInstance, tree: DecisionTree) -> list[str]:
    """Check the component bijection, coverage, and laminarity invariants.

    Returns a list of violations, topmost node first; empty when valid.
    """
    g = inst.graph
    out: list[str] = []

    def check(node: DecisionTree, candidate: frozenset[int]) -> None:
        if node.root not in candidate:
            out.append(f"node {node.root} is not in its candidate set {sorted(candidate)}")
            return
        comps = g.components(candidate - {node.root})
        comp_by_key = {min(c): c for c in comps}
        child_keys = [k for k, _ in node.children]
        if len(set(child_keys)) != len(child_keys):
            out.append(f"node {node.root} has duplicate component keys")
            return
        if set(child_keys) != set(comp_by_key):
            out.append(
                f"node {node.root}: children keys {sorted(child_keys)} do not match "
                f"component keys {sorted(comp_by_key)}"
            )
            return
        for key, sub in node.children:
            comp = comp_by_key[key]
            covered = sub.vertices()
            if covered != comp:
                out.append(
                    f"node {node.root}, key {key}: subtree covers {sorted(covered)} "
                    f"but the component is {sorted(comp)}"
                )
                return
            check(sub, comp)

    check(tree, frozenset(range(g.n)))
    return out


def evaluate_target_cost(inst: SearchInstance, tree: DecisionTree, target: int) -> int:
    """Total cost of the queries on the root-to-target path, target included."""
    g = inst.graph
    if not 0 <= target < g.n:
        raise ValidationError(f"target {target} is not a vertex of the graph")
    candidate = frozenset(range(g.n))
    node = tree
    total = 0
    while True:
        total += inst.query_cost(node.root, target)
        if node.root == target:
            return ensure_i64(total, "target cost")
        rest = candidate - {node.root}
        comp = g.component_of(target, rest)
        try:
            node = node.child(min(comp))
        except KeyError:
            raise ValidationError(
                f"decision tree has no branch for the component containing {target}"
            ) from None
        candidate = comp


def average_cost(inst: SearchInstance, tree: DecisionTree) -> int:
    """Weighted sum over targets of the per-target search cost."""
    total = 0
    for x in range(inst.n):
        if inst.weights[x]:
            total += inst.weights[x] * evaluate_target_cost(inst, tree, x)
    return ensure_i64(total, "average cost")


def worst_cost(inst: SearchInstance, tree: DecisionTree) -> int:
    """Maximum per-target search cost over all targets (weights play no role)."""
    return max(evaluate_target_cost(inst, tree, x) for x in range(inst.n))


def candidate_sets(inst: SearchInstance, tree: DecisionTree) -> dict[int, frozenset[int]]:
    """Map each vertex to the candidate set in which it is queried."""
    out: dict[int, frozenset[int]] = {}

    def walk(node: DecisionTree, candidate: frozenset[int]) -> None:
        out[node.root] = candidate
        comps = {min(c): c for c in inst.graph.components(candidate - {node.root})}
        for key, sub in node.children:
            walk(sub, comps[key])

    walk(tree, frozenset(range(inst.n)))
    return out


# ---------------------------------------------------------------------------
# Level decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelDecomposition:
    """Separators of a strategy, one per weight level k = 0..w(G).

    `separators[k]` contains the vertices queried while more than k units of
    weight were still candidates.  `families[k]` lists the maximal candidate
    sets of weight exactly k; recording each maximal set once, at its own
    weight, keeps the families disjoint across levels while
    ``V - union(families[0..k])`` still equals ``separators[k]``.
    """

    total_weight: int
    separators: tuple[frozenset[int], ...]
    families: tuple[tuple[frozenset[int], ...], ...]

    def separator_cost(self, costs: Sequence[int], k: int) -> int:
        return sum(costs[v] for v in self.separators[k])


def decompose_levels(inst: SearchInstance, tree: DecisionTree) -> LevelDecomposition:
    """Split a strategy into its per-level separators (target-independent costs).

    The k-th separator consists of the vertices whose candidate set at query
    time weighs more than k.  Its costs sum, over k = 0..w(G)-1, back to the
    weighted average cost of the strategy.
    """
    if not isinstance(inst.cost, VertexCost):
        raise UnsupportedModelError("level decomposition requires target-independent costs")
    cands = candidate_sets(inst, tree)
    wg = inst.total_weight
    cand_weight = {v: inst.weight_of(c) for v, c in cands.items()}

    separators = tuple(
        frozenset(v for v in range(inst.n) if cand_weight[v] > k) for k in range(wg + 1)
    )

    # Parent candidate weight per node; the root's candidate has no parent.
    fams: list[list[frozenset[int]]] = [[] for _ in range(wg + 1)]

    def walk(node: DecisionTree, parent_weight: int | None) -> None:
        w_here = cand_weight[node.root]
        if parent_weight is None or parent_weight > w_here:
            fams[w_here].append(cands[node.root])
        for _, sub in node.children:
            walk(sub, w_here)

    walk(tree, None)
    families = tuple(tuple(sorted(f, key=min)) for f in fams)
    return LevelDecomposition(wg, separators, families)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

GENERATOR_KINDS = (
    "path",
    "star",
    "spider",
    "random_tree",
    "random_connected_graph",
    "linear_ordering_star",
)


def _gen_costs(
    rng: random.Random, graph: Graph, params: Mapping[str, object]
) -> CostModel:
    cmin = int(params.get("cmin", 0))
    cmax = int(params.get("cmax", 10))
    variant = str(params.get("cost", "vertex"))
    if cmin < 0 or cmax < cmin:
        raise ValidationError(f"invalid cost range [{cmin},{cmax}]")
    n = graph.n
    if variant == "vertex":
        return VertexCost(tuple(rng.randint(cmin, cmax) for _ in range(n)))
    if variant == "pairwise":
        rows = tuple(tuple(rng.randint(cmin, cmax) for _ in range(n)) for _ in range(n))
        return PairwiseCost(rows, monotone=False)
    if variant == "monotone":
        if not graph.is_tree():
            raise ValidationError("monotone costs are only generated for trees")
        # c(v, x) = f_x(dist(v, x)) with f_x a random nondecreasing step function.
        cstep = int(params.get("cstep", 3))
        cols: list[list[int]] = []
        for x in range(n):
            dist = graph.distances_from(x)
            f = [rng.randint(cmin, cmax)]
            for _ in range(max(dist)):
                f.append(f[-1] + rng.randint(0, cstep))
            cols.append([f[dist[v]] for v in range(n)])
        rows = tuple(tuple(cols[x][v] for x in range(n)) for v in range(n))
        return PairwiseCost(rows, monotone=True)
    raise ValidationError(f"unknown cost variant {variant!r}")


def _gen_weights(rng: random.Random, n: int, params: Mapping[str, object]) -> tuple[int, ...]:
    wmin = int(params.get("wmin", 0))
    wmax = int(params.get("wmax", 10))
    if wmin < 0 or wmax < wmin:
        raise ValidationError(f"invalid weight range [{wmin},{wmax}]")
    return tuple(rng.randint(wmin, wmax) for _ in range(n))


def _gen_graph(rng: random.Random, kind: str, params: Mapping[str, object]) -> Graph:
    n = int(params.get("n", 0))
    if n < 1:
        raise ValidationError("generator needs n >= 1")
    if kind == "path":
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "star":
        return Graph.from_edges(n, [(0, i) for i in range(1, n)])
    if kind == "spider":
        legs = int(params.get("legs", min(3, max(1, n - 1))))
        if n > 1 and not 1 <= legs <= n - 1:
            raise ValidationError(f"spider with n={n} needs 1 <= legs <= {n - 1}")
        edges = []
        tips = []
        nxt = 1
        for leg in range(min(legs, n - 1)):
            edges.append((0, nxt))
            tips.append(nxt)
            nxt += 1
        for v in range(nxt, n):
            leg = rng.randrange(len(tips))
            edges.append((tips[leg], v))
            tips[leg] = v
        return Graph.from_edges(n, edges)
    if kind == "random_tree":
        edges = [(rng.randrange(v), v) for v in range(1, n)]
        return Graph.from_edges(n, edges)
    if kind == "random_connected_graph":
        edges = {(rng.randrange(v), v) for v in range(1, n)}
        extra = int(params.get("extra_edges", max(1, n // 3)))
        non_edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if (u, v) not in edges
        ]
        rng.shuffle(non_edges)
        edges.update(non_edges[:extra])
        return Graph.from_edges(n, sorted(edges))
    raise ValidationError(f"unknown generator kind {kind!r}")


def generate(kind: str, params: Mapping[str, object] | None, seed: int) -> SearchInstance:
    """Build a deterministic random instance of the given kind.

    `linear_ordering_star` embeds an ordering-cost matrix A into a star: the
    center is prohibitively expensive to query before any leaf (a finite
    sentinel of sum(A)+1 stands in for infinity), leaves cost A[i][j] against
    each other, and everything else costs 0, so optimal strategies are exactly
    the leaf orderings.
    """
    params = dict(params or {})
    rng = random.Random(seed)
    if kind == "linear_ordering_star":
        matrix = params.get("matrix")
        if matrix is None:
            raise ValidationError("linear_ordering_star requires params['matrix']")
        m = len(matrix)
        if m < 1 or any(len(row) != m for row in matrix):
            raise ValidationError("matrix must be square and nonempty")
        if any(a < 0 for row in matrix for a in row):
            raise ValidationError("matrix entries must be nonnegative")
        n = m + 1
        large = sum(a for row in matrix for a in row) + 1
        rows = [[0] * n for _ in range(n)]
        for j in range(1, n):
            rows[0][j] = large  # center queried while a leaf is still hidden
        for i in range(1, n):
            for j in range(1, n):
                if i != j:
                    rows[i][j] = matrix[i - 1][j - 1]
        graph = Graph.from_edges(n, [(0, i) for i in range(1, n)])
        inst = SearchInstance(
            graph,
            (1,) * n,
            PairwiseCost(tuple(tuple(r) for r in rows), monotone=False),
        )
    else:
        graph = _gen_graph(rng, kind, params)
        weights = _gen_weights(rng, graph.n, params)
        cost = _gen_costs(rng, graph, params)
        inst = SearchInstance(graph, weights, cost)
    problems = validate_instance(inst)
    if problems:
        raise ValidationError(f"generated instance is invalid: {problems[0]}")
    return inst


# ---------------------------------------------------------------------------
# Serialization (canonical, byte-stable)
# ---------------------------------------------------------------------------


def _dump_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def serialize_instance(inst: SearchInstance) -> str:
    cost = inst.cost
    if isinstance(cost, VertexCost):
        cost_obj = {"variant": "vertex", "monotone": False, "values": list(cost.costs)}
    else:
        cost_obj = {
            "variant": "pairwise",
            "monotone": cost.monotone,
            "values": [list(row) for row in cost.costs],
        }
    doc = {
        "version": 1,
        "n": inst.n,
        "edges": sorted([u, v] for u, v in inst.graph.edges()),
        "weights": list(inst.weights),
        "cost": cost_obj,
    }
    return _dump_canonical(doc)


def _expect(doc: Mapping, field: str, kind, where: str):
    if field not in doc:
        raise ParseError(f"{where}: missing field {field!r}")
    value = doc[field]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ParseError(f"{where}.{field}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def parse_instance(text: str) -> SearchInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"instance: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("instance: top-level document must be an object")
    if _expect(doc, "version", int, "instance") != 1:
        raise ParseError(f"instance.version: unsupported version {doc['version']}")
    n = _expect(doc, "n", int, "instance")
    edges = _expect(doc, "edges", list, "instance")
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise ParseError(f"instance.edges[{i}]: expected a pair of vertex ids")
    weights = _expect(doc, "weights", list, "instance")
    if not all(isinstance(w, int) and not isinstance(w, bool) for w in weights):
        raise ParseError("instance.weights: expected integers")
    cost_doc = _expect(doc, "cost", dict, "instance")
    variant = _expect(cost_doc, "variant", str, "instance.cost")
    monotone = _expect(cost_doc, "monotone", bool, "instance.cost")
    values = _expect(cost_doc, "values", list, "instance.cost")
    cost: CostModel
    if variant == "vertex":
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in values):
            raise ParseError("instance.cost.values: expected integers")
        cost = VertexCost(tuple(values))
    elif variant == "pairwise":
        for i, row in enumerate(values):
            if not (isinstance(row, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in row)):
                raise ParseError(f"instance.cost.values[{i}]: expected a row of integers")
        cost = PairwiseCost(tuple(tuple(r) for r in values), monotone=monotone)
    else:
        raise ParseError(f"instance.cost.variant: unknown variant {variant!r}")
    try:
        graph = Graph.from_edges(n, edges)
    except ValidationError as exc:
        raise ParseError(f"instance.edges: {exc}") from None
    return SearchInstance(graph, tuple(weights), cost)


def _tree_to_obj(tree: DecisionTree) -> dict:
    return {
        "root": tree.root,
        "children": [
            {"node": sub.root, "component_key": key, "subtree": _tree_to_obj(sub)}
            for key, sub in tree.children
        ],
    }


def serialize_decision_tree(tree: DecisionTree) -> str:
    doc = _tree_to_obj(tree)
    doc["version"] = 1
    return _dump_canonical(doc)


def _tree_from_obj(doc: Mapping, where: str) -> DecisionTree:
    root = _expect(doc, "root", int, where)
    children_doc = _expect(doc, "children", list, where)
    children = []
    for i, entry in enumerate(children_doc):
        ctx = f"{where}.children[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{ctx}: expected an object")
        node = _expect(entry, "node", int, ctx)
        key = _expect(entry, "component_key", int, ctx)
        sub = _tree_from_obj(_expect(entry, "subtree", dict, ctx), f"{ctx}.subtree")
        if sub.root != node:
            raise ParseError(f"{ctx}: node {node} does not match subtree root {sub.root}")
        covered = sub.vertices()
        if key != min(covered):
            raise ParseError(
                f"{ctx}: component_key {key} does not appear as the minimum of the "
                f"component {sorted(covered)}"
            )
        children.append((key, sub))
    keys = [k for k, _ in children]
    if len(set(keys)) != len(keys):
        raise ParseError(f"{where}: duplicate component keys")
    return DecisionTree(root, tuple(sorted(children, key=lambda kv: kv[0])))


def parse_decision_tree(text: str) -> DecisionTree:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"tree: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("tree: top-level document must be an object")
    if _expect(doc, "version", int, "tree") != 1:
        raise ParseError(f"tree.version: unsupported version {doc['version']}")
    return _tree_from_obj(doc, "tree")


# ---------------------------------------------------------------------------
# Induced sub-instances (used by the recursive solvers)
# ---------------------------------------------------------------------------


def induced_instance(
    inst: SearchInstance, vertices: frozenset[int]
) -> tuple[SearchInstance, list[int]]:
    """Relabel the induced subgraph to 0..m-1; returns (instance, local->global map)."""
    mapping = sorted(vertices)
    index = {v: i for i, v in enumerate(mapping)}
    m = len(mapping)
    adj = tuple(
        tuple(index[u] for u in inst.graph.adjacency[v] if u in vertices) for v in mapping
    )
    graph = Graph(m, adj)
    weights = tuple(inst.weights[v] for v in mapping)
    cost: CostModel
    if isinstance(inst.cost, VertexCost):
        cost = VertexCost(tuple(inst.cost.costs[v] for v in mapping))
    else:
        cost = PairwiseCost(
            tuple(tuple(inst.cost.costs[v][x] for x in mapping) for v in mapping),
            monotone=inst.cost.monotone,
        )
    return SearchInstance(graph, weights, cost), mapping
