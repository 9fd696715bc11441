"""Backend equivalence: the compiled kernels must match the pure-Python
reference bit for bit (values, tie-breaking, tracebacks)."""

import random
from fractions import Fraction

import pytest

from graphsearch._kernels import available_backends
from graphsearch.bounded_fptas import LN2_LOWER, MomentGrid
from graphsearch.core import Graph, generate
from graphsearch.separator import _rooted_orders

BACKENDS = available_backends()

pytestmark = pytest.mark.skipif(
    "cython" not in BACKENDS, reason="compiled kernels not built"
)


def random_graph_masks(rng, n):
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    for _ in range(rng.randint(0, n // 2)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def test_mask_and_subset_and_worst_and_cuts_agree():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randint(1, 8)
        adj = random_graph_masks(rng, n)
        full = (1 << n) - 1
        wc = [[rng.randint(0, 9) for _ in range(n)] for _ in range(n)]
        costs = [rng.randint(0, 9) for _ in range(n)]
        weights = [rng.randint(0, 9) for _ in range(n)]
        assert py.mask_components(adj, full) == cy.mask_components(adj, full)
        o1, r1 = py.subset_dp_average(adj, wc)
        o2, r2 = cy.subset_dp_average(adj, wc)
        assert list(o1) == list(o2)
        assert list(r1) == [int(x) for x in r2]
        bound = sum(weights) // 2
        assert py.alpha_separator(adj, costs, weights, bound) == cy.alpha_separator(
            adj, costs, weights, bound
        )
        if sum(weights):
            assert py.min_ratio_cut(adj, costs, weights) == cy.min_ratio_cut(
                adj, costs, weights
            )
        assert py.worst_enum(adj, wc, full, [0] * n, 1 << 62) == cy.worst_enum(
            adj, wc, full, [0] * n, 1 << 62
        )


def test_separator_dp_agrees():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 11)
        g = Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])
        order, children = _rooted_orders(g)
        costs = [rng.randint(0, 9) for _ in range(n)]
        weights = [rng.randint(0, 9) for _ in range(n)]
        bound = rng.randint(0, sum(weights) + 1)
        assert py.separator_dp(order, children, costs, weights, bound) == cy.separator_dp(
            order, children, costs, weights, bound
        )


def test_schedule_dp_agrees():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = random.Random(3)
    for _ in range(60):
        L = rng.randint(0, 9)
        proc = [rng.randint(0, 6) for _ in range(L)]
        wts = [rng.randint(0, 5) for _ in range(L)]
        rej = [rng.randint(0, 50) for _ in range(L)]
        tau = rng.randint(0, 18)
        shift = rng.choice((0, 32))
        assert py.schedule_dp(proc, wts, rej, tau, shift) == cy.schedule_dp(
            proc, wts, rej, tau, shift
        )


def test_gap_dp_agrees():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(3, 9)
        delta = Fraction(1) * LN2_LOWER / n
        grid = MomentGrid.build(delta, rng.randint(5, 40))
        m = list(grid.moments)
        k = rng.randint(1, 3)
        pred, caps = [], []
        prev = 0
        for _ in range(k):
            j = rng.randrange(len(m) // 2, len(m))
            caps.append(j)
            pred.append(prev)
            prev = m[j]
        L = rng.randint(1, 6)
        cs = [rng.randint(0, 5) << 32 for _ in range(L)]
        ws = [rng.randint(0, 5) for _ in range(L)]
        own = [rng.randint(0, 12) << 32 for _ in range(L)]
        paths = [tuple(range(rng.randint(1, k))) for _ in range(L)]
        assert py.gap_dp(m, pred, caps, cs, ws, own, paths) == cy.gap_dp(
            m, pred, caps, cs, ws, own, paths
        )
        assert py.gap_dp(m, pred, caps, cs, ws, own, paths, trace=True) == cy.gap_dp(
            m, pred, caps, cs, ws, own, paths, trace=True
        )


def test_solvers_identical_across_backends(monkeypatch):
    """End-to-end: forcing the pure backend must not change any result."""
    import importlib

    import graphsearch._kernels as kernels
    from graphsearch import oracles, separator

    inst = generate("random_tree", {"n": 9}, 5)
    want_cost, want_tree = oracles.opt_average_subset_dp(inst)
    want_sep = separator.separator_dp(
        inst.graph, inst.vertex_costs(), inst.weights, 2
    )
    py = BACKENDS["python"]
    for name in ("subset_dp_average", "mask_components", "separator_dp"):
        monkeypatch.setattr(kernels, name, getattr(py, name))
    monkeypatch.setattr(oracles, "_kernels", kernels)
    got_cost, got_tree = oracles.opt_average_subset_dp(inst)
    assert (got_cost, got_tree) == (want_cost, want_tree)
    assert separator.separator_dp(
        inst.graph, inst.vertex_costs(), inst.weights, 2
    ) == want_sep
