"""Deterministic synthetic inter-domain topology for tests and demos.

Builds a connected annotated graph that looks like a mid-2000s AS-level
snapshot: heavy-tailed total degrees, a small clique of top providers at
the root of a strict customer-provider hierarchy, settlement-free peering
concentrated between networks of similar size, and roughly one transit
edge per node-degree unit with peering an order of magnitude rarer.

Connectivity is guaranteed by construction: node ids are assigned in
decreasing degree order, the top ``TIER1_COUNT`` ids form a peering
clique, and every other node buys transit from some strictly smaller id,
so provider chains terminate in the clique.
"""

from __future__ import annotations

import numpy as np

from .graph_core import AnnotatedGraph, EdgeKind, simplify_to_lcc

DEFAULT_SIZE = 19036
DEFAULT_SEED = 7

TIER1_COUNT = 12
DEGREE_EXPONENT = 2.1
DEGREE_CAP = 2600
# Extra head mass at degrees 1 and 2; tunes the average degree around 4.2
# while leaving the tail exponent alone.
ONE_MASS = 0.10
TWO_MASS = 0.22
# Providers per node: 1 + Poisson with a rate growing in log degree, so
# multihoming deepens with size.  Capped by the degree itself.
CUST_BASE = 2.06
CUST_LOG_W = 0.50
# Peer stubs per node follow Poisson(PEER_BASE * k^PEER_POW / (1 + k/PEER_DAMP)),
# capped by spare degree: peering grows sublinearly with size and the very
# largest networks rely on the tier-1 clique instead.
PEER_MIN_DEGREE = 2
PEER_BASE = 0.95
PEER_POW = 0.55
PEER_DAMP = 800.0
TIER1_EXTRA_PEERS = 6.0
# Peer stubs pair up inside sorted blocks of this size.
PEER_WINDOW = 256


class _CapacityTree:
    """Fenwick tree over nonnegative weights supporting prefix-bounded
    weighted sampling and decrement."""

    def __init__(self, weights):
        self._n = len(weights)
        tree = [0] * (self._n + 1)
        for i in range(1, self._n + 1):
            tree[i] += int(weights[i - 1])
            j = i + (i & -i)
            if j <= self._n:
                tree[j] += tree[i]
        self._tree = tree

    def prefix_sum(self, count: int) -> int:
        total = 0
        i = count
        while i > 0:
            total += self._tree[i]
            i -= i & -i
        return total

    def pick(self, rng: np.random.Generator, count: int) -> int | None:
        """Index < count drawn with probability proportional to weight."""
        bound = self.prefix_sum(count)
        if bound <= 0:
            return None
        rem = int(rng.integers(bound)) + 1
        pos = 0
        step = 1 << (self._n.bit_length() - 1)
        while step:
            nxt = pos + step
            if nxt <= self._n and self._tree[nxt] < rem:
                rem -= self._tree[nxt]
                pos = nxt
            step >>= 1
        return pos

    def add(self, idx: int, delta: int) -> None:
        i = idx + 1
        while i <= self._n:
            self._tree[i] += delta
            i += i & -i


def _sample_total_degrees(n: int, rng: np.random.Generator) -> np.ndarray:
    """Heavy-tailed degrees: extra mass at 1 and 2, otherwise a discretized
    Pareto tail with the configured exponent, resampled above the cap."""
    alpha = DEGREE_EXPONENT - 1.0
    pick = rng.random(n)
    deg = np.where(pick < ONE_MASS, 1, 2).astype(np.int64)
    idx = np.flatnonzero(pick >= ONE_MASS + TWO_MASS)
    while idx.size:
        u = rng.random(idx.size)
        draw = np.floor(u ** (-1.0 / alpha)).astype(np.int64)
        deg[idx] = draw
        idx = idx[draw > DEGREE_CAP]
    return deg


def make_fixture_graph(n: int = DEFAULT_SIZE,
                       seed: int = DEFAULT_SEED) -> AnnotatedGraph:
    """Build the synthetic topology; same (n, seed) gives the same graph."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    t1 = min(TIER1_COUNT, max(n // 4, 1))

    deg = _sample_total_degrees(n, rng)
    deg[::-1].sort()
    # the clique must fit inside tier-1 degrees
    deg[:t1] = np.maximum(deg[:t1], t1 + 8)

    cust = np.zeros(n, dtype=np.int64)
    peer = np.zeros(n, dtype=np.int64)
    if t1 > 1:
        peer[:t1] = (t1 - 1) + rng.poisson(TIER1_EXTRA_PEERS, t1)
        peer[:t1] = np.minimum(peer[:t1], deg[:t1] - 1)

    rest = slice(t1, n)
    lam = CUST_BASE + CUST_LOG_W * np.log2(deg[rest].astype(np.float64))
    cust[rest] = np.minimum(deg[rest], 1 + rng.poisson(lam))

    spare = deg[rest] - cust[rest]
    k = deg[rest].astype(np.float64)
    mu = PEER_BASE * k ** PEER_POW / (1.0 + k / PEER_DAMP)
    eligible = (deg[rest] >= PEER_MIN_DEGREE) & (spare >= 1)
    drawn = rng.poisson(np.where(eligible, mu, 0.0))
    peer[rest] = np.minimum(drawn, spare)

    prov = deg - cust - peer

    edge_u: list[np.ndarray] = []
    edge_v: list[np.ndarray] = []
    edge_kind: list[np.ndarray] = []

    # tier-1 peering clique
    if t1 > 1:
        iu, iv = np.triu_indices(t1, k=1)
        edge_u.append(iu.astype(np.int64))
        edge_v.append(iv.astype(np.int64))
        edge_kind.append(np.full(iu.size, int(EdgeKind.P2P), dtype=np.uint8))

    # spanning transit: each node buys from a strictly smaller id, picked
    # proportionally to remaining provider capacity
    prov_rem = prov.copy()
    cust_rem = cust.copy()
    tree = _CapacityTree(np.maximum(prov_rem, 0))
    span_c = np.empty(n - t1, dtype=np.int64)
    span_p = np.empty(n - t1, dtype=np.int64)
    for x in range(t1, n):
        pick = tree.pick(rng, x)
        if pick is None:
            pick = int(rng.integers(t1))
        else:
            tree.add(pick, -1)
        prov_rem[pick] -= 1
        cust_rem[x] -= 1
        span_c[x - t1] = x
        span_p[x - t1] = pick
    edge_u.append(span_c)
    edge_v.append(span_p)
    edge_kind.append(np.full(span_c.size, int(EdgeKind.C2P), dtype=np.uint8))

    # remaining transit stubs matched uniformly
    ids = np.arange(n)
    cust_stubs = np.repeat(ids, np.maximum(cust_rem, 0))
    prov_stubs = np.repeat(ids, np.maximum(prov_rem, 0))
    rng.shuffle(cust_stubs)
    rng.shuffle(prov_stubs)
    k = min(cust_stubs.size, prov_stubs.size)
    edge_u.append(cust_stubs[:k])
    edge_v.append(prov_stubs[:k])
    edge_kind.append(np.full(k, int(EdgeKind.C2P), dtype=np.uint8))

    # peering: stubs sorted by host degree pair up within shuffled blocks,
    # so peers have similar sizes without being forced identical
    peer_rem = peer.copy()
    if t1 > 1:
        peer_rem[:t1] -= t1 - 1
    peer_stubs = np.repeat(ids, np.maximum(peer_rem, 0))
    order = np.argsort(deg[peer_stubs], kind="stable")
    peer_stubs = peer_stubs[order]
    block = np.arange(peer_stubs.size) // PEER_WINDOW
    peer_stubs = peer_stubs[np.lexsort((rng.random(peer_stubs.size), block))]
    pk = peer_stubs.size // 2
    edge_u.append(peer_stubs[: 2 * pk : 2])
    edge_v.append(peer_stubs[1 : 2 * pk : 2])
    edge_kind.append(np.full(pk, int(EdgeKind.P2P), dtype=np.uint8))

    graph, _ = simplify_to_lcc(
        n,
        np.concatenate(edge_u),
        np.concatenate(edge_v),
        np.concatenate(edge_kind),
    )
    return graph
