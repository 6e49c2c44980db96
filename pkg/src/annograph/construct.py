"""Random annotated graphs from a (rescaled) correlation profile.

Both constructors hand every node one stub per unit of its annotated
degrees and match stubs into edges, transit first, then peering.  The plain
constructor matches uniformly at random within each color.  The
correlation-preserving constructor drives the matching with the profile's
edge-level joint distributions: each future edge draws an endpoint-degree
pair from the source JDD's empirical copula and picks the stub at that
quantile of the remaining stubs, ordered by host total degree, so the
realized endpoint correlations track the source.

Matching leaves a multigraph: self-loops and repeated pairs are moved by
rewiring (transit edges keep their orientation and the customer side stays
on a node of the same total degree), anything unplaceable is dropped, and
the largest connected component is extracted.
"""

from __future__ import annotations

import numpy as np

from .copula import rank_transform, resample_rows
from .graph_core import AnnotatedGraph, EdgeKind, GraphError, simplify_to_lcc
from .profile import SummaryProfile


class QuantilePool:
    """Multiset of stubs ordered by host total degree.

    Supports taking the stub at a quantile of the remaining pool: quantile
    u maps to the ceil(u * remaining)-th smallest remaining stub, so any
    u in (0, 1] is valid while stubs remain.  Stubs of equal-degree hosts
    are pre-shuffled once, which makes the within-tie order unbiased.
    """

    def __init__(self, hosts: np.ndarray, host_degree: np.ndarray,
                 rng: np.random.Generator):
        hosts = np.asarray(hosts, dtype=np.int64)
        order = np.lexsort((rng.random(hosts.size), host_degree[hosts]))
        self._host = [int(h) for h in hosts[order]]
        self._size = len(self._host)
        self.remaining = self._size
        # Fenwick tree over alive flags; full tree has tree[i] = lowbit(i)
        self._tree = [0] + [i & -i for i in range(1, self._size + 1)]

    def take_at_quantile(self, u: float) -> int:
        """Remove and return the host of the quantile-u remaining stub."""
        if self.remaining <= 0:
            raise GraphError("stub pool exhausted")
        k = int(np.ceil(u * self.remaining - 1e-12))
        k = min(max(k, 1), self.remaining)
        tree = self._tree
        size = self._size
        pos = 0
        step = 1 << (size.bit_length() - 1)
        while step:
            nxt = pos + step
            if nxt <= size and tree[nxt] < k:
                pos = nxt
                k -= tree[nxt]
            step >>= 1
        idx = pos + 1
        i = idx
        while i <= size:
            tree[i] -= 1
            i += i & -i
        self.remaining -= 1
        return self._host[idx - 1]


def target_edge_counts(add: np.ndarray) -> tuple[int, int]:
    """Edge counts realizable from an annotated degree matrix: transit
    edges bounded by the scarcer transit side, peering edges by pairing."""
    add = np.asarray(add)
    n_c2p = int(min(add[:, 0].sum(), add[:, 1].sum()))
    n_p2p = int(add[:, 2].sum() // 2)
    return n_c2p, n_p2p


def construct_1k(add: np.ndarray, rng: np.random.Generator) -> AnnotatedGraph:
    """Uniform random stub matching honoring only the annotated degrees."""
    add = np.asarray(add, dtype=np.int64)
    n = add.shape[0]
    ids = np.arange(n)
    cust = np.repeat(ids, add[:, 0])
    prov = np.repeat(ids, add[:, 1])
    peer = np.repeat(ids, add[:, 2])
    rng.shuffle(cust)
    rng.shuffle(prov)
    rng.shuffle(peer)
    k = min(cust.size, prov.size)
    pk = peer.size // 2
    edge_u = np.concatenate([cust[:k], peer[: 2 * pk : 2]])
    edge_v = np.concatenate([prov[:k], peer[1 : 2 * pk : 2]])
    edge_kind = np.concatenate([
        np.full(k, int(EdgeKind.C2P), dtype=np.uint8),
        np.full(pk, int(EdgeKind.P2P), dtype=np.uint8),
    ])
    graph, _ = simplify_to_lcc(n, edge_u, edge_v, edge_kind)
    return graph


def construct_2k(add: np.ndarray, profile: SummaryProfile,
                 rng: np.random.Generator) -> tuple[AnnotatedGraph, dict]:
    """Correlation-preserving construction; returns the graph and a report
    on rewiring, drops, and cleanup."""
    add = np.asarray(add, dtype=np.int64)
    n = add.shape[0]
    q = add.sum(axis=1)
    n_c2p, n_p2p = target_edge_counts(add)
    if n_c2p > 0 and profile.jdd_c2p.shape[0] == 0:
        raise GraphError("stub counts demand transit edges but the profile has none")
    if n_p2p > 0 and profile.jdd_p2p.shape[0] == 0:
        raise GraphError("stub counts demand peering edges but the profile has none")

    g_pool, g_rows_c2p, g_ranks_c2p, g_orient, g_rows_p2p, g_ranks_p2p, g_rewire = rng.spawn(7)

    ids = np.arange(n)
    cust_pool = QuantilePool(np.repeat(ids, add[:, 0]), q, g_pool)
    prov_pool = QuantilePool(np.repeat(ids, add[:, 1]), q, g_pool)
    peer_pool = QuantilePool(np.repeat(ids, add[:, 2]), q, g_pool)

    m = n_c2p + n_p2p
    edge_u = np.empty(m, dtype=np.int64)
    edge_v = np.empty(m, dtype=np.int64)
    edge_kind = np.concatenate([
        np.full(n_c2p, int(EdgeKind.C2P), dtype=np.uint8),
        np.full(n_p2p, int(EdgeKind.P2P), dtype=np.uint8),
    ])

    if n_c2p:
        rows = resample_rows(profile.jdd_c2p, n_c2p, g_rows_c2p)
        u = rank_transform(rows, g_ranks_c2p)
        for i in range(n_c2p):
            edge_u[i] = cust_pool.take_at_quantile(u[i, 0])
            edge_v[i] = prov_pool.take_at_quantile(u[i, 1])

    if n_p2p:
        rows = resample_rows(profile.jdd_p2p, n_p2p, g_rows_p2p)
        swap = g_orient.random(n_p2p) < 0.5
        rows[swap] = rows[swap][:, ::-1]
        u = rank_transform(rows, g_ranks_p2p)
        for i in range(n_p2p):
            edge_u[n_c2p + i] = peer_pool.take_at_quantile(u[i, 0])
            edge_v[n_c2p + i] = peer_pool.take_at_quantile(u[i, 1])

    edge_u, edge_v, edge_kind, rewire_report = rewire_loops(
        n, edge_u, edge_v, edge_kind, q, g_rewire)

    graph, clean_stats = simplify_to_lcc(n, edge_u, edge_v, edge_kind)
    report = {
        "target_c2p": n_c2p,
        "target_p2p": n_p2p,
        "unmatched_customer": int(add[:, 0].sum()) - n_c2p,
        "unmatched_provider": int(add[:, 1].sum()) - n_c2p,
        "unmatched_peer": int(add[:, 2].sum()) - 2 * n_p2p,
        **rewire_report,
        **clean_stats,
    }
    return graph, report


def rewire_loops(n: int, edge_u, edge_v, edge_kind,
                 total_degrees: np.ndarray, rng: np.random.Generator,
                 max_attempts: int = 100
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray, dict]:
    """Move self-loops and repeated pairs to fresh node pairs.

    Each offending edge tries up to ``max_attempts`` replacement pairs of
    nodes whose nominal total degrees equal the offending endpoints', not
    identical, not already adjacent.  Kind and orientation are preserved
    (the customer side stays on the customer-degree node).  Edges that
    cannot be placed are dropped.  The nominal endpoint-degree pair of
    every surviving edge is unchanged, so the edge-level joint degree
    statistics survive rewiring exactly.
    """
    u = [int(x) for x in edge_u]
    v = [int(x) for x in edge_v]
    deg = np.asarray(total_degrees, dtype=np.int64)
    m = len(u)

    seen: set[tuple[int, int]] = set()
    offending: list[int] = []
    self_loops = 0
    duplicates = 0
    for i in range(m):
        a, b = u[i], v[i]
        if a == b:
            offending.append(i)
            self_loops += 1
            continue
        pr = (a, b) if a < b else (b, a)
        if pr in seen:
            offending.append(i)
            duplicates += 1
        else:
            seen.add(pr)

    buckets: dict[int, np.ndarray] = {}
    if offending:
        order = np.argsort(deg, kind="stable")
        splits = np.flatnonzero(np.diff(deg[order])) + 1
        for chunk in np.split(order, splits):
            buckets[int(deg[chunk[0]])] = chunk

    drop = np.zeros(m, dtype=bool)
    rewired = 0
    dropped = 0
    for i in offending:
        qa = int(deg[u[i]])
        qb = int(deg[v[i]])
        bucket_a = buckets[qa]
        bucket_b = buckets[qb]
        placed = False
        for _ in range(max_attempts):
            c = int(bucket_a[rng.integers(bucket_a.size)])
            d = int(bucket_b[rng.integers(bucket_b.size)])
            if c == d:
                continue
            pr = (c, d) if c < d else (d, c)
            if pr in seen:
                continue
            seen.add(pr)
            u[i], v[i] = c, d
            rewired += 1
            placed = True
            break
        if not placed:
            drop[i] = True
            dropped += 1

    keep = ~drop
    report = {
        "self_loops": self_loops,
        "duplicate_pairs": duplicates,
        "rewired": rewired,
        "dropped_in_rewiring": dropped,
    }
    return (np.asarray(u, dtype=np.int64)[keep],
            np.asarray(v, dtype=np.int64)[keep],
            np.asarray(edge_kind, dtype=np.uint8)[keep],
            report)
