"""Core types for relationship-annotated topologies.

An annotated graph is a simple undirected graph whose edges carry one of two
kinds: transit links, stored as ordered (customer, provider) pairs, and
peering links, stored as unordered pairs.  Each endpoint of an edge owns a
stub whose color reflects the node's role on that edge: the customer stub of
a transit link sits on the node that buys transit, the provider stub on the
node that sells it, and both stubs of a peering link are peer stubs.  A
node's degree vector counts its stubs by color, so a node with k customer
stubs has exactly k providers.

Nodes are dense integers 0..n-1.  External string labels, when present, are
kept alongside and survive re-densification.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class StubColor(IntEnum):
    CUSTOMER = 1
    PROVIDER = 2
    PEER = 3


class EdgeKind(IntEnum):
    C2P = 0
    P2P = 1


class GraphError(ValueError):
    """Malformed graph input or an operation on an unsuitable graph."""


class EmptyGraphError(GraphError):
    """Raised when cleaning removes every node."""


@dataclass(frozen=True)
class DegreeVector:
    """Per-color stub counts of one node."""

    customer_stubs: int
    provider_stubs: int
    peer_stubs: int

    @property
    def total(self) -> int:
        return self.customer_stubs + self.provider_stubs + self.peer_stubs

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.customer_stubs, self.provider_stubs, self.peer_stubs)


class AnnotatedGraph:
    """Simple undirected graph with transit/peering edge annotations.

    Transit edges are ordered customer -> provider; peering edges are
    unordered.  Construction validates simplicity (no self-loops, no second
    edge between the same node pair regardless of kind or orientation)
    unless ``validate=False``, which is reserved for callers that have
    already cleaned their edge set.
    """

    __slots__ = ("n", "edge_u", "edge_v", "edge_kind", "labels", "parent_ids",
                 "_adj_cache", "_degvec_cache")

    def __init__(self, n: int, edge_u, edge_v, edge_kind,
                 labels: list[str] | None = None, validate: bool = True):
        self.n = int(n)
        self.edge_u = np.ascontiguousarray(edge_u, dtype=np.int64)
        self.edge_v = np.ascontiguousarray(edge_v, dtype=np.int64)
        self.edge_kind = np.ascontiguousarray(edge_kind, dtype=np.uint8)
        self.labels = labels
        self.parent_ids: np.ndarray | None = None
        self._adj_cache = None
        self._degvec_cache = None
        if validate:
            self._check_simple()

    @classmethod
    def from_edges(cls, n: int,
                   edges: list[tuple[int, int, EdgeKind]],
                   labels: list[str] | None = None,
                   validate: bool = True) -> "AnnotatedGraph":
        if edges:
            u, v, k = (np.asarray(col) for col in zip(*edges))
        else:
            u = v = k = np.empty(0, dtype=np.int64)
        return cls(n, u, v, k, labels=labels, validate=validate)

    def _check_simple(self) -> None:
        if self.edge_u.shape != self.edge_v.shape or self.edge_u.shape != self.edge_kind.shape:
            raise GraphError("edge arrays must have equal length")
        if self.n_edges:
            if self.edge_u.min() < 0 or max(self.edge_u.max(), self.edge_v.max()) >= self.n:
                raise GraphError("edge endpoint out of range")
            if np.any(self.edge_u == self.edge_v):
                raise GraphError("self-loop in edge set")
            key = pair_key(self.edge_u, self.edge_v, self.n)
            if np.unique(key).size != key.size:
                raise GraphError("duplicate edge between a node pair")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label list length must equal node count")

    # -- basic counts ---------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return self.n

    @property
    def n_edges(self) -> int:
        return int(self.edge_u.size)

    @property
    def c2p_count(self) -> int:
        return int(np.count_nonzero(self.edge_kind == EdgeKind.C2P))

    @property
    def p2p_count(self) -> int:
        return int(np.count_nonzero(self.edge_kind == EdgeKind.P2P))

    # -- degrees ---------------------------------------------------------

    def degree_vectors(self) -> np.ndarray:
        """(n, 3) array of per-node (customer, provider, peer) stub counts."""
        if self._degvec_cache is None:
            out = np.zeros((self.n, 3), dtype=np.int64)
            c2p = self.edge_kind == np.uint8(EdgeKind.C2P)
            np.add.at(out[:, 0], self.edge_u[c2p], 1)
            np.add.at(out[:, 1], self.edge_v[c2p], 1)
            p2p = ~c2p
            np.add.at(out[:, 2], self.edge_u[p2p], 1)
            np.add.at(out[:, 2], self.edge_v[p2p], 1)
            self._degvec_cache = out
        return self._degvec_cache

    def degree_vector(self, node: int) -> DegreeVector:
        if not 0 <= node < self.n:
            raise GraphError(f"node {node} out of range")
        c, p, r = self.degree_vectors()[node]
        return DegreeVector(int(c), int(p), int(r))

    def total_degrees(self) -> np.ndarray:
        return self.degree_vectors().sum(axis=1)

    def max_degree(self) -> int:
        if self.n == 0:
            return 0
        return int(self.total_degrees().max())

    # -- adjacency -------------------------------------------------------

    def undirected_csr(self) -> csr_matrix:
        """Boolean adjacency of the undirected skeleton (both kinds)."""
        if self._adj_cache is None:
            m = self.n_edges
            rows = np.concatenate([self.edge_u, self.edge_v])
            cols = np.concatenate([self.edge_v, self.edge_u])
            data = np.ones(2 * m, dtype=np.int8)
            self._adj_cache = csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._adj_cache


def pair_key(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    """Orientation-free int64 key for a node pair."""
    lo = np.minimum(u, v).astype(np.int64)
    hi = np.maximum(u, v).astype(np.int64)
    return lo * np.int64(n) + hi


def stub_totals(graph: AnnotatedGraph) -> tuple[int, int, int]:
    """Total (customer, provider, peer) stub counts over the whole graph."""
    c, p, r = graph.degree_vectors().sum(axis=0)
    return int(c), int(p), int(r)


def is_connected(graph: AnnotatedGraph) -> bool:
    if graph.n == 0:
        return False
    if graph.n == 1:
        return True
    ncomp, _ = connected_components(graph.undirected_csr(), directed=False)
    return ncomp == 1


def largest_connected_component(graph: AnnotatedGraph) -> AnnotatedGraph:
    """Extract the largest component, re-densifying node ids.

    Ties between equal-size components go to the one containing the
    smallest original node id.  The returned graph carries the id mapping
    in ``parent_ids`` (new id -> original id) and remapped labels.
    """
    if graph.n == 0:
        empty = AnnotatedGraph(0, [], [], [],
                               labels=[] if graph.labels is not None else None,
                               validate=False)
        empty.parent_ids = np.empty(0, dtype=np.int64)
        return empty
    ncomp, comp = connected_components(graph.undirected_csr(), directed=False)
    sizes = np.bincount(comp, minlength=ncomp)
    best = sizes.max()
    # smallest original id among nodes of best-size components wins
    candidates = np.flatnonzero(sizes == best)
    if candidates.size == 1:
        keep_comp = candidates[0]
    else:
        in_candidate = np.isin(comp, candidates)
        keep_comp = comp[np.flatnonzero(in_candidate)[0]]
    keep = np.flatnonzero(comp == keep_comp)
    new_id = np.full(graph.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(keep.size)
    mask = new_id[graph.edge_u] >= 0
    sub = AnnotatedGraph(
        keep.size,
        new_id[graph.edge_u[mask]],
        new_id[graph.edge_v[mask]],
        graph.edge_kind[mask],
        labels=[graph.labels[i] for i in keep] if graph.labels is not None else None,
        validate=False,
    )
    sub.parent_ids = keep
    return sub


def simplify_to_lcc(n: int, edge_u: np.ndarray, edge_v: np.ndarray,
                    edge_kind: np.ndarray, labels: list[str] | None = None
                    ) -> tuple[AnnotatedGraph, dict[str, int]]:
    """Shared cleanup: drop self-loops, collapse duplicate pairs, take LCC.

    Duplicate collapse keeps the first-listed edge for each node pair, so
    its kind and orientation win.  Returns the cleaned graph and counters
    for each removal category.
    """
    edge_u = np.asarray(edge_u, dtype=np.int64)
    edge_v = np.asarray(edge_v, dtype=np.int64)
    edge_kind = np.asarray(edge_kind, dtype=np.uint8)

    loops = edge_u == edge_v
    dropped_self = int(np.count_nonzero(loops))
    if dropped_self:
        edge_u, edge_v, edge_kind = edge_u[~loops], edge_v[~loops], edge_kind[~loops]

    collapsed = 0
    if edge_u.size:
        key = pair_key(edge_u, edge_v, n)
        _, first = np.unique(key, return_index=True)
        collapsed = int(edge_u.size - first.size)
        if collapsed:
            first.sort()
            edge_u, edge_v, edge_kind = edge_u[first], edge_v[first], edge_kind[first]

    if edge_u.size == 0:
        raise EmptyGraphError("empty graph after cleaning")

    full = AnnotatedGraph(n, edge_u, edge_v, edge_kind, labels=labels, validate=False)
    lcc = largest_connected_component(full)
    stats = {
        "dropped_self_loop": dropped_self,
        "collapsed_duplicate": collapsed,
        "lcc_nodes": lcc.n_nodes,
        "lcc_edges": lcc.n_edges,
    }
    return lcc, stats
