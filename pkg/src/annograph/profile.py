"""Correlation profile of an annotated topology.

The profile keeps three views of a graph's degree correlations:

* ``add``: one row per node with its (customer, provider, peer) stub counts,
  the joint annotated degree distribution;
* ``jdd_c2p``: one row per transit edge with the endpoint total degrees,
  ordered (customer side, provider side);
* ``jdd_p2p``: one row per peering edge with the endpoint total degrees as
  an unordered pair, stored (low, high).

Together these are the inputs the rescaling and construction stages consume.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph_core import AnnotatedGraph, EdgeKind, StubColor


@dataclass
class SummaryProfile:
    n: int
    m: int
    add: np.ndarray       # (n, 3) int
    jdd_c2p: np.ndarray   # (c2p_count, 2) int, (customer degree, provider degree)
    jdd_p2p: np.ndarray   # (p2p_count, 2) int, sorted low-high

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "add": self.add.tolist(),
            "jdd_c2p": self.jdd_c2p.tolist(),
            "jdd_p2p": self.jdd_p2p.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SummaryProfile":
        return cls(
            n=int(data["n"]),
            m=int(data["m"]),
            add=np.asarray(data["add"], dtype=np.int64).reshape(-1, 3),
            jdd_c2p=np.asarray(data["jdd_c2p"], dtype=np.int64).reshape(-1, 2),
            jdd_p2p=np.asarray(data["jdd_p2p"], dtype=np.int64).reshape(-1, 2),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True))

    @classmethod
    def load(cls, path: str | Path) -> "SummaryProfile":
        return cls.from_dict(json.loads(Path(path).read_text()))


def extract_profile(graph: AnnotatedGraph) -> SummaryProfile:
    """Measure the correlation profile of a cleaned graph."""
    add = graph.degree_vectors().copy()
    total = add.sum(axis=1)
    c2p = graph.edge_kind == np.uint8(EdgeKind.C2P)
    cu, cv = graph.edge_u[c2p], graph.edge_v[c2p]
    jdd_c2p = np.column_stack([total[cu], total[cv]]) if cu.size else np.empty((0, 2), np.int64)
    pu, pv = graph.edge_u[~c2p], graph.edge_v[~c2p]
    if pu.size:
        du, dv = total[pu], total[pv]
        jdd_p2p = np.column_stack([np.minimum(du, dv), np.maximum(du, dv)])
    else:
        jdd_p2p = np.empty((0, 2), np.int64)
    return SummaryProfile(n=graph.n_nodes, m=graph.n_edges,
                          add=add, jdd_c2p=jdd_c2p, jdd_p2p=jdd_p2p)


def marginal_ad(profile: SummaryProfile, color: StubColor) -> np.ndarray:
    """Per-node samples of one stub color's degree (the annotated marginal)."""
    return profile.add[:, int(color) - 1]


@dataclass
class ConsistencyResult:
    ok: bool
    violations: list[tuple[tuple[int, int, int], int, int]] = field(default_factory=list)
    # each violation: (degree vector, stub count via edges, stub count via nodes)


def check_2k_to_1k_consistency(graph: AnnotatedGraph) -> ConsistencyResult:
    """Verify that edge-level joint counts reduce to the node-level ADD.

    For each degree vector d, the number of edges incident on class-d nodes,
    counted with multiplicity 2 when both endpoints fall in the class, must
    equal |d| times the number of class-d nodes.  The reduction is computed
    from the color-annotated edge counts so a disagreement in either stage
    is caught.  Exact integer arithmetic throughout.
    """
    vecs = graph.degree_vectors()
    keys = [tuple(int(x) for x in row) for row in vecs]

    node_count: dict[tuple[int, int, int], int] = {}
    for k in keys:
        node_count[k] = node_count.get(k, 0) + 1

    # color-annotated edge classes, each edge counted once
    annotated: dict[tuple, int] = {}
    c2p_kind = np.uint8(EdgeKind.C2P)
    for u, v, kind in zip(graph.edge_u, graph.edge_v, graph.edge_kind):
        if kind == c2p_kind:
            ends = ((int(StubColor.CUSTOMER), keys[u]), (int(StubColor.PROVIDER), keys[v]))
        else:
            ends = ((int(StubColor.PEER), keys[u]), (int(StubColor.PEER), keys[v]))
        cls = tuple(sorted(ends))
        annotated[cls] = annotated.get(cls, 0) + 1

    # reduce over colors: edges between degree-vector classes, counted once
    pair_count: dict[tuple, int] = {}
    for ((_, ka), (_, kb)), cnt in annotated.items():
        cls = tuple(sorted((ka, kb)))
        pair_count[cls] = pair_count.get(cls, 0) + cnt

    # stubs landing in each degree-vector class, from the edge side
    stub_from_edges: dict[tuple[int, int, int], int] = {}
    for (ka, kb), cnt in pair_count.items():
        mu = 2 if ka == kb else 1
        if mu == 2:
            stub_from_edges[ka] = stub_from_edges.get(ka, 0) + 2 * cnt
        else:
            stub_from_edges[ka] = stub_from_edges.get(ka, 0) + cnt
            stub_from_edges[kb] = stub_from_edges.get(kb, 0) + cnt

    violations = []
    for k, cnt in sorted(node_count.items()):
        degree = sum(k)
        if degree == 0:
            continue
        via_edges = stub_from_edges.get(k, 0)
        via_nodes = degree * cnt
        if via_edges != via_nodes:
            violations.append((k, via_edges, via_nodes))
    for k in sorted(stub_from_edges):
        if k not in node_count:
            violations.append((k, stub_from_edges[k], 0))
    return ConsistencyResult(ok=not violations, violations=violations)
