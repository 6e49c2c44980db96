"""Reading, cleaning, and writing relationship edge lists.

The interchange format is one edge per line, pipe-delimited::

    a|b|-1     a is a provider of b (transit link)
    a|b|0      a and b peer
    a|b|1      a and b are siblings

Lines whose first non-blank character is ``#`` are comments.  Sibling links
are outside the model and are dropped at ingest, as are self-loops and any
repeat of an already-seen node pair (first occurrence wins, regardless of
kind or orientation).  Cleaning finishes by extracting the largest connected
component.
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .graph_core import AnnotatedGraph, EdgeKind, EmptyGraphError, simplify_to_lcc

REL_TRANSIT = -1
REL_PEER = 0
REL_SIBLING = 1


class EdgeRecord(NamedTuple):
    a: str
    b: str
    rel: int


class ParseError(ValueError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class CleaningReport:
    dropped_sibling: int = 0
    dropped_self_loop: int = 0
    collapsed_duplicate: int = 0
    conflicting_duplicate: int = 0
    lcc_nodes: int = 0
    lcc_edges: int = 0

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


def parse_edge_list(source: str | Iterable[str]) -> list[EdgeRecord]:
    """Parse edge-list text into records, validating every line."""
    lines = source.splitlines() if isinstance(source, str) else source
    records: list[EdgeRecord] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("|")
        if len(parts) != 3:
            raise ParseError(f"expected 'a|b|rel', got {line!r}", line_no)
        a, b, rel_text = (p.strip() for p in parts)
        if not a or not b:
            raise ParseError("empty node label", line_no)
        try:
            rel = int(rel_text)
        except ValueError:
            raise ParseError(f"relationship {rel_text!r} is not an integer", line_no) from None
        if rel not in (REL_TRANSIT, REL_PEER, REL_SIBLING):
            raise ParseError(f"relationship must be -1, 0, or 1, got {rel}", line_no)
        records.append(EdgeRecord(a, b, rel))
    return records


def clean_and_build(records: Iterable[EdgeRecord]) -> tuple[AnnotatedGraph, CleaningReport]:
    """Apply the cleaning policy and build the largest-component graph.

    Raises EmptyGraphError when nothing survives cleaning.
    """
    report = CleaningReport()
    ids: dict[str, int] = {}
    labels: list[str] = []

    def node_id(label: str) -> int:
        found = ids.get(label)
        if found is None:
            found = len(labels)
            ids[label] = found
            labels.append(label)
        return found

    edge_u: list[int] = []
    edge_v: list[int] = []
    edge_kind: list[int] = []
    seen: dict[tuple[int, int], tuple[int, int, int]] = {}

    for rec in records:
        if rec.rel == REL_SIBLING:
            report.dropped_sibling += 1
            continue
        if rec.a == rec.b:
            report.dropped_self_loop += 1
            continue
        u = node_id(rec.a)
        v = node_id(rec.b)
        pair = (u, v) if u < v else (v, u)
        if rec.rel == REL_TRANSIT:
            # a provides transit to b, so the customer stub sits on b
            stored = (v, u, int(EdgeKind.C2P))
        else:
            # peering is symmetric; canonical orientation avoids phantom conflicts
            stored = (pair[0], pair[1], int(EdgeKind.P2P))
        prior = seen.get(pair)
        if prior is not None:
            report.collapsed_duplicate += 1
            if prior != stored:
                report.conflicting_duplicate += 1
            continue
        seen[pair] = stored
        edge_u.append(stored[0])
        edge_v.append(stored[1])
        edge_kind.append(stored[2])

    if not edge_u:
        raise EmptyGraphError("empty graph after cleaning")

    graph, stats = simplify_to_lcc(
        len(labels),
        np.asarray(edge_u, dtype=np.int64),
        np.asarray(edge_v, dtype=np.int64),
        np.asarray(edge_kind, dtype=np.uint8),
        labels=labels,
    )
    report.lcc_nodes = stats["lcc_nodes"]
    report.lcc_edges = stats["lcc_edges"]
    return graph, report


def _field_key(label: str) -> tuple[int, int, str]:
    """Sort key treating purely numeric labels as numbers, others as text."""
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


def format_edge_list(graph: AnnotatedGraph) -> str:
    """Canonical text form: transit as provider|customer|-1, peering with
    the lesser label first, lines sorted field-wise."""
    labels = graph.labels if graph.labels is not None else [str(i) for i in range(graph.n)]
    entries = []
    c2p = graph.edge_kind == np.uint8(EdgeKind.C2P)
    for u, v, is_c2p in zip(graph.edge_u, graph.edge_v, c2p):
        la, lb = labels[u], labels[v]
        if is_c2p:
            first, second, rel = lb, la, REL_TRANSIT
        else:
            if _field_key(la) <= _field_key(lb):
                first, second = la, lb
            else:
                first, second = lb, la
            rel = REL_PEER
        entries.append((_field_key(first), _field_key(second), rel, f"{first}|{second}|{rel}"))
    entries.sort()
    return "".join(line + "\n" for *_, line in entries)


def write_edge_list(graph: AnnotatedGraph, sink) -> int:
    """Write the canonical edge list to a path or text file, returning the
    number of bytes written."""
    text = format_edge_list(graph)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text)
    elif isinstance(sink, io.TextIOBase) or hasattr(sink, "write"):
        sink.write(text)
    else:
        raise TypeError("sink must be a path or a writable text stream")
    return len(text.encode("utf-8"))


def load_graph(path: str | Path) -> tuple[AnnotatedGraph, CleaningReport]:
    """Parse and clean an edge-list file."""
    with open(path, "r", encoding="utf-8") as fh:
        records = parse_edge_list(fh)
    return clean_and_build(records)
