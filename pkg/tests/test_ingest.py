import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from annograph import (AnnotatedGraph, EdgeKind, EmptyGraphError, ParseError,
                       clean_and_build, format_edge_list, load_graph,
                       parse_edge_list, write_edge_list)

from _oracles import random_annotated_graph

C2P = int(EdgeKind.C2P)
P2P = int(EdgeKind.P2P)


def test_parse_skips_comments_and_blanks():
    text = "# header\n\n1|2|-1\n  # indented comment\n2|3|0\n"
    records = parse_edge_list(text)
    assert [(r.a, r.b, r.rel) for r in records] == [("1", "2", -1), ("2", "3", 0)]


def test_parse_strips_whitespace():
    (rec,) = parse_edge_list("  7 | 9 | 1 \n")
    assert (rec.a, rec.b, rec.rel) == ("7", "9", 1)


def test_parse_accepts_iterables():
    records = parse_edge_list(iter(["1|2|-1"]))
    assert len(records) == 1


@pytest.mark.parametrize("line,fragment", [
    ("1|2", "expected 'a|b|rel'"),
    ("1|2|3|4", "expected 'a|b|rel'"),
    ("|2|-1", "empty node label"),
    ("1||0", "empty node label"),
    ("1|2|x", "is not an integer"),
    ("1|2|5", "must be -1, 0, or 1"),
])
def test_parse_rejects_malformed_lines(line, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_edge_list(line)


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError, match="line 3:") as exc:
        parse_edge_list("# c\n1|2|-1\nbroken\n")
    assert exc.value.line_no == 3


def test_transit_orientation_puts_customer_stub_on_b():
    # a|b|-1 means a provides transit to b
    graph, _ = clean_and_build(parse_edge_list("1|2|-1"))
    cust = graph.edge_u[0]
    prov = graph.edge_v[0]
    assert graph.labels[cust] == "2"
    assert graph.labels[prov] == "1"
    assert graph.edge_kind[0] == C2P


def test_sibling_and_self_loop_records_dropped():
    graph, report = clean_and_build(parse_edge_list("1|2|1\n3|3|0\n1|2|-1"))
    assert report.dropped_sibling == 1
    assert report.dropped_self_loop == 1
    assert graph.n_edges == 1


def test_exact_duplicate_collapses_silently():
    graph, report = clean_and_build(parse_edge_list("1|2|-1\n1|2|-1"))
    assert graph.n_edges == 1
    assert report.collapsed_duplicate == 1
    assert report.conflicting_duplicate == 0


def test_conflicting_duplicate_first_record_wins():
    graph, report = clean_and_build(parse_edge_list("1|2|-1\n2|1|-1\n1|2|0"))
    assert report.collapsed_duplicate == 2
    assert report.conflicting_duplicate == 2
    assert graph.n_edges == 1
    assert graph.edge_kind[0] == C2P
    assert graph.labels[graph.edge_u[0]] == "2"  # customer from the first record


def test_all_records_dropped_is_an_error():
    with pytest.raises(EmptyGraphError, match="empty graph after cleaning"):
        clean_and_build(parse_edge_list("1|2|1\n3|3|-1"))


def test_cleaning_keeps_largest_component_only():
    text = "1|2|-1\n2|3|0\n8|9|-1"
    graph, report = clean_and_build(parse_edge_list(text))
    assert graph.n == 3
    assert report.lcc_nodes == 3 and report.lcc_edges == 2
    assert report.to_dict()["lcc_nodes"] == 3


def test_format_canonical_ordering():
    g = AnnotatedGraph.from_edges(
        3, [(1, 0, C2P), (1, 2, P2P)], labels=["10", "2", "x"])
    # transit printed provider|customer|-1; peering lesser label first,
    # numeric labels ordered numerically before text ones
    assert format_edge_list(g) == "2|x|0\n10|2|-1\n"


def test_write_edge_list_returns_byte_count(tmp_path):
    g = AnnotatedGraph.from_edges(2, [(0, 1, C2P)], labels=["1", "2"])
    buf = io.StringIO()
    n = write_edge_list(g, buf)
    assert n == len(buf.getvalue().encode("utf-8"))
    path = tmp_path / "g.txt"
    n2 = write_edge_list(g, str(path))
    assert n2 == len(path.read_bytes())


def test_write_edge_list_rejects_bad_sink():
    g = AnnotatedGraph.from_edges(2, [(0, 1, C2P)])
    with pytest.raises(TypeError):
        write_edge_list(g, 42)


def test_load_graph_round_trip(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("1|2|-1\n2|3|0\n")
    graph, report = load_graph(path)
    assert graph.n == 3 and graph.n_edges == 2
    assert report.lcc_nodes == 3


def test_ingest_round_trip_is_idempotent_on_random_graphs():
    # write -> read -> write must reproduce the exact byte stream
    for seed in range(100):
        g = random_annotated_graph(np.random.default_rng(seed))
        text = format_edge_list(g)
        reread, _ = clean_and_build(parse_edge_list(text))
        assert format_edge_list(reread) == text
        assert reread.n == g.n and reread.n_edges == g.n_edges


@given(st.integers(0, 10_000))
def test_round_trip_preserves_annotation_counts(seed):
    g = random_annotated_graph(np.random.default_rng(seed))
    reread, report = clean_and_build(parse_edge_list(format_edge_list(g)))
    assert reread.c2p_count == g.c2p_count
    assert reread.p2p_count == g.p2p_count
    assert report.collapsed_duplicate == 0
    assert report.dropped_self_loop == 0
