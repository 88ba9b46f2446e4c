import os

import pytest

from conftest import DATA, random_connected_graph
from physarum.errors import DisconnectedGraph, MetadataMismatch, NonPositiveWeight, ParseError
from physarum.graph import build_graph, gen_small_world
from physarum.io import emit_edge_list, parse_edge_list, parse_tntp, parse_tntp_links, read_graph

SIOUX_FALLS = os.path.join(DATA, "SiouxFalls_net.tntp")


def test_parse_triangle(triangle):
    assert parse_edge_list("p sp 3 3 1 2\n1 2 10\n1 3 3\n3 2 4") == triangle


def test_parse_with_comment():
    g = parse_edge_list("# comment\np sp 2 1 1 2\n1 2 5")
    assert g.edges == ((1, 2, 5.0),)


def test_parse_negative_weight():
    with pytest.raises(NonPositiveWeight):
        parse_edge_list("p sp 2 1 1 2\n1 2 -5")


@pytest.mark.parametrize(
    "text, line",
    [
        ("q sp 2 1 1 2\n1 2 5", 1),
        ("p sp 2 x 1 2\n1 2 5", 1),
        ("p sp 2 1 1 2\n1 2", 2),
        ("# c\np sp 2 1 1 2\n1 two 5", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text)
    assert info.value.line == line


def test_parse_edge_count_mismatch():
    with pytest.raises(ParseError):
        parse_edge_list("p sp 3 3 1 2\n1 2 10\n1 3 3")


def test_parse_disconnected():
    with pytest.raises(DisconnectedGraph):
        parse_edge_list("p sp 3 1 1 3\n1 2 1")


@pytest.mark.parametrize("seed", range(20))
def test_emit_parse_round_trip(seed):
    g = random_connected_graph(seed)
    text = emit_edge_list(g)
    again = parse_edge_list(text)
    assert again == g
    assert emit_edge_list(again) == text


def test_round_trip_normalizes_orientation_and_comments():
    text = "# hi\np sp 3 2 1 3\n2 1 4\n3 2 2.5\n"
    canon = emit_edge_list(parse_edge_list(text))
    assert canon == "p sp 3 2 1 3\n1 2 4\n2 3 2.5\n"
    assert parse_edge_list(canon) == parse_edge_list(text)


def test_round_trip_small_world():
    g = gen_small_world(30, 4, 0.2, seed=5)
    assert parse_edge_list(emit_edge_list(g)) == g


def test_sioux_falls_counts():
    with open(SIOUX_FALLS) as fh:
        text = fh.read()
    table = parse_tntp_links(text)
    assert table.node_count == 24
    assert len(table.links) == 76
    g = parse_tntp(text)
    assert g.node_count == 24
    assert g.edge_count == 38
    assert (g.source, g.sink) == (1, 24)
    assert g.edges[0] == (1, 2, 6.0)


def test_sioux_falls_other_column_and_terminals():
    g = read_graph(SIOUX_FALLS, "tntp", weight_column="capacity", source=3, sink=20)
    assert (g.source, g.sink) == (3, 20)
    assert g.edges[0][2] == pytest.approx(25900.20064)


TNTP_HEADER = """<NUMBER OF ZONES> 3
<NUMBER OF NODES> {nodes}
<FIRST THRU NODE> 1
<NUMBER OF LINKS> {links}
<END OF METADATA>


~\tInit node \tTerm node \tCapacity \tLength \tFree Flow Time \t;
"""


def tntp_text(rows, nodes, links):
    body = "".join(f"\t{u}\t{v}\t100\t{w}\t{w}\t;\n" for u, v, w in rows)
    return TNTP_HEADER.format(nodes=nodes, links=links) + body


def test_tntp_multiword_header_and_pair_collapse():
    rows = [(1, 2, 5), (2, 1, 3), (2, 3, 4), (3, 2, 4)]
    g = parse_tntp(tntp_text(rows, 3, 4))
    assert g == build_graph(3, [(1, 2, 3), (2, 3, 4)], 1, 3)
    g = parse_tntp(tntp_text(rows, 3, 4), weight_column="Free Flow Time")
    assert g.edges[0][2] == 3.0


def test_tntp_declared_nodes_disagree():
    rows = [(1, 2, 5), (2, 3, 4)]
    with pytest.raises(MetadataMismatch):
        parse_tntp(tntp_text(rows, 24, 2))


def test_tntp_declared_links_disagree():
    with pytest.raises(MetadataMismatch):
        parse_tntp(tntp_text([(1, 2, 5), (2, 3, 4)], 3, 5))


def test_tntp_missing_metadata():
    text = "<NUMBER OF NODES> 2\n<END OF METADATA>\n~ a b length ;\n1 2 3 ;\n"
    with pytest.raises(ParseError):
        parse_tntp(text)


def test_tntp_unknown_column():
    with pytest.raises(ParseError):
        parse_tntp(tntp_text([(1, 2, 5)], 2, 1), weight_column="toll")
