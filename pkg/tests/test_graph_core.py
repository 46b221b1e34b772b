import pytest

from errors import GraphParseError, GraphValidationError
from graph_core import (
    billiard_graph,
    complete_bipartite_graph,
    degree_stats,
    parse_edge_list,
    require_valid,
    serialize_edge_list,
    validate,
)


def test_parse_k4(k4):
    assert (k4.n, k4.m) == (4, 6)
    assert k4.vertices == ("1", "2", "3", "4")
    assert all(d == 3 for d in k4.degree.values())


def test_parse_billiard_vertex_order(billiard):
    assert (billiard.n, billiard.m) == (5, 8)
    assert billiard.vertices == ("1", "2", "4", "3", "5")
    assert billiard.edges[0] == ("1", "2")
    assert sorted(billiard.degree_list()) == [3, 3, 3, 3, 4]


def test_comments_and_blank_lines_are_skipped():
    g = parse_edge_list("# header\n\n1 2\n  # indented comment\n2 3\n3 1\n1 4\n4 2\n")
    assert g.m == 5


def test_self_loop_rejected():
    with pytest.raises(GraphParseError, match="self-loop"):
        parse_edge_list("a a")


def test_malformed_line_reports_line_number():
    with pytest.raises(GraphParseError) as info:
        parse_edge_list("1 2\n2 3 4\n")
    assert info.value.line_number == 2
    assert str(info.value).startswith("line 2:")


def test_empty_edge_set_rejected():
    with pytest.raises(GraphParseError, match="empty"):
        parse_edge_list("# nothing here\n")


def test_duplicate_edges_deduplicated_with_warning():
    g = parse_edge_list("1 2\n2 1\n2 3\n3 1\n1 4\n2 4\n3 4\n")
    assert g.m == 6
    report = validate(g)
    assert report.passed
    assert any("duplicate" in w for w in report.warnings)


def test_validate_k4_passes(k4):
    report = validate(k4)
    assert report.passed
    assert [c.hypothesis for c in report.checks] == ["simple", "connected", "min_degree_two", "not_cycle"]


def test_validate_triangle_is_cycle(triangle):
    report = validate(triangle)
    assert not report.passed
    assert "is a cycle graph" in report.failures()


def test_validate_path_has_degree_one(path):
    report = validate(path)
    assert not report.passed
    assert any("vertex of degree one" in detail for detail in report.failures())


def test_validate_disconnected():
    g = parse_edge_list("1 2\n2 3\n3 1\n1 4\n2 4\n3 4\n5 6\n6 7\n7 5\n5 8\n6 8\n7 8\n")
    report = validate(g)
    assert not report.passed
    assert "graph is disconnected" in report.failures()


def test_require_valid_raises(triangle):
    with pytest.raises(GraphValidationError, match="cycle graph"):
        require_valid(triangle)


@pytest.mark.parametrize("graph, expected", [
    ("k4", (6, 6)),
    ("billiard", (6, 7)),
    ("k23", (5, 5)),
])
def test_degree_stats(request, graph, expected):
    stats = degree_stats(request.getfixturevalue(graph))
    assert (stats.d, stats.D) == expected


def test_m_at_least_n_for_suite(suite_graphs):
    for name, g in suite_graphs:
        assert g.m > g.n, name


def test_serialize_parse_round_trip(suite_graphs):
    for name, g in suite_graphs:
        again = parse_edge_list(serialize_edge_list(g))
        assert set(again.vertices) == set(g.vertices), name
        assert {frozenset(e) for e in again.edges} == {frozenset(e) for e in g.edges}, name


def test_relabel_keeps_structure(k4):
    renamed = k4.relabel({"1": "a", "2": "b", "3": "c", "4": "d"})
    assert renamed.vertices == ("a", "b", "c", "d")
    assert renamed.degree_list() == k4.degree_list()


def test_builtin_constructors():
    assert complete_bipartite_graph(2, 3).m == 6
    assert validate(billiard_graph()).passed
