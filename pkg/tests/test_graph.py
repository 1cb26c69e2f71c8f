import json

import pytest
from hypothesis import given, settings, strategies as st

from artifact.graph import (Graph, GraphError, automorphisms, euler_ok, faces, graph_from_json, graph_to_json, named,
                            on_face_in_order, parse_graph, planarity_check, serialize_graph, to_dot)


def test_line_format_roundtrip():
    g = named("K4plus")
    assert parse_graph(serialize_graph(g)) == g
    assert parse_graph(serialize_graph(g)).labels == g.labels


def test_compact_and_json_forms():
    g = parse_graph("0-1,1-2,2-0")
    assert g == named("C3")
    assert graph_from_json(json.loads(json.dumps(graph_to_json(g)))) == g
    assert parse_graph(json.dumps(graph_to_json(g))) == g


@pytest.mark.parametrize("text, line", [
    ("n 3\ne 0 0\n", 2),
    ("n 3\ne 0 1\ne 1 0\n", 3),
    ("n 2\ne 0 5\n", 2),
    ("e 0 1\n", 1),
    ("n 3\nn 3\n", 2),
    ("n x\n", 1),
])
def test_parse_errors_carry_position(text, line):
    with pytest.raises(GraphError) as exc:
        parse_graph(text)
    assert exc.value.line == line


def test_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 1), (1, 0)])


def test_named_families():
    assert named("C6").m == 6
    assert named("K3,3").m == 9
    assert named("Q3").m == 12 and all(named("Q3").degree(v) == 3 for v in range(8))
    assert named("prism").n == 6
    assert named("icosahedron").m == 30
    with pytest.raises(GraphError):
        named("nonsense")


def test_planarity_witnesses():
    for name in ("K5", "K3,3", "petersen"):
        r = planarity_check(named(name))
        assert not r.planar
        assert not planarity_check(r.witness).planar
        assert set(r.witness.edges) <= set(named(name).edges)


def test_planar_rotation_gives_valid_faces():
    for name in ("K4", "Q3", "icosahedron", "W5", "prism4"):
        g = named(name)
        r = planarity_check(g)
        assert r.planar
        assert euler_ok(g, r.rotation)
        assert len(faces(g, r.rotation)) == 2 - g.n + g.m


def test_on_face_in_order():
    c = named("C6")
    assert on_face_in_order(c, [0, 1, 2, 3])
    assert on_face_in_order(named("W5"), [0, 1, 2])
    assert not on_face_in_order(named("K4"), [0, 1, 2, 3])


def test_automorphism_counts():
    assert len(automorphisms(named("K4"))) == 24
    assert len(automorphisms(named("C6"))) == 12
    assert len(automorphisms(named("Q3"))) == 48
    assert len(automorphisms(named("K4plus"))) == 6
    assert len(automorphisms(named("petersen"))) == 120


def test_dot_export_mentions_every_edge():
    g = named("K4")
    dot = to_dot(g, {0: "red"})
    assert dot.startswith("graph")
    assert dot.count("--") == g.m


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    es = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return Graph.from_edges(n, sorted(es))


@given(graphs())
@settings(max_examples=80, deadline=None)
def test_serialization_roundtrip_property(g):
    assert parse_graph(serialize_graph(g)) == g
    assert graph_from_json(graph_to_json(g)) == g


@given(graphs())
@settings(max_examples=80, deadline=None)
def test_planarity_agrees_with_euler_bound(g):
    r = planarity_check(g)
    if r.planar:
        assert g.n < 3 or g.m <= 3 * g.n - 6
        assert euler_ok(g, r.rotation)
    else:
        assert not planarity_check(r.witness).planar
