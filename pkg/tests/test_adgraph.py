from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adgraphs import field_of_order
from adgraphs.adgraph import (
    Side, covering_map, covering_report, gq_graph, graph_from_strings, line,
    parse_graph_spec, plane_graph, point, rigid_graph,
)


@pytest.fixture(scope="module")
def r7():
    return rigid_graph(field_of_order(7))


def test_sizes(r7):
    assert r7.vertex_count == 686
    assert r7.table.shape == (686, 7)
    assert plane_graph(field_of_order(5)).vertex_count == 50


def test_neighbor_formula(r7):
    # p2 + l2 = p1 l1 and p3 + l3 = p1 p2 l1 (p1 + p2 + p1 p2)
    assert r7.neighbor(point(1, 2, 3), 4) == line(4, 2, 2)
    u = r7.neighbor(line(4, 2, 2), 1)
    assert u == point(1, 2, 3)
    assert r7.is_edge(point(1, 2, 3), line(4, 2, 2))
    assert not r7.is_edge(point(1, 2, 3), line(4, 2, 3))


def test_id_layout(r7):
    assert r7.vertex_id(point(0, 0, 0)) == 0
    assert r7.vertex_id(line(0, 0, 0)) == 343
    assert r7.vertex_id(point(0, 0, 5)) == 5
    assert r7.vertex_ref(343 + 7 * 2 + 1) == line(0, 2, 1)
    with pytest.raises(ValueError):
        r7.vertex_id(point(0, 0, 7))
    with pytest.raises(ValueError):
        r7.vertex_ref(686)


def test_id_round_trip(r7):
    for vid in range(0, r7.vertex_count, 11):
        assert r7.vertex_id(r7.vertex_ref(vid)) == vid


def test_class_representatives(r7):
    vid = r7.vertex_id(line(3, 4, 6))
    assert r7.class_representative(vid) == r7.vertex_id(line(3, 4, 0))
    assert len(r7.representatives) == 2 * 49


@pytest.mark.parametrize("build", [rigid_graph, gq_graph, plane_graph])
@pytest.mark.parametrize("q", [3, 5, 9])
def test_table_is_regular_simple_and_symmetric(build, q):
    g = build(field_of_order(q))
    t = g.table
    n = g.vertex_count
    sides = g.sides
    assert t.shape == (n, q)
    # column t is the neighbour with first coordinate t, on the other side
    assert np.all(sides[t] != sides[:, None])
    assert np.all(np.sort(t, axis=1)[:, 1:] != np.sort(t, axis=1)[:, :-1])
    rows = np.repeat(np.arange(n), q)
    back = t[t.ravel()]
    assert np.all((back == rows[:, None]).any(axis=1))


def test_table_matches_neighbor_formula():
    g = gq_graph(field_of_order(9))
    for vid in range(0, g.vertex_count, 97):
        v = g.vertex_ref(vid)
        got = [g.vertex_ref(int(u)) for u in g.table[vid]]
        assert got == [g.neighbor(v, t) for t in range(9)]


def test_spec_parsing():
    g = parse_graph_spec("q=7;f=p1*l1;g=p1*l1^2")
    assert g.dim == 3 and g.q == 7
    assert np.array_equal(g.table, gq_graph(field_of_order(7)).table)
    assert parse_graph_spec("q=5;f=p1*l1").dim == 2
    assert parse_graph_spec("R", q=5).name == "R"
    assert parse_graph_spec("q=3,e=2;f=p1*l1").q == 9
    for bad in ["q=7;f=p1*l1;g=x", "q=7;g=p1", "f=p1*l1", "q=7;f=p1*l1;zz=1", "R"]:
        with pytest.raises(ValueError):
            parse_graph_spec(bad)


def test_third_polynomial_kind_is_inferred():
    F = field_of_order(5)
    assert type(graph_from_strings(F, "p1*l1", "p2*l1").g_kind).__name__ == "ThreeVar"
    assert type(graph_from_strings(F, "p1*l1", "p1*l1^2").g_kind).__name__ == "TwoVar"


def test_covering_map_drops_last_coordinate():
    assert covering_map(line(1, 2, 3)) == line(1, 2)
    with pytest.raises(ValueError):
        covering_map(point(1, 2))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_covering_property(q):
    F = field_of_order(q)
    assert covering_report(rigid_graph(F), plane_graph(F)).ok
    assert covering_report(gq_graph(F), plane_graph(F)).ok


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_edges_are_mutual(a, b, c, t):
    g = rigid_graph(field_of_order(7))
    u = g.neighbor(point(a, b, c), t)
    assert u.side == Side.LINE and u.coords[0] == t
    assert g.neighbor(u, a) == point(a, b, c)
