from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adgraphs import field_of_order
from adgraphs.adgraph import Side, gq_graph, line, plane_graph, point, rigid_graph
from adgraphs.metrics import (
    bfs_profile, census_from_csv, diameter, distance, girth, has_4cycle,
    level_set, p_ab_eval, r3_all, r3_census, r3_param_set, special_set,
    special_set_closed_form, three_path_endpoint,
)

LINE = int(Side.LINE)


@pytest.fixture(scope="module")
def r7():
    return rigid_graph(field_of_order(7))


@pytest.fixture(scope="module")
def census7(r7):
    return r3_census(r7)


def test_census_headline_values(census7):
    q = 7
    assert census7.values[(LINE, 0, 1)] == q**3 - 4 * q**2 + 9 * q - 8 == 202
    assert census7.values[(LINE, 0, 0)] == q**3 - 4 * q**2 + 8 * q - 6 == 197
    assert census7.argmax == ((LINE, 0, 1), 202)
    assert census7.max_is_unique()
    assert census7.second == ((LINE, 0, 0), 197)


def test_census_csv_round_trip(census7):
    text = census7.to_csv()
    assert text.count("\n") == 2 * 49 + 1
    assert census_from_csv(text) == census7.values


def test_r3_constant_on_translation_classes(r7):
    table = r7.table
    from adgraphs.metrics import r3_of
    vals = r3_all(r7)
    for rep in r7.representatives[::9]:
        assert {r3_of(table, int(rep) + s) for s in range(7)} == {int(vals[rep])}


def test_neighbourhood_counts(r7):
    prof = bfs_profile(r7, point(0, 0, 0), 3)
    # no 4-cycles: the first two spheres are as large as possible
    assert prof.level_sizes[:2] == [7, 42]
    assert prof.level_sizes[2] == r3_all(r7)[0]


def test_distance_examples(r7):
    assert distance(r7, line(3, 4, 1), line(3, 4, 5)) == 6
    assert distance(r7, point(1, 2, 3), line(4, 2, 2)) == 1
    assert distance(r7, point(1, 2, 3), point(1, 2, 3)) == 0


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_no_four_cycles(q):
    assert not has_4cycle(rigid_graph(field_of_order(q)))


def test_plane_graph_girth():
    g = plane_graph(field_of_order(5))
    assert girth(g) == 6


@pytest.mark.parametrize("q,expected", [(3, 7), (5, 6), (7, 6)])
def test_diameter(q, expected):
    assert diameter(rigid_graph(field_of_order(q))) == expected


@pytest.mark.parametrize("q", [5, 7])
def test_gq_girth(q):
    assert girth(gq_graph(field_of_order(q))) == 8


@pytest.mark.parametrize("variant,start", [("zero_zero", line(0, 0, 0)), ("zero_one", line(0, 1, 0))])
def test_param_sets_equal_three_spheres(r7, variant, start):
    assert r3_param_set(r7, variant) == level_set(r7, start, 3)


def test_general_param_set(r7):
    for A, B in [(2, 3), (5, 0), (1, 6)]:
        assert r3_param_set(r7, "general", A, B) == level_set(r7, line(A, B, 0), 3)


def test_lowercase_reading_of_linear_coefficient(r7):
    # the alternative reading disagrees with actual paths somewhere
    assert r3_param_set(r7, "general", 2, 3, c_symbol="zero") != level_set(r7, line(2, 3, 0), 3)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_three_path_endpoint_formula(A, B, a, b, c):
    F = field_of_order(7)
    g = rigid_graph(F)
    if a == b or c == F.sub(F.mul(A, b), B):
        return
    end = three_path_endpoint(g, A, B, a, b, c)
    assert end.coords[:2] == (b, c)
    assert end.coords[2] == F.div(p_ab_eval(F, A, B, b, c, a), F.sub(b, a))
    assert distance(g, line(A, B, 0), end) == 3


@pytest.mark.parametrize("kind", ["N", "I"])
def test_named_sets_match_closed_forms(r7, kind):
    F = r7.field
    for param in range(7):
        assert special_set(r7, kind, param) == special_set_closed_form(F, kind, param)


def test_named_set_sizes(r7):
    assert len(special_set(r7, "F", 3)) == 6
    assert special_set(r7, "L", 2) == frozenset(line(0, 2, r) for r in range(7))
    with pytest.raises(ValueError):
        special_set(r7, "Z", 0)
