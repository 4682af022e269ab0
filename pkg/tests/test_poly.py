from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adgraphs import field_of_order
from adgraphs.poly import (
    JPoly, MultiPoly, all_polys, is_pp_bruteforce, is_pp_hermite_dickson,
    leading_coefficient_identities, parse_poly, pow_reduced, reduce_mod_xq,
    value_set, wan_bound,
)
from adgraphs.rng import stream

XYZ = ["p1", "p2", "l1"]


def uni(text, q):
    return parse_poly(text, field_of_order(q), ["x"])


def test_eval_examples():
    F = field_of_order(7)
    assert parse_poly("p1*l1", F, ["p1", "l1"]).eval(3, 5) == 1
    g = parse_poly("p1*p2*l1*(p1+p2+p1*p2)", F, XYZ)
    assert g.eval(1, 2, 4) == 5


def test_parse_arithmetic_matches_operators():
    F = field_of_order(11)
    a = parse_poly("(p1 + 2*p2)^2 - l1", F, XYZ)
    p1, p2, l1 = (MultiPoly.variable(F, 3, i) for i in range(3))
    b = (p1 + MultiPoly.constant(F, 3, 2) * p2) * (p1 + MultiPoly.constant(F, 3, 2) * p2) - l1
    assert a == b


def test_parse_rejects_unknown_variable():
    with pytest.raises(ValueError):
        parse_poly("p1*zz", field_of_order(7), XYZ)


def test_exponent_reduction():
    assert reduce_mod_xq(uni("x^12", 7)) == uni("x^6", 7)
    assert reduce_mod_xq(uni("x^7", 7)) == uni("x", 7)
    assert reduce_mod_xq(uni("x^0", 7)) == uni("1", 7)


def test_value_sets_of_power_maps():
    assert value_set(uni("x^3", 7)).values == frozenset({0, 1, 6})
    assert value_set(uni("x^2", 7)).values == frozenset({0, 1, 2, 4})
    assert value_set(uni("x^5", 7)).is_pp


def test_wan_bound_values():
    assert wan_bound(3, 7) == 5
    assert wan_bound(3, 13) == 9
    assert wan_bound(2, 11) == 6


def test_reduced_power_matches_functional_power():
    F = field_of_order(9)
    f = uni("x^3 + 2*x + 1", 9)
    g = pow_reduced(f, 5)
    x = np.arange(9)
    assert np.array_equal(g.eval(x), F.pow(f.eval(x), 5))
    assert g.degree() < 9


@pytest.mark.parametrize("q", [3, 5])
def test_criterion_agrees_with_bruteforce_exhaustively(q):
    for f in all_polys(field_of_order(q), 3):
        if f.degree() >= 1:
            assert is_pp_hermite_dickson(f) == is_pp_bruteforce(f)


@pytest.mark.parametrize("q", [7, 9])
def test_criterion_agrees_on_monic_cubics(q):
    cases = list(all_polys(field_of_order(q), 3, monic_degree=3))
    assert len(cases) == q ** 3
    for f in cases:
        assert is_pp_hermite_dickson(f) == is_pp_bruteforce(f)


def test_j_poly_values_agree_with_expanded_form():
    F = field_of_order(19)
    rng = stream(1, "jpoly")
    for _ in range(20):
        j = JPoly.random(F, rng)
        full = j.to_poly(F).eval(np.arange(F.q))
        assert np.array_equal(j.values(F, exclude_zero_input=False), full)


@pytest.mark.parametrize("q", [17, 19, 23])
def test_leading_coefficients_of_small_powers(q):
    F = field_of_order(q)
    rng = stream(7, "identities", q)
    for _ in range(25):
        for got, want in leading_coefficient_identities(JPoly.random(F, rng), F).values():
            assert got == want


@given(st.sampled_from([5, 7, 11, 13]), st.lists(st.integers(0, 12), min_size=1, max_size=5))
def test_pp_tests_agree(q, coeffs):
    f = MultiPoly.univariate(field_of_order(q), [c % q for c in coeffs])
    if f.degree() >= 1:
        assert is_pp_hermite_dickson(f) == is_pp_bruteforce(f)


@given(st.sampled_from([5, 7, 11, 13]), st.lists(st.integers(0, 12), min_size=4, max_size=4))
def test_cubic_non_pp_within_bound(q, coeffs):
    coeffs[3] = coeffs[3] % (q - 1) + 1
    f = MultiPoly.univariate(field_of_order(q), [c % q for c in coeffs])
    rep = value_set(f)
    if not rep.is_pp:
        assert rep.size <= wan_bound(3, q)


@given(st.sampled_from([7, 9, 13]), st.integers(1, 200), st.integers(0, 8))
def test_reduction_preserves_the_function(q, k, c):
    F = field_of_order(q)
    f = MultiPoly.univariate(F, {k: 1, 1: c % q})
    x = np.arange(q)
    assert np.array_equal(reduce_mod_xq(f).eval(x), f.eval(x))
