from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adgraphs import FieldError, field_of_order, make_field
from adgraphs.ff import prime_power

ORDERS = [3, 5, 7, 9, 11, 13, 25, 27]


def test_prime_field_products():
    F = field_of_order(7)
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    assert F.sub(2, 5) == 4
    assert F.div(1, 3) == 5


def test_extension_encoding():
    F = field_of_order(9)
    assert F.modulus == (1, 0, 1)
    # 3 encodes X and X^2 = -1
    assert F.mul(3, 3) == 2
    assert F.frobenius(3) == 6
    assert F.frobenius(F.frobenius(3)) == 3


@pytest.mark.parametrize("q", ORDERS)
def test_every_element_is_a_root_of_xq_minus_x(q):
    F = field_of_order(q)
    x = np.arange(q)
    assert np.array_equal(F.pow(x, q), x)


@pytest.mark.parametrize("q", ORDERS)
def test_generator_has_full_order(q):
    F = field_of_order(q)
    assert F.element_order(F.generator) == q - 1
    assert sorted(F.exp_table.tolist()) == list(range(1, q))


@pytest.mark.parametrize("q", ORDERS)
def test_inverse_table(q):
    F = field_of_order(q)
    nz = F.nonzero
    assert np.all(F.mul(nz, F.inv(nz)) == 1)


@pytest.mark.parametrize("q", [9, 25, 27])
def test_frobenius_is_a_field_automorphism(q):
    F = field_of_order(q)
    a = np.arange(q)[:, None]
    b = np.arange(q)[None, :]
    fr = F.frobenius
    assert np.array_equal(fr(F.add(a, b)), F.add(fr(a), fr(b)))
    assert np.array_equal(fr(F.mul(a, b)), F.mul(fr(a), fr(b)))
    img = F.frobenius(np.arange(q))
    for _ in range(F.e - 1):
        img = F.frobenius(img)
    assert np.array_equal(img, np.arange(q))


@pytest.mark.parametrize("bad", [4, 8, 2, 1, 6, 12])
def test_rejects_unsupported_orders(bad):
    with pytest.raises(FieldError):
        field_of_order(bad)


def test_constructor_requires_prime():
    with pytest.raises(FieldError):
        make_field(4)


def test_prime_power_split():
    assert prime_power(125) == (5, 3)
    assert prime_power(13) == (13, 1)


@st.composite
def _triples(draw):
    q = draw(st.sampled_from(ORDERS))
    F = field_of_order(q)
    a, b, c = (draw(st.integers(0, q - 1)) for _ in range(3))
    return F, a, b, c


@given(_triples())
def test_field_axioms(t):
    F, a, b, c = t
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(a, 1) == a and F.add(a, 0) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
