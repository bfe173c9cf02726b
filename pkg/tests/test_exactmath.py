from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ramify.exactmath import (FiniteField, NotMonotone, PLFunction, ReducibleModulus, farey_grid,
                              find_factor, fmt_rat, parse_rat, polymod_p, rat)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(fractions)
def test_rational_string_roundtrip(x):
    assert parse_rat(fmt_rat(x)) == x
    assert rat(fmt_rat(x)) == x


def test_integers_print_with_denominator():
    assert fmt_rat(3) == "3/1"
    assert fmt_rat(Fraction(-6, 4)) == "-3/2"


def test_parse_rejects_zero_denominator():
    with pytest.raises(ValueError):
        parse_rat("1/0")


def test_farey_grid_contents():
    g = farey_grid(2, 0, 2)
    assert g == [Fraction(1, 2), 1, Fraction(3, 2), 2]
    assert farey_grid(3, 0, 1, include_lo=True)[0] == 0
    assert len(farey_grid(4, 0, 5)) >= 20


def test_polymod_and_factor():
    # x^2 + x + 1 is irreducible over F_2, x^2 + 1 = (x + 1)^2 is not
    assert find_factor([1, 1, 1], 2) is None
    assert find_factor([1, 0, 1], 2) == [1, 1]
    assert polymod_p([1, 0, 0, 1], [1, 1, 1], 2) == []  # x^3 + 1 = (x + 1)(x^2 + x + 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        FiniteField(2, 2, [1, 0, 1])


@pytest.mark.parametrize("p,f", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (7, 3)])
def test_finite_field_group_structure(p, f):
    F = FiniteField(p, f)
    elems = list(F.elements())
    assert len(elems) == p ** f
    units = [a for a in elems if not a.is_zero()]
    for a in units:
        assert (a * F.inv(a)) == F.one()
        assert a ** (F.q - 1) == F.one()
    # Frobenius is additive
    for a in elems[:10]:
        for b in elems[:10]:
            assert F.frobenius(a + b) == F.frobenius(a) + F.frobenius(b)


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_f16_distributive(a, b, c):
    F = FiniteField(2, 4)
    x, y, z = (F([(v >> i) & 1 for i in range(4)]) for v in (a, b, c))
    assert x * (y + z) == x * y + x * z


slopes = st.lists(st.tuples(st.fractions(min_value=Fraction(1, 8), max_value=3, max_denominator=8),
                            st.integers(1, 9)), min_size=0, max_size=4)


@given(slopes, st.fractions(min_value=0, max_value=20, max_denominator=12))
def test_pl_inverse_roundtrip(pieces, x):
    f = PLFunction.from_slopes(pieces, 1)
    g = f.invert()
    assert g(f(x)) == x
    assert f(g(x)) == x


def test_pl_rejects_nonincreasing():
    with pytest.raises(NotMonotone):
        PLFunction(((Fraction(1), Fraction(1)), (Fraction(1), Fraction(2))))
    with pytest.raises(NotMonotone):
        PLFunction(((Fraction(1), Fraction(2)), (Fraction(2), Fraction(1))))


def test_pl_slope_and_knots():
    f = PLFunction.from_slopes([(Fraction(3, 2), 2)], 1)
    assert f.knots == ((Fraction(3, 2), Fraction(3)),)
    assert f.slope_at(0) == 2 and f.slope_at(2) == 1
    assert f(4) == Fraction(11, 2)
