import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ramify.localfield import (AtLeast, Exact, GroundField, InsufficientPrecision, NotEisenstein,
                               TowerField, Unramified, eisenstein, escalate, newton_polygon)
from ramify.exactmath import ReducibleModulus

from conftest import random_elem

Q2, Q3 = GroundField("padic", 2), GroundField("padic", 3)
F2T = GroundField("laurent", 2)


def fields():
    return [
        TowerField(Q2, (), 24),
        TowerField(Q2, (eisenstein([-2, 0, 1]),), 24),
        TowerField(Q2, (Unramified(2), eisenstein([2, 2, 1])), 24),
        TowerField(Q3, (eisenstein([3, 3, 1]), eisenstein([[0, -1], 3, 3, 1])), 16),
        TowerField(F2T, (eisenstein(["t", "t", 1]),), 24),
    ]


@pytest.mark.parametrize("F", fields(), ids=lambda F: F.label())
def test_ring_axioms_on_random_elements(F):
    rng = random.Random(7)
    for _ in range(25):
        a, b, c = (random_elem(F, rng, 5) for _ in range(3))
        assert ((a + b) * c - (a * c + b * c)).is_zero()
        assert ((a * b) - (b * a)).is_zero()
        assert (a - a).is_zero()


@pytest.mark.parametrize("F", fields(), ids=lambda F: F.label())
def test_valuation_is_additive(F):
    rng = random.Random(11)
    for _ in range(25):
        a = random_elem(F, rng, 4, lowest=rng.randrange(3))
        b = random_elem(F, rng, 4, lowest=rng.randrange(3))
        va, vb = a.valuation(), b.valuation()
        if va.is_exact and vb.is_exact:
            assert (a * b).val() == va.v + vb.v


@pytest.mark.parametrize("F", fields(), ids=lambda F: F.label())
def test_uniformizer_and_inverse(F):
    pi = F.uniformizer()
    assert pi.val() == Fraction(1, F.e)
    rng = random.Random(3)
    for _ in range(10):
        u = random_elem(F, rng, 4)
        if u.valuation().bound == 0:
            assert (u * u.inverse() - F.one()).is_zero()


def test_precision_tracking_of_products():
    F = TowerField(Q2, (), 20)
    x = F(6, prec=10)  # known mod 2^10
    y = x * F(4)
    assert y.prec == 12
    z = x * x
    assert z.prec == 11  # v(x) + prec(x)


def test_uncertified_valuation_is_lower_bound():
    F = TowerField(Q2, (), 8)
    v = F(256).valuation()
    assert isinstance(v, AtLeast) and v.bound == 8
    with pytest.raises(InsufficientPrecision):
        F(0).val()


def test_eisenstein_validation():
    with pytest.raises(NotEisenstein):
        TowerField(Q2, (eisenstein([4, 0, 1]),))
    with pytest.raises(NotEisenstein):
        TowerField(Q2, (eisenstein([2, 1, 1]),))
    with pytest.raises(ReducibleModulus):
        TowerField(Q2, (Unramified(2, (1, 0, 1)),))


def test_laurent_literals():
    F = TowerField(F2T, (), 12)
    a = F("1+t+t^3")
    assert a.val() == 0
    assert (F("t") * F("t") - F("t^2")).is_zero()
    assert (a + a).is_zero()  # characteristic 2


def test_residue_field_sizes():
    F = TowerField(Q2, (Unramified(2), eisenstein([2, 2, 1])), 8)
    assert (F.e, F.f, F.degree, F.q) == (2, 2, 4, 4)
    assert len(F.residue_reps()) == 4


def test_newton_polygon_slopes():
    # x^2 - 2 over Q_2: both roots have valuation 1/2
    np_ = newton_polygon([Exact(Fraction(1)), AtLeast(Fraction(30)), Exact(Fraction(0))])
    assert np_.root_valuations() == [Fraction(1, 2)] * 2
    # (x - 2)(x - 1): valuations 0 and 1
    np_ = newton_polygon([Exact(Fraction(1)), Exact(Fraction(0)), Exact(Fraction(0))])
    assert np_.root_valuations() == [0, 1]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=6))
def test_newton_polygon_multiplicities_sum_to_degree(vs):
    vals = [Exact(Fraction(v)) for v in vs[:-1]] + [Exact(Fraction(0))]
    np_ = newton_polygon(vals)
    assert np_.total == len(vs) - 1
    rv = np_.root_valuations()
    assert sum(rv) == Fraction(vs[0])  # product of roots


def test_escalate_doubles_until_enough():
    seen = []

    def job(prec):
        seen.append(prec)
        if prec < 100:
            raise InsufficientPrecision(prec * 2)
        return prec

    assert escalate(job, 32) == 128
    assert seen == [32, 64, 128]
