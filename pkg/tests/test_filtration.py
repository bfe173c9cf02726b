from fractions import Fraction

import pytest

from ramify import filtration as fl
from ramify.ramification import NEG_INF

from conftest import ALL, analysis


def member(an, minpoly):
    return next(sf for sf in an.lattice if sf.minpoly is not None and list(sf.minpoly) == minpoly)


def test_zeta8_induced_chain_on_Q2i():
    an = analysis("zeta8")
    Mi = member(an, [1, 0, 1])
    qc = fl.induced_quotient_filtration(an.G, an.br, Mi.H)
    assert qc.u == 2 and qc.chain() == [(2, 2)]


def test_trivial_and_full_quotients():
    an = analysis("zeta8")
    whole = frozenset(range(an.G.order))
    assert fl.induced_quotient_filtration(an.G, an.br, whole).u == NEG_INF
    ident = frozenset([an.G.identity])
    qc = fl.induced_quotient_filtration(an.G, an.br, ident)
    assert qc.nontrivial() == sorted(an.br.upper_breaks)


def test_quotient_needs_normal_subgroup():
    an = analysis("tamecube")
    H = next(sf.H for sf in an.lattice if not sf.normal)
    with pytest.raises(ValueError):
        fl.induced_quotient_filtration(an.G, an.br, H)


@pytest.mark.parametrize("name", ALL)
def test_quotient_compatibility(name):
    an = analysis(name)
    rows = fl.quotient_compatibility_check(an.G, an.br, an.lattice)
    assert rows and all(r.match for r in rows), [(sorted(r.H), r.induced, r.direct, r.note) for r in rows]


def test_zeta8_direct_quadratics():
    an = analysis("zeta8")
    direct = {tuple(member(an, mp).minpoly): r.direct
              for mp in ([1, 0, 1], [-2, 0, 1], [2, 0, 1])
              for r in fl.quotient_compatibility_check(an.G, an.br, an.lattice)
              if r.H == member(an, mp).H}
    assert direct == {(1, 0, 1): [2], (-2, 0, 1): [3], (2, 0, 1): [3]}


@pytest.mark.parametrize("name", ALL)
def test_fixed_field_identity_rows(name):
    an = analysis(name)
    grid = [Fraction(k, 4) for k in range(1, 17)]
    assert all(r.holds for r in fl.fixed_field_table(an.G, an.br, an.lattice, grid))


@pytest.mark.parametrize("name", ALL)
def test_finite_level_checks(name):
    an = analysis(name)
    rep = fl.finite_level_checks(an.G, an.br, an.lattice, [Fraction(k, 4) for k in range(1, 17)])
    assert rep.passes


def test_inertia_of_mixed_example():
    an = analysis("zeta12")
    inert = fl.residue_inertia(an.G)
    assert len(inert) == 2
    K0 = next(sf for sf in an.lattice if sf.degree == 2 and sf.e == 1)
    assert inert == K0.H


def test_unramified_inertia_trivial():
    an = analysis("unram2")
    assert fl.residue_inertia(an.G) == frozenset([an.G.identity])
    assert fl.upper_group(an.uidx, Fraction(1, 2)) == frozenset([an.G.identity])


@pytest.mark.parametrize("name", ALL)
def test_left_continuity_and_separation(name):
    an = analysis(name)
    assert fl.left_continuity(an.uidx)
    assert all(fl.separation(an.uidx, an.br.u_max).values())
    assert all(c["ok"] for c in fl.composite_check(an.G, an.br, an.lattice))
