from fractions import Fraction

import pytest

from ramify.catalog import BUILTINS
from ramify.galois import (ExtensionSpec, NotGalois, build_extension, conjugate_profile,
                           different_valuation, galois_group, profile_from_roots)
from ramify.localfield import GroundField, eisenstein

from conftest import ALL, analysis


def test_sqrt2_minimal_polynomial():
    ext = build_extension(BUILTINS["sqrt2"].spec)
    assert ext.P_signed() == [-2, 0, 1]


def test_zeta8_minimal_polynomial_is_cyclotomic():
    ext = build_extension(BUILTINS["zeta8"].spec)
    assert ext.P_signed() == [1, 0, 0, 0, 1]


def test_zeta9_tower_gives_phi9():
    ext = build_extension(BUILTINS["zeta9"].spec)
    assert ext.P_signed() == [1, 0, 0, 1, 0, 0, 1]


@pytest.mark.parametrize("name", ALL)
def test_group_order_and_profile(name):
    an = analysis(name)
    b = BUILTINS[name]
    assert an.G.order == an.ext.degree
    assert an.profile.diffs == b.profile
    # the Newton-polygon profile and the root-subtraction profile agree
    assert conjugate_profile(an.ext).diffs == profile_from_roots(an.G).diffs


@pytest.mark.parametrize("name", ALL)
def test_group_table_is_a_group(name):
    G = analysis(name).G
    n = G.order
    e = G.identity
    for a in range(n):
        assert G.compose(a, e) == a == G.compose(e, a)
        assert G.compose(a, G.inverse(a)) == e
        for b in range(n):
            for c in range(n):
                assert G.compose(G.compose(a, b), c) == G.compose(a, G.compose(b, c))


@pytest.mark.parametrize("name", ALL)
def test_different_matches_profile(name):
    an = analysis(name)
    # v_K of the different of alpha is the sum of v(alpha - z) over the other roots
    assert different_valuation(an.ext) == sum(an.profile.diffs)


def test_not_galois_detected():
    spec = ExtensionSpec(GroundField("padic", 2), (eisenstein([2, 0, 0, 1]),), "cube root of 2")
    with pytest.raises(NotGalois):
        galois_group(build_extension(spec))


def test_zeta8_lattice():
    lat = analysis("zeta8").lattice
    quads = sorted(tuple(sf.minpoly) for sf in lat if sf.degree == 2)
    assert quads == [(-2, 0, 1), (1, 0, 1), (2, 0, 1)]
    assert all(sf.normal and sf.certified for sf in lat)


def test_tamecube_lattice_has_non_normal_cubics():
    lat = analysis("tamecube").lattice
    cubic = [sf for sf in lat if sf.degree == 3]
    assert len(cubic) == 3 and not any(sf.normal for sf in cubic)
    unram = [sf for sf in lat if sf.degree == 2]
    assert len(unram) == 1 and unram[0].e == 1


def test_as2_group():
    an = analysis("as2")
    assert an.G.order == 2
    assert an.ext.field.ring.kind == "laurent"
