from fractions import Fraction

import pytest

from ramify import pmoracle as pm
from ramify.catalog import BUILTINS
from ramify.exactmath import farey_grid
from ramify.galois import find_roots
from ramify.localfield import TowerField

from conftest import analysis

SMALL = ["sqrt2", "zeta4", "tamesq", "as2", "unram2", "tame7"]


def small_catalog(name):
    an = analysis(name)
    cat, _ = pm.build_catalog(an.ext, an.br.u_max, an.lattice, pm.CatalogConfig(e_max=2))
    return an, [t for t in cat if t.kind in ("base", "twist")]


@pytest.mark.parametrize("name", SMALL)
def test_smart_equals_brute(name):
    an, cat = small_catalog(name)
    grid = farey_grid(4, 0, max(an.br.u_max, 0) + 1)
    compared = 0
    for t in cat:
        fs = pm.scan_field(an.ext, t)
        for m in grid:
            target = pm.QuotientTarget(fs.E, m)
            if target.size > 10 ** 4:
                continue
            smart = pm.verdict_from_scan(fs, m)
            brute = pm.pm_verdict(an.ext, t, m, mode="brute", cap=10 ** 4)
            assert smart.holds == brute.holds, (t.name, m)
            compared += 1
    assert compared >= 10


@pytest.mark.parametrize("name", ["sqrt2", "zeta4", "tamesq"])
def test_capped_max_matches_brute(name):
    an, cat = small_catalog(name)
    for t in cat:
        fs = pm.scan_field(an.ext, t)
        if fs.embeds:
            continue
        for digits in range(1, 8):
            if fs.E.q ** digits > 10 ** 4:
                break
            ceiling = Fraction(digits, fs.E.e)
            assert pm.brute_capped_max(an.ext, fs.E, digits) == min(fs.search.max_val, ceiling)


def test_quotient_target_cut_rounds_up():
    E = TowerField(BUILTINS["sqrt2"].spec.ground, BUILTINS["sqrt2"].spec.steps, 16)
    assert pm.QuotientTarget(E, Fraction(3, 4)).cut == 2
    assert pm.QuotientTarget(E, Fraction(1)).cut == 2
    assert pm.QuotientTarget(E, Fraction(1)).size == 4


def test_enumeration_cap():
    an = analysis("sqrt2")
    E = TowerField(an.spec.ground, (), 16)
    with pytest.raises(pm.EnumerationTooLarge):
        pm.hom_witnesses(an.ext, pm.QuotientTarget(E, 40), cap=1000)


def test_hom_witnesses_count_for_tame_square():
    # x^2 - 3 over Q_3 with E = Q_3: classes beta mod 3 with v(beta^2 - 3) >= 1 are beta = 0
    an = analysis("tamesq")
    E = TowerField(an.spec.ground, (), 16)
    wit = pm.hom_witnesses(an.ext, pm.QuotientTarget(E, 1))
    assert len(wit) == 1 and wit[0].is_zero()
    assert pm.hom_witnesses(an.ext, pm.QuotientTarget(E, Fraction(5, 4))) == []


def test_bound_shortcut_only_above_u():
    an = analysis("sqrt2")
    K = pm.TestField("K", an.spec.ground, (), "base")
    assert isinstance(pm.pm_verdict(an.ext, K, Fraction(13, 4), an.br.u_max), pm.TrueByBound)
    v = pm.pm_verdict(an.ext, K, 1, an.br.u_max)
    assert isinstance(v, pm.Counterexample) and v.v_P == 1


def test_embedding_detected():
    an = analysis("sqrt2")
    v = pm.pm_verdict(an.ext, pm.TestField("L", an.spec.ground, an.spec.steps, "sub"), 2)
    assert isinstance(v, pm.TrueByExhaustion) and v.embedding


def test_root_field_steps_produce_a_root():
    an = analysis("sqrt2")
    K = TowerField(an.spec.ground, (), 32)
    # x^2 + 2x + 6: Eisenstein already
    Q = [K.top.from_int(c) for c in (6, 2, 1)]
    steps = pm.root_field_steps(K, Q)
    E = TowerField(an.spec.ground, steps, 32)
    assert E.degree == 2
    assert find_roots([E.lift_ground(c) for c in Q], E)


def test_twist_step_shapes():
    an = analysis("as2")
    K = TowerField(an.spec.ground, (), 16)
    st = pm.twist_step(K, 2, "1")
    # p | e' in characteristic 2: separable form x^2 + t x + t
    assert st.coeffs[1] != 0
    st3 = pm.twist_step(K, 3, "1")
    assert st3.coeffs[1:3] == (0, 0)


def test_catalog_is_deterministic_and_bounded():
    an = analysis("zeta4")
    a, _ = pm.build_catalog(an.ext, an.br.u_max, an.lattice)
    b, _ = pm.build_catalog(an.ext, an.br.u_max, an.lattice)
    assert [t.steps for t in a] == [t.steps for t in b]
    assert len(a) <= 64
    c, skipped = pm.build_catalog(an.ext, an.br.u_max, an.lattice, pm.CatalogConfig(limit=5))
    assert len(c) == 5 and any(s["reason"] == "catalog limit" for s in skipped)


def test_twist_fields_have_expected_index():
    an = analysis("sqrt2")
    cat, _ = pm.build_catalog(an.ext, an.br.u_max, an.lattice)
    for t in cat:
        if t.kind == "twist":
            assert t.field(16).e == t.twist_index


def test_base_change_transport_to_K0():
    an = analysis("zeta12")
    cat, _ = pm.build_catalog(an.ext, an.br.u_max, an.lattice)
    K0_H = next(sf.H for sf in an.lattice if sf.degree == 2 and sf.e == 1)
    best = None
    for t in cat:
        if t.kind != "perturb":
            continue
        fs = pm.scan_field(an.ext, t)
        if not fs.embeds and (best is None or fs.search.max_val > best.search.max_val):
            best = fs
    m = best.search.max_val
    res = pm.transport_witness(an.G, K0_H, best, m)
    assert res["holds"] and res["v_factor"] == m
