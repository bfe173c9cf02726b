"""Acceptance criteria 1-10; each test records one PASS/FAIL line (printed in the summary)."""
import functools
import json
import random
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

from ramify.catalog import BUILTINS
from ramify.cli import run
from ramify.exactmath import farey_grid
from ramify.localfield import TowerField
from ramify.ramification import aux_field, disc_cover, fontaine_identity_check, sampled_q
from ramify.report import body_of

from conftest import ALL, WILD, analysis, random_elem

RESULTS = {}
F = Fraction


def record(key, ok, detail, started, budget):
    took = time.perf_counter() - started
    ok = bool(ok) and took < budget
    RESULTS[key] = f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail} ({took:.1f}s, budget {budget}s)"
    return ok


@functools.lru_cache(maxsize=None)
def cli_doc(name, prec=None):
    args = ["report", name, "--json"]
    if prec:
        args += ["--precision", str(prec)]
    with tempfile.TemporaryDirectory() as d:
        out = Path(d) / "r.json"
        code = run(args + ["-o", str(out)])
        return code, json.loads(out.read_text())


# ---------------------------------------------------------------- 1


def test_c1_quadratic_wild():
    t = time.perf_counter()
    code, doc = cli_doc("sqrt2")
    got = (doc["ram_profile"], doc["i"], doc["u"], doc["c"], doc["herbrand"])
    want = (["3/2"], "3/2", "3/1", "3/1",
            {"knots": [["3/2", "3/1"]], "initial_slope": "2/1", "final_slope": "1/1"})
    assert record("1", code == 0 and got == want, f"x^2-2/Q2 profile/i/u/c/knots {got[:4]}", t, 5)


# ---------------------------------------------------------------- 2


def test_c2_zeta8():
    t = time.perf_counter()
    code, doc = cli_doc("zeta8")
    compat = {tuple(r["H"]): r for r in doc["filtration"]["quotient_compatibility"]}
    quads = [r for r in compat.values() if r["degree"] == 2]
    q2i = next(m for m in doc["lattice"] if m["minpoly"] == ["1", "0", "1"])
    q2i_row = compat[tuple(q2i["H"])]
    ok = (code == 0 and doc["ram_profile"] == ["1/2", "1/2", "1/1"] and doc["u"] == "3/1"
          and doc["c"] == "3/1" and doc["upper_breaks"] == ["2/1", "2/1", "3/1"]
          and len(quads) == 3 and all(r["match"] for r in quads)
          and q2i_row["direct"] == ["2/1"] == q2i_row["induced"])
    assert record("2", ok, f"zeta8 upper {doc['upper_breaks']}, Q2(i) direct {q2i_row['direct']}", t, 30)


# ---------------------------------------------------------------- 3


def test_c3_conductor_equals_u():
    t = time.perf_counter()
    rows = {n: (analysis(n).conductor, analysis(n).br.u_max) for n in ALL}
    grounds = {str(BUILTINS[n].spec.ground.label()) for n in ALL}
    ok = len(rows) >= 8 and all(c == u for c, u in rows.values()) and len(grounds) >= 3
    assert record("3", ok, f"c = u on {len(rows)} entries over {sorted(grounds)}", t, 120)


# ---------------------------------------------------------------- 4


def fontaine_samples(name, prec, n=200):
    """(lhs, rhs) pairs for n random beta in K and n near the roots in a ramified
    quadratic extension of L."""
    an = analysis(name, prec)
    L = an.ext.field
    K = TowerField(an.spec.ground, (), prec)
    P = [L.elem(L.lift_ground(c)) for c in an.ext.P]
    rng = random.Random(2024)
    base = []
    for _ in range(n):
        beta = L.coerce(random_elem(K, rng, 4, lowest=rng.randrange(0, 4)))
        base.append(fontaine_identity_check(P, beta, an.G.roots, an.br))
    T = aux_field(L, 2)
    PT = [T.coerce(c) for c in P]
    zs = [T.coerce(z) for z in an.G.roots]
    ext = []
    for _ in range(n):
        beta = rng.choice(zs) + random_elem(T, rng, 3, lowest=rng.randrange(0, 8), exact_val=True)
        ext.append(fontaine_identity_check(PT, beta, zs, an.br))
    return base, ext


def test_c4_fontaine_identity():
    t = time.perf_counter()
    bad, counts = [], {}
    for name in ALL:
        base, ext = fontaine_samples(name, 32)
        cb = [p for p in base if p[0] is not None]
        ce = [p for p in ext if p[0] is not None]
        counts[name] = (len(cb), len(ce))
        if len(cb) < 200 or len(ce) < 200 or any(a != b for a, b in cb + ce):
            bad.append(name)
    assert record("4", not bad, f"200+200 certified beta per entry, failures {bad}", t, 120)


# ---------------------------------------------------------------- 5


def q_grid(u):
    top = u + 2
    g = farey_grid(4, 0, top)
    while len(g) < 20:
        top += 1
        g = farey_grid(4, 0, top)
    return g


def test_c5_disc_cover_vs_sampled():
    t = time.perf_counter()
    bad = []
    sizes = []
    for name in ALL:
        an = analysis(name)
        grid = q_grid(an.br.u_max)
        sizes.append(len(grid))
        cache, verdicts = {}, []
        for m in grid:
            q, _ = sampled_q(an.ext.P, an.ext.field, an.G.roots, an.br, m, cache)
            dc = disc_cover(an.G.order, an.pairs, an.br, m)
            verdicts.append(dc.qpp_holds)
            if q != dc.qpp_holds:
                bad.append((name, str(m)))
        if verdicts != sorted(verdicts):
            bad.append((name, "not monotone"))
    assert record("5", not bad and min(sizes) >= 20,
                  f"grids of {min(sizes)}..{max(sizes)} points, disagreements {bad}", t, 60)


# ---------------------------------------------------------------- 6


def test_c6_oracle_window():
    t = time.perf_counter()
    lines, ok = [], True
    for name in WILD:
        code, doc = cli_doc(name)
        pm = doc["pm_scan"]
        u = F(pm["u"])
        lb = pm["m_lower_bound"]
        above = [r for r in pm["table"] if F(r["m"]) > u and r["verdict"] != "true"]
        good = (code == 0 and pm["soundness"]["passes"] and not above
                and lb is not None and F(lb) >= u - F(1, 4))
        if name == "sqrt2":
            good &= lb == "11/4"
        ok &= good
        lines.append(f"{name}:{lb}")
    assert record("6", ok, "sound, lower bounds " + " ".join(lines), t, 300)


# ---------------------------------------------------------------- 7


def test_c7_tame_and_unramified():
    t = time.perf_counter()
    code, doc = cli_doc("unram2")
    pm = doc["pm_scan"]
    ok = (code == 0 and doc["u"] == "0/1" and pm["m_lower_bound"] is None
          and all(r["verdict"] == "true" for r in pm["table"]))
    detail = [f"unram2 u={doc['u']}"]
    for name in ("tamesq", "tame7"):
        code, doc = cli_doc(name)
        row = next(r for r in doc["pm_scan"]["table"] if r["m"] == "1/1")
        an = analysis(name)
        L = an.ext.field
        zero = L.zero()
        v0 = fontaine_identity_check([L.elem(L.lift_ground(c)) for c in an.ext.P], zero,
                                     an.G.roots, an.br)[0]
        ok &= (code == 0 and doc["u"] == "1/1" and row["verdict"] == "counterexample"
               and row["field"] == "K" and doc["pm_scan"]["m_lower_bound"] == "1/1" and v0 == 1)
        detail.append(f"{name} u={doc['u']} at m=1 field {row.get('field')} v(P(0))={v0}")
    assert record("7", ok, ", ".join(detail), t, 30)


# ---------------------------------------------------------------- 8

TABLE_GRID = ["1/2", "3/2", "5/2", "7/2"]


def zeta8_table():
    code, doc = cli_doc("zeta8")
    rows = {r["m"]: r for r in doc["filtration"]["fixed_field_table"]}
    names = {tuple(m["H"]): m for m in doc["lattice"]}
    return doc, [rows[str(F(m))] for m in TABLE_GRID], names


def test_c8a_fixed_field_table_identity():
    t = time.perf_counter()
    _, rows, names = zeta8_table()
    ok = all(r["holds"] and r["below_m"] == r["fixed_G_m"] for r in rows)
    fields = [names[tuple(r["fixed_G_m"])]["minpoly"] or "K" for r in rows]
    assert record("8a", ok, f"L^G(m) = K_<m cap L on {TABLE_GRID}; fixed fields {fields}", t, 30)


def test_c8b_regression_row_is_Q2_sqrt2():
    # literal expectation for m = 5/2: fixed field of G^(5/2) is Q2(sqrt 2)
    t = time.perf_counter()
    _, rows, names = zeta8_table()
    row = rows[TABLE_GRID.index("5/2")]
    got = names[tuple(row["fixed_G_m"])]["minpoly"]
    assert record("8b", got == ["-2", "0", "1"],
                  f"m=5/2 fixed field minpoly {got} (u={names[tuple(row['fixed_G_m'])]['u']}); "
                  "literal expectation x^2-2", t, 30)


# ---------------------------------------------------------------- 9


def test_c9_equal_characteristic():
    t = time.perf_counter()
    code, doc = cli_doc("as2")
    pm = doc["pm_scan"]
    ok = (code == 0 and doc["ram_profile"] == ["1/1"] and doc["u"] == "2/1" == doc["c"]
          and pm["soundness"]["passes"])
    assert record("9", ok, f"x^2+tx+t profile {doc['ram_profile']} u={doc['u']} c={doc['c']}", t, 30)


# ---------------------------------------------------------------- 10


@pytest.mark.slow
def test_c10_precision_robustness():
    t = time.perf_counter()
    differ = []
    for name in ALL:
        a, b = cli_doc(name), cli_doc(name, 64)
        if a[0] != b[0] or body_of(a[1]) != body_of(b[1]):
            differ.append(name)
        if fontaine_samples(name, 32, 60) != fontaine_samples(name, 64, 60):
            differ.append(name + ":fontaine")
    assert record("10", not differ, f"report bodies and identity samples at 64 vs 32, differing {differ}",
                  t, 600)
