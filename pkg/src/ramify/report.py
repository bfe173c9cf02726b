"""Pipeline driver and JSON assembly: build -> breaks -> conductor -> oracle -> filtration."""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import filtration as fl
from . import pmoracle as pm
from .config import RunConfig
from .exactmath import fmt_rat
from .galois import (Extension, ExtensionSpec, GaloisGroup, RamProfile, Subfield, build_extension,
                     galois_group, profile_from_roots, subextension_lattice)
from .ramification import (NEG_INF, Breaks, breaks, conductor, disc_cover, pairwise_valuations,
                           serre_convention)
from .specfile import spec_json

REPORT_SCHEMA = "ramify-report/1"


def jrat(x):
    """Rationals as "num/den"; the infinities as "inf" / "-inf"."""
    if x is None:
        return None
    if x == float("inf"):
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return fmt_rat(x)


def jlit(x):
    if isinstance(x, (list, tuple)):
        return [jlit(y) for y in x]
    return str(x)


def elem_lit(x) -> object:
    """Portable coordinates of a tower element (strings, nested by floor)."""
    E = x.field
    return jlit(pm._literal(E, len(E.floors) - 1, x.raw))


@dataclass
class Analysis:
    spec: ExtensionSpec
    cfg: RunConfig
    ext: Extension
    G: GaloisGroup
    profile: RamProfile
    br: Breaks
    pairs: dict
    conductor: object
    lattice: list
    uidx: list
    seconds: dict = field(default_factory=dict)


def analyze(spec: ExtensionSpec, cfg: RunConfig = RunConfig()) -> Analysis:
    t = {}
    t0 = time.perf_counter()
    ext = build_extension(spec, cfg.precision)
    G = galois_group(ext)  # NotGalois propagates
    prof = profile_from_roots(G)
    br = breaks(prof)
    pairs = pairwise_valuations(G.roots)
    c = conductor(G.order, pairs, br)
    t["invariants"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    lat = subextension_lattice(G)
    t["lattice"] = time.perf_counter() - t0
    return Analysis(spec, cfg, ext, G, prof, br, pairs, c, lat, fl.upper_indices(G, br), t)


# ---------------------------------------------------------------- sections

def extension_section(an: Analysis) -> dict:
    L = an.ext.field
    return {"d": an.ext.degree, "e": L.e, "f": L.f,
            "minpoly": jlit(an.ext.P_signed()), "ground": an.spec.ground.label()}


def herbrand_section(br: Breaks) -> dict:
    f = br.f
    return {"knots": [[jrat(x), jrat(y)] for x, y in f.knots],
            "initial_slope": jrat(f.initial_slope), "final_slope": jrat(f.final_slope)}


def herbrand_tsv(br: Breaks) -> str:
    rows = ["x\tf(x)", "0/1\t0/1"] + [f"{jrat(x)}\t{jrat(y)}" for x, y in br.f.knots]
    return "\n".join(rows) + "\n"


def _sub(H) -> list:
    return sorted(H)


def lattice_section(an: Analysis) -> list:
    out = []
    for sf in an.lattice:
        out.append({"H": _sub(sf.H), "degree": sf.degree, "normal": sf.normal, "e": sf.e, "f": sf.f,
                    "minpoly": jlit(sf.minpoly) if sf.minpoly is not None else None,
                    "certified": sf.certified, "u": jrat(fl.member_u(an.uidx, sf.H))})
    return out


def filtration_section(an: Analysis) -> dict:
    G, br = an.G, an.br
    compat = fl.quotient_compatibility_check(G, br, an.lattice, an.cfg.precision)
    table = fl.fixed_field_table(G, br, an.lattice, an.cfg.table_grid)
    grid = pm.m_grid(an.br.u_max, an.cfg.m_grid_den)
    fin = fl.finite_level_checks(G, br, an.lattice, grid)
    return {
        "upper_indices": [jrat(x) for x in an.uidx],
        "quotient_compatibility": [
            {"H": _sub(r.H), "degree": r.degree, "induced": [jrat(x) for x in r.induced],
             "direct": None if r.direct is None else [jrat(x) for x in r.direct],
             "match": r.match, **({"note": r.note} if r.note else {})} for r in compat],
        "fixed_field_table": [
            {"m": jrat(r.m), "below_m": _sub(r.below), "fixed_G_m": _sub(r.fixed),
             "upto_m": _sub(r.upto), "fixed_G_m_plus": _sub(r.fixed_plus), "holds": r.holds}
            for r in table],
        "finite_level": {"trivial_above_u": fin.trivial_above, "inertia_for_small_m": fin.inertia_low,
                  "member_classes": fin.member_classes,
                  "unramified_base_change": dict(sorted(fin.base_change.items())),
                  "inertia": _sub(fin.inertia), "passes": fin.passes},
        "left_continuous": fl.left_continuity(an.uidx),
        "separation": fl.separation(an.uidx, br.u_max),
        "composites": all(c["ok"] for c in fl.composite_check(G, br, an.lattice)),
    }


def disc_section(an: Analysis) -> list:
    grid = pm.m_grid(an.br.u_max, an.cfg.m_grid_den)
    rows = []
    for m in grid:
        dc = disc_cover(an.G.order, an.pairs, an.br, m)
        rows.append({"m": jrat(m), "radius": jrat(dc.radius),
                     "components": [list(c) for c in dc.components], "separated": dc.qpp_holds})
    return rows


def pm_section(an: Analysis, mode: str = "smart") -> dict:
    ext, u = an.ext, an.br.u_max
    cfg = an.cfg
    t0 = time.perf_counter()
    cat, skipped = pm.build_catalog(ext, u, an.lattice, cfg.catalog, cfg.precision)
    grid = pm.m_grid(u, cfg.m_grid_den, cfg.m_grid_span)
    if mode == "brute":
        rows = _brute_rows(ext, cat, grid, u)
    rep = pm.pm_scan(ext, cat, u, grid, cfg.precision, skipped)
    an.seconds["pm_scan"] = time.perf_counter() - t0
    table = []
    for r in rep.rows:
        row = {"m": jrat(r["m"]), "verdict": r["verdict"]}
        if r["m"] == u:
            row["at_u"] = True  # recorded, never asserted
        if u not in (None, NEG_INF) and r["m"] > u:
            row["reason"] = "bound"
        if r["verdict"] == "counterexample":
            row.update({"field": r["field"], "v_P": jrat(r["v_P"]), "witness": elem_lit(r["witness"])})
        table.append(row)
    window = pm.fontaine_window_check(rep, ext.degree, an.br.i_max, ext.field.e)
    fields = []
    for fs in rep.fields:
        d = {"name": fs.test.name, "kind": fs.test.kind, "e": fs.E.e, "f": fs.E.f,
             "embeds": fs.embeds}
        if not fs.embeds:
            d["max_v_P"] = jrat(fs.search.max_val)
        fields.append(d)
    lb = rep.lower_bound
    out = {
        "u": jrat(u),
        "grid_denominator": cfg.m_grid_den,
        "catalog": {"e_max": cfg.catalog.e_max, "perturb_den": cfg.catalog.perturb_den,
                    "size": len(cat), "fields": fields, "skipped": rep.skipped},
        "table": table,
        "m_lower_bound": jrat(lb) if lb is not None else None,
        "window": {k: (jrat(v) if isinstance(v, Fraction) else
                       [jrat(x) for x in v] if isinstance(v, tuple) else v)
                   for k, v in window.items()},
        "soundness": {"passes": rep.sound, "violations": [
            {"field": v["field"], "max_v_P": jrat(v["max_val"])} for v in rep.violations]},
    }
    if lb is None:
        out["m_verdict"] = "m <= 0"  # no counterexample at any m > 0
    if mode == "brute":
        out["brute"] = rows
    return out


def _brute_rows(ext, cat, grid, u):
    rows = []
    for t in cat:
        for m in grid:
            v = pm.pm_verdict(ext, t, m, u, mode="brute")
            rows.append({"field": t.name, "m": jrat(m), "holds": v.holds})
    return rows


# ---------------------------------------------------------------- documents

def report_doc(an: Analysis, with_pm: bool = True) -> dict:
    br = an.br
    doc = {
        "schema": REPORT_SCHEMA,
        "input": spec_json(an.spec),
        "extension": extension_section(an),
        "ram_profile": [jrat(x) for x in an.profile.diffs],
        "herbrand": herbrand_section(br),
        "lower_breaks": [jrat(x) for x in br.lower_breaks],
        "upper_breaks": [jrat(x) for x in br.upper_breaks],
        "i": jrat(br.i_max),
        "u": jrat(br.u_max),
        "c": jrat(an.conductor),
        "identities": {"u_equals_c": br.u_max == an.conductor},
        "disc_cover": disc_section(an),
        "lattice": lattice_section(an),
        "filtration": filtration_section(an),
    }
    if an.cfg.serre:
        s = serre_convention(br, an.ext.field.e)
        doc["serre_convention"] = {"lower": [jrat(x) for x in s["lower"]],
                                   "upper": [jrat(x) for x in s["upper"]]}
    if with_pm:
        doc["pm_scan"] = pm_section(an)
    return doc


def identity_failures(doc: dict) -> list[str]:
    """Asserted identities that fail, as human-readable diffs."""
    bad = []
    if "identities" in doc and not doc["identities"]["u_equals_c"]:
        bad.append(f"u = {doc['u']} but c = {doc['c']}")
    filt = doc.get("filtration")
    if filt:
        for r in filt["quotient_compatibility"]:
            if not r["match"]:
                bad.append(f"quotient chain on H={r['H']}: induced {r['induced']} vs direct {r['direct']}"
                           + (f" ({r['note']})" if r.get("note") else ""))
        for r in filt["fixed_field_table"]:
            if not r["holds"]:
                bad.append(f"fixed-field row m={r['m']}: below {r['below_m']} vs G^(m) {r['fixed_G_m']}, "
                           f"upto {r['upto_m']} vs G^(m+) {r['fixed_G_m_plus']}")
        if not filt["finite_level"]["passes"]:
            bad.append(f"finite-level filtration checks failed: {filt['finite_level']}")
        if not filt["left_continuous"] or not all(filt["separation"].values()):
            bad.append("filtration not left continuous or not separated")
        if not filt["composites"]:
            bad.append("u of a composite differs from the max over its factors")
    pmd = doc.get("pm_scan")
    if pmd:
        if not pmd["soundness"]["passes"]:
            bad.append(f"oracle found v(P) above u: {pmd['soundness']['violations']}")
        if not pmd["window"].get("passes", True):
            bad.append(f"lower bound outside the window: {pmd['window']}")
    return bad


def canonical(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=True) + "\n"


def finalize(doc: dict, seconds: dict) -> dict:
    """Attach the stability hash of the body and the timing sidecar (not hashed)."""
    body = canonical(doc)
    out = dict(doc)
    out["stability_hash"] = hashlib.sha256(body.encode()).hexdigest()
    out["timing"] = {k: round(v, 3) for k, v in sorted(seconds.items())}
    return out


def body_of(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k not in ("timing", "stability_hash")}
