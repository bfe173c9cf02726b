"""ramify report|pm-scan|lattice|catalog <spec.json> [flags]

Exit codes: 0 ok, 2 bad input (schema or enumeration budget), 3 not Galois,
4 an asserted identity failed (diff on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import pmoracle as pm
from .catalog import BUILTINS
from .config import RunConfig, env_precision, parse_catalog_knobs
from .exactmath import fmt_rat
from .galois import GeneratorFailure, NotGalois
from .localfield import InsufficientPrecision
from .report import (analyze, body_of, canonical, finalize, herbrand_tsv, identity_failures,
                     lattice_section, filtration_section, pm_section, report_doc)
from .specfile import SpecError, load_spec, spec_json

EXIT_OK, EXIT_SCHEMA, EXIT_NOT_GALOIS, EXIT_IDENTITY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramify", description="Ramification invariants of finite Galois "
                                 "extensions of local fields, with a lifting-property oracle.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, spec_required=True):
        p.add_argument("spec", nargs=None if spec_required else "?",
                       help="spec JSON file or the name of a built-in example")
        p.add_argument("--precision", type=int, default=None,
                       help="working precision in units of v_K (default 32, or RAMIFY_PRECISION)")
        p.add_argument("--m-grid", type=int, default=None, metavar="D",
                       help="denominator bound of the m grid (default 4)")
        p.add_argument("--catalog", default=None, metavar="KNOBS",
                       help="test-field catalog knobs, e.g. tame:4,perturb:4")
        p.add_argument("--serre-convention", action="store_true",
                       help="also print the classical (shifted) numbering")
        p.add_argument("--tsv", action="store_true", help="print Herbrand knots as TSV and exit")
        p.add_argument("--json", action="store_true", help="JSON output (default for report/pm-scan)")
        p.add_argument("-o", "--output", default=None, help="write the document to this file")

    common(sub.add_parser("report", help="full invariant report"))
    sc = sub.add_parser("pm-scan", help="lifting-property oracle over the test-field catalog")
    common(sc)
    sc.add_argument("--brute", action="store_true", help="also enumerate classes directly (small cases)")
    common(sub.add_parser("lattice", help="subextension lattice and filtration tables"))
    common(sub.add_parser("catalog", help="built-in examples, or the test fields for one spec"),
           spec_required=False)
    return ap


def _resolve(arg: str):
    path = Path(arg)
    if path.exists():
        return load_spec(path)
    if arg in BUILTINS:
        from .specfile import parse_spec
        b = BUILTINS[arg]
        return parse_spec(spec_json(b.spec))
    raise SpecError("", f"no such file or built-in example: {arg!r}")


def _config(args, loaded) -> RunConfig:
    opts = loaded.options if loaded is not None else None
    prec = args.precision or (opts.precision if opts and opts.precision else None) or env_precision()
    cfg = RunConfig().with_precision(prec)
    cat = cfg.catalog
    if opts is not None:
        if opts.e_max:
            cat = replace(cat, e_max=opts.e_max)
        if opts.perturb_den:
            cat = replace(cat, perturb_den=opts.perturb_den)
    if args.catalog:
        cat = parse_catalog_knobs(args.catalog, cat)
    den = args.m_grid or (opts.m_grid if opts and opts.m_grid else None) or cfg.m_grid_den
    if den < 1:
        raise ValueError("--m-grid must be positive")
    return replace(cfg, catalog=cat, m_grid_den=den, serre=args.serre_convention)


def _emit(text: str, args):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _catalog_text() -> str:
    lines = []
    for name, b in BUILTINS.items():
        lines.append(f"{name:10s} {b.spec.ground.label():9s} u={fmt_rat(b.u):5s} {b.description}")
    return "\n".join(lines) + "\n"


def _catalog_doc() -> dict:
    return {"schema": "ramify-catalog/1", "entries": [
        {"name": n, "description": b.description, "expected": {
            "u": fmt_rat(b.u), "i": fmt_rat(b.i_max), "upper_breaks": [fmt_rat(x) for x in b.upper]},
         "spec": spec_json(b.spec)} for n, b in BUILTINS.items()]}


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.cmd == "catalog" and args.spec is None:
            _emit(canonical(_catalog_doc()) if args.json else _catalog_text(), args)
            return EXIT_OK
        loaded = _resolve(args.spec)
        cfg = _config(args, loaded)
        an = analyze(loaded.spec, cfg)
    except SpecError as exc:
        print(f"ramify: schema error at {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ValueError, TypeError, GeneratorFailure) as exc:
        # literals that do not parse, reducible moduli, non-Eisenstein steps
        print(f"ramify: invalid extension: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except NotGalois as exc:
        print(f"ramify: {exc}", file=sys.stderr)
        return EXIT_NOT_GALOIS

    if args.tsv:
        _emit(herbrand_tsv(an.br), args)
        return EXIT_OK

    try:
        if args.cmd == "report":
            doc = report_doc(an, with_pm=True)
        elif args.cmd == "pm-scan":
            doc = {"schema": "ramify-pmscan/1", "input": spec_json(an.spec),
                   "pm_scan": pm_section(an, "brute" if args.brute else "smart")}
        elif args.cmd == "lattice":
            doc = {"schema": "ramify-lattice/1", "input": spec_json(an.spec),
                   "u": fmt_rat(an.br.u_max) if an.br.u_max != float("-inf") else "-inf",
                   "lattice": lattice_section(an), "filtration": filtration_section(an)}
        else:  # catalog for one spec: the test fields
            cat, skipped = pm.build_catalog(an.ext, an.br.u_max, an.lattice, cfg.catalog, cfg.precision)
            doc = {"schema": "ramify-testfields/1", "input": spec_json(an.spec),
                   "fields": [t.describe() for t in cat], "skipped": skipped}
    except pm.EnumerationTooLarge as exc:
        print(f"ramify: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InsufficientPrecision as exc:
        print(f"ramify: {exc}; retry with a larger --precision", file=sys.stderr)
        return EXIT_SCHEMA

    an.seconds["total"] = time.perf_counter() - t0
    failures = identity_failures(doc)
    if args.serre_convention and "serre_convention" not in doc:
        from .ramification import serre_convention
        s = serre_convention(an.br, an.ext.field.e)
        doc["serre_convention"] = {k: [fmt_rat(x) for x in v] for k, v in s.items()}
    if args.cmd == "catalog" and not args.json:
        text = "\n".join(f"{f['name']}" for f in doc["fields"]) + "\n"
    else:
        text = canonical(finalize(doc, an.seconds))
    _emit(text, args)
    if failures:
        for f in failures:
            print(f"ramify: identity failure: {f}", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
