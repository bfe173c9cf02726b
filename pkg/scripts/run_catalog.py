#!/usr/bin/env python3
"""Write a full JSON report for every built-in extension and print a summary line each."""
import argparse
import json
import sys
import time
from pathlib import Path

from ramify.catalog import BUILTINS
from ramify.config import RunConfig
from ramify.report import analyze, canonical, finalize, identity_failures, report_doc


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports")
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--no-pm", action="store_true", help="skip the oracle scan")
    ap.add_argument("names", nargs="*", default=list(BUILTINS))
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig().with_precision(args.precision)
    failed = 0
    print(f"{'name':10} {'d':>3} {'e':>3} {'u':>6} {'c':>6} {'m_lb':>6} {'secs':>6}  identities")
    for name in args.names:
        t = time.perf_counter()
        an = analyze(BUILTINS[name].spec, cfg)
        doc = report_doc(an, with_pm=not args.no_pm)
        bad = identity_failures(doc)
        failed += bool(bad)
        (out / f"{name}.json").write_text(canonical(finalize(doc, an.seconds)))
        lb = doc.get("pm_scan", {}).get("m_lower_bound", "-")
        print(f"{name:10} {doc['extension']['d']:>3} {doc['extension']['e']:>3} {doc['u']:>6} "
              f"{doc['c']:>6} {str(lb):>6} {time.perf_counter() - t:6.1f}  {'ok' if not bad else bad}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
