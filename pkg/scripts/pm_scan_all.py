#!/usr/bin/env python3
"""Oracle scan over the built-ins: per-m verdict rows plus the lower bound on m."""
import argparse
import sys

from ramify.catalog import BUILTINS
from ramify.config import RunConfig, parse_catalog_knobs
from ramify.report import analyze, pm_section


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--catalog", default="", help="knobs, e.g. tame:4,perturb:4")
    ap.add_argument("--m-grid", type=int, default=4)
    ap.add_argument("--rows", action="store_true", help="print every table row")
    ap.add_argument("names", nargs="*", default=list(BUILTINS))
    args = ap.parse_args(argv)
    cfg = RunConfig(m_grid_den=args.m_grid)
    if args.catalog:
        cfg = RunConfig(m_grid_den=args.m_grid, catalog=parse_catalog_knobs(args.catalog))
    for name in args.names:
        an = analyze(BUILTINS[name].spec, cfg)
        pm = pm_section(an)
        win = pm["window"]
        print(f"{name:10} u={pm['u']:>5} lower_bound={str(pm['m_lower_bound']):>5} "
              f"catalog={pm['catalog']['size']:>3} sound={pm['soundness']['passes']} "
              f"window={win.get('passes')} {pm.get('m_verdict', '')}")
        if args.rows:
            for r in pm["table"]:
                extra = f" via {r['field']} v(P)={r['v_P']}" if r["verdict"] == "counterexample" else ""
                print(f"    m={r['m']:>5} {r['verdict']}{extra}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
