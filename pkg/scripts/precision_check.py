#!/usr/bin/env python3
"""Compare report bodies at two working precisions (timing and hash excluded)."""
import argparse
import json
import sys

from ramify.catalog import BUILTINS
from ramify.config import RunConfig
from ramify.report import analyze, canonical, report_doc


def body(name, prec):
    an = analyze(BUILTINS[name].spec, RunConfig().with_precision(prec))
    return canonical(report_doc(an))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--low", type=int, default=32)
    ap.add_argument("--high", type=int, default=64)
    ap.add_argument("names", nargs="*", default=list(BUILTINS))
    args = ap.parse_args(argv)
    differ = []
    for name in args.names:
        same = body(name, args.low) == body(name, args.high)
        print(f"{name:10} {'identical' if same else 'DIFFERS'}")
        if not same:
            differ.append(name)
    print(json.dumps({"differ": differ}))
    return 1 if differ else 0


if __name__ == "__main__":
    sys.exit(main())
