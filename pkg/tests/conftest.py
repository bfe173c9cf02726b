import functools
import random

import pytest

from ramify.catalog import BUILTINS
from ramify.config import RunConfig
from ramify.report import analyze


@functools.lru_cache(maxsize=None)
def analysis(name: str, prec: int = 32):
    return analyze(BUILTINS[name].spec, RunConfig().with_precision(prec))


def random_elem(F, rng: random.Random, digits: int = 6, lowest: int = 0, exact_val: bool = False):
    """sum_{i < digits} r_i pi^(lowest + i) with uniformly drawn residue representatives
    (r_0 nonzero when exact_val, so the valuation is exactly lowest/e)."""
    reps = F.residue_reps()
    units = [r for r in reps if not F.top.is_zero(r)]
    pi = F.uniformizer()
    acc = F.zero()
    for i in range(digits):
        r = rng.choice(units if (exact_val and i == 0) else reps)
        acc = acc + F.elem(r) * pi ** (lowest + i)
    return acc


@pytest.fixture(scope="session")
def get_analysis():
    return analysis


ALL = list(BUILTINS)
WILD = [n for n, b in BUILTINS.items() if b.wild]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    order = ["1", "2", "3", "4", "5", "6", "7", "8a", "8b", "9", "10"]
    for key in order:
        if key in mod.RESULTS:
            terminalreporter.write_line(mod.RESULTS[key])
