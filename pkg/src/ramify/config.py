"""Run settings shared by the CLI, the scripts and the tests."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction

from .localfield import DEFAULT_PRECISION, MAX_PRECISION
from .pmoracle import CatalogConfig


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_PRECISION
    m_grid_den: int = 4  # denominators of the m grid
    m_grid_span: Fraction = Fraction(2)  # grid runs over (0, u + span]
    catalog: CatalogConfig = CatalogConfig()
    serre: bool = False
    with_pm: bool = True
    table_grid: tuple = (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(7, 2))

    def with_precision(self, prec: int) -> "RunConfig":
        if not 4 <= prec <= MAX_PRECISION:
            raise ValueError(f"precision must lie in [4, {MAX_PRECISION}]")
        return replace(self, precision=prec)


def env_precision(default: int = DEFAULT_PRECISION) -> int:
    raw = os.environ.get("RAMIFY_PRECISION")
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"RAMIFY_PRECISION={raw!r} is not an integer") from None


def parse_catalog_knobs(text: str, base: CatalogConfig = CatalogConfig()) -> CatalogConfig:
    """'tame:4,perturb:4' -> e'_max = 4, perturbation denominators <= 4."""
    cfg = base
    for part in filter(None, (x.strip() for x in text.split(","))):
        key, _, val = part.partition(":")
        try:
            n = int(val)
        except ValueError:
            raise ValueError(f"catalog knob {part!r} needs an integer value") from None
        if n < 1:
            raise ValueError(f"catalog knob {part!r} must be positive")
        if key == "tame":
            cfg = replace(cfg, e_max=n)
        elif key == "perturb":
            cfg = replace(cfg, perturb_den=n)
        elif key == "limit":
            cfg = replace(cfg, limit=n)
        else:
            raise ValueError(f"unknown catalog knob {key!r} (use tame, perturb, limit)")
    return cfg
