"""Ramification invariants of finite Galois extensions of local fields."""
from .exactmath import FiniteField, PLFunction, fmt_rat, rat
from .localfield import (AtLeast, Eisenstein, Exact, GroundField, InsufficientPrecision,
                         TowerField, Unramified, eisenstein, newton_polygon)

__version__ = "0.1.0"
