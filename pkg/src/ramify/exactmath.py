"""Exact arithmetic kernels: rationals, small finite fields, piecewise-linear maps.

Rationals are plain :class:`fractions.Fraction` values; this module only adds
parsing/formatting helpers so every other module agrees on one encoding.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a canonical Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def fmt_rat(x: Fraction) -> str:
    # always num/den, including integers ("3/1"), so readers never guess
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    if "/" in s:
        num, den = s.split("/")
        if int(den) <= 0:
            raise ValueError(f"bad denominator in {s!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def farey_grid(max_den: int, lo, hi, include_lo=False) -> list[Fraction]:
    """All rationals with denominator <= max_den in (lo, hi] (or [lo, hi])."""
    lo, hi = rat(lo), rat(hi)
    out = set()
    for den in range(1, max_den + 1):
        start = (lo * den).__floor__()
        stop = (hi * den).__ceil__()
        for num in range(start, stop + 1):
            x = Fraction(num, den)
            if (lo < x or (include_lo and x == lo)) and x <= hi:
                out.add(x)
    return sorted(out)


# ---------------------------------------------------------------- F_p[x]

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def polymod_p(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo monic m, coefficients low-to-high, mod p."""
    r = [x % p for x in a]
    dm = len(m) - 1
    for k in range(len(r) - 1, dm - 1, -1):
        c = r[k]
        if c:
            for i in range(dm + 1):
                r[k - dm + i] = (r[k - dm + i] - c * m[i]) % p
    return _trim(r[:dm]) if dm > 0 else []


def _monic_polys(p: int, deg: int) -> Iterable[list[int]]:
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def find_factor(m: Sequence[int], p: int):
    """Return a monic proper factor of m over F_p, or None if m is irreducible."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(p, d):
            if not polymod_p(m, g, p):
                return g
    return None


# fixed moduli so element encodings never drift between runs
BUILTIN_MODULI = {
    (2, 1): [0, 1], (2, 2): [1, 1, 1], (2, 3): [1, 1, 0, 1], (2, 4): [1, 1, 0, 0, 1],
    (3, 1): [0, 1], (3, 2): [1, 0, 1], (3, 3): [1, 2, 0, 1], (3, 4): [2, 0, 0, 1, 1],
    (5, 1): [0, 1], (5, 2): [2, 0, 1], (5, 3): [1, 1, 0, 1], (5, 4): [2, 0, 1, 0, 1],
    (7, 1): [0, 1], (7, 2): [1, 0, 1], (7, 3): [2, 0, 0, 1], (7, 4): [3, 0, 1, 0, 1],
}


class ReducibleModulus(ValueError):
    def __init__(self, modulus, factor):
        super().__init__(f"modulus {modulus} is reducible: factor {factor}")
        self.factor = factor


@dataclass(frozen=True)
class FqElem:
    field: "FiniteField"
    coeffs: tuple

    def __add__(self, o):
        return self.field.add(self, o)

    def __sub__(self, o):
        return self.field.sub(self, o)

    def __mul__(self, o):
        return self.field.mul(self, o)

    def __neg__(self):
        return self.field.neg(self)

    def __pow__(self, n: int):
        return self.field.pow(self, n)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"F{self.field.q}{list(self.coeffs)}"


class FiniteField:
    """F_{p^f} as F_p[x]/(modulus); elements are coefficient tuples of length f."""

    def __init__(self, p: int, f: int = 1, modulus: Sequence[int] | None = None):
        if modulus is None:
            modulus = BUILTIN_MODULI.get((p, f))
            if modulus is None:
                modulus = next(g for g in _monic_polys(p, f) if find_factor(g, p) is None)
        modulus = [c % p for c in modulus]
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if f > 1:
            fac = find_factor(modulus, p)
            if fac is not None:
                raise ReducibleModulus(modulus, fac)
        self.p, self.f, self.q = p, f, p ** f
        self.modulus = tuple(modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __call__(self, coeffs) -> FqElem:
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = [x % self.p for x in coeffs]
        if len(c) > self.f:
            c = polymod_p(c, self.modulus, self.p)
        c = c + [0] * (self.f - len(c))
        return FqElem(self, tuple(c))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        return self([0, 1]) if self.f > 1 else self(1)

    def add(self, a, b):
        return FqElem(self, tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a, b):
        return FqElem(self, tuple((x - y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a):
        return FqElem(self, tuple(-x % self.p for x in a.coeffs))

    def mul(self, a, b):
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return self(prod)

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = self.one(), a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.pow(a, self.q - 2)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def elements(self):
        for c in itertools.product(range(self.p), repeat=self.f):
            yield FqElem(self, tuple(c))

    def __repr__(self):
        return f"FiniteField({self.p}^{self.f}, modulus={list(self.modulus)})"


# ---------------------------------------------------------------- PL maps

class NotMonotone(ValueError):
    pass


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear map on [0, inf).

    ``knots`` holds the breakpoints (x, y) with x > 0 in increasing order, the
    function starts at (0, y0) with ``initial_slope`` and leaves the last knot
    with ``final_slope``.  Slopes between knots are implied by the knots.
    """
    knots: tuple = ()
    initial_slope: Fraction = Fraction(1)
    final_slope: Fraction = Fraction(1)
    y0: Fraction = Fraction(0)

    def __post_init__(self):
        pts = [(Fraction(0), rat(self.y0))] + [(rat(x), rat(y)) for x, y in self.knots]
        object.__setattr__(self, "knots", tuple(pts[1:]))
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise NotMonotone("knot abscissae must be strictly increasing and positive")
        for s in self.slopes():
            if s <= 0:
                raise NotMonotone(f"slope {s} is not positive")

    @classmethod
    def from_slopes(cls, pieces, final_slope, y0=0):
        """pieces: [(length, slope), ...] starting at 0."""
        x, y, knots = Fraction(0), rat(y0), []
        first = None
        for length, slope in pieces:
            length, slope = rat(length), rat(slope)
            if length == 0:
                continue
            if first is None:
                first = slope
            x, y = x + length, y + length * slope
            knots.append((x, y))
        first = rat(final_slope) if first is None else first
        f = cls(tuple(knots), first, rat(final_slope), rat(y0))
        return f.simplified()

    def points(self):
        return [(Fraction(0), self.y0)] + list(self.knots)

    def slopes(self) -> list[Fraction]:
        pts = self.points()
        inner = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]
        if inner and inner[0] != self.initial_slope:
            raise NotMonotone("initial slope disagrees with first knot")
        return (inner or [self.initial_slope]) + [self.final_slope]

    def simplified(self) -> "PLFunction":
        pts = self.points()
        slopes = self.slopes()
        keep = [k for i, k in enumerate(pts[1:]) if slopes[i] != slopes[i + 1]]
        init = slopes[0]
        return PLFunction(tuple(keep), init, self.final_slope, self.y0)

    def __call__(self, x) -> Fraction:
        return self.eval(x)

    def eval(self, x) -> Fraction:
        x = rat(x)
        if x < 0:
            raise ValueError("PL functions here live on [0, inf)")
        px, py = Fraction(0), self.y0
        for kx, ky in self.knots:
            if x <= kx:
                return py + (x - px) * (ky - py) / (kx - px)
            px, py = kx, ky
        return py + (x - px) * self.final_slope

    def invert(self) -> "PLFunction":
        if self.y0 != 0:
            raise ValueError("inverse only supported for maps fixing 0")
        knots = tuple((y, x) for x, y in self.knots)
        return PLFunction(knots, 1 / self.initial_slope, 1 / self.final_slope, Fraction(0))

    def slope_at(self, x) -> Fraction:
        """Right-hand slope at x."""
        x = rat(x)
        slopes = self.slopes()
        for i, (kx, _) in enumerate(self.knots):
            if x < kx:
                return slopes[i]
        return self.final_slope


def pl_eval(F: PLFunction, x) -> Fraction:
    return F.eval(x)


def pl_invert(F: PLFunction) -> PLFunction:
    return F.invert()
