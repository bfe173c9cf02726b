"""Precision-tracked arithmetic in towers over Q_p and F_p((t)).

A tower is a chain of floors.  The bottom floor is O_K / pi_K^N (integers mod
p^N, or truncated power series in t).  Each further floor is
O_prev[x] / (g(x)) for a monic g which is either an unramified lift or an
Eisenstein polynomial, so ring arithmetic in O_T / pi_K^N is exact.  Floor
valuations are kept as integers in units of 1/e of that floor; the public
valuation is the Fraction w/e in v_K units.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactmath import BUILTIN_MODULI, find_factor

DEFAULT_PRECISION = 32
MAX_PRECISION = 512


class InsufficientPrecision(ArithmeticError):
    def __init__(self, needed=None, msg="working precision too low"):
        super().__init__(f"{msg} (needed ~{needed})" if needed is not None else msg)
        self.needed = needed


class NotEisenstein(ValueError):
    pass


class PossibleZero(ZeroDivisionError):
    """Inverting an element whose valuation is only known as a lower bound."""


def escalate(fn: Callable[[int], object], start: int = DEFAULT_PRECISION, cap: int = MAX_PRECISION):
    """Run fn(prec) with prec doubling from ``start`` until it stops asking for more."""
    prec = start
    while True:
        try:
            return fn(prec)
        except InsufficientPrecision:
            if prec >= cap:
                raise
            prec = min(2 * prec, cap)


# ---------------------------------------------------------------- valuations

@dataclass(frozen=True)
class Exact:
    v: Fraction

    @property
    def bound(self):
        return self.v

    is_exact = True

    def __str__(self):
        return f"Exact({self.v})"


@dataclass(frozen=True)
class AtLeast:
    N: Fraction

    @property
    def bound(self):
        return self.N

    is_exact = False

    def __str__(self):
        return f"AtLeast({self.N})"


ValResult = Exact | AtLeast


# ---------------------------------------------------------------- ground rings

class PadicRing:
    """Z_p / p^N with elements stored as Python ints in [0, p^N)."""
    kind = "padic"

    def __init__(self, p: int, N: int):
        self.p, self.N, self.M = p, N, p ** N
        self.zero, self.one = 0, 1
        self.pi = p % self.M
        self.e, self.f, self.degree, self.q = 1, 1, 1, p

    def add(self, a, b):
        return (a + b) % self.M

    def sub(self, a, b):
        return (a - b) % self.M

    def neg(self, a):
        return -a % self.M

    def mul(self, a, b):
        return a * b % self.M

    def is_zero(self, a):
        return a == 0

    def w(self, a):
        if a == 0:
            return None
        k = 0
        while a % self.p == 0:
            a //= self.p
            k += 1
        return k

    def div_pi(self, a):
        return a // self.p

    def inv_unit(self, a):
        return pow(a, -1, self.M)

    def from_int(self, n: int):
        return n % self.M

    def residue(self, a) -> int:
        return a % self.p

    def reps(self):
        return list(range(self.p))

    def coords(self, a):
        return [a]

    def from_coords(self, c):
        return c[0]

    def key(self, a):
        return a

    def embed(self, a):
        return a

    def parse(self, lit):
        if isinstance(lit, str):
            return self.from_int(int(lit.strip()))
        return self.from_int(int(lit))

    def show(self, a) -> str:
        half = self.M // 2
        return str(a - self.M if a > half else a)

    def signed(self, a) -> int:
        return a - self.M if a > self.M // 2 else a


_TERM = re.compile(r"^([+-]?\d*)\*?(t(\^(\d+))?)?$")


class LaurentRing:
    """F_p[[t]] / t^N with elements as read-only int64 numpy vectors."""
    kind = "laurent"

    def __init__(self, p: int, N: int):
        self.p, self.N = p, N
        self.zero = self._freeze(np.zeros(N, dtype=np.int64))
        self.one = self.from_int(1)
        t = np.zeros(N, dtype=np.int64)
        if N > 1:
            t[1] = 1
        self.pi = self._freeze(t)
        self.e, self.f, self.degree, self.q = 1, 1, 1, p

    @staticmethod
    def _freeze(a):
        a.setflags(write=False)
        return a

    def add(self, a, b):
        return self._freeze((a + b) % self.p)

    def sub(self, a, b):
        return self._freeze((a - b) % self.p)

    def neg(self, a):
        return self._freeze(-a % self.p)

    def mul(self, a, b):
        return self._freeze(np.convolve(a, b)[: self.N] % self.p)

    def is_zero(self, a):
        return not a.any()

    def w(self, a):
        nz = np.flatnonzero(a)
        return int(nz[0]) if nz.size else None

    def div_pi(self, a):
        out = np.zeros(self.N, dtype=np.int64)
        out[:-1] = a[1:]
        return self._freeze(out)

    def inv_unit(self, a):
        a0 = int(a[0])
        if a0 == 0:
            raise PossibleZero("not a unit")
        y = self.from_int(pow(a0, -1, self.p))
        while True:
            r = self.sub(self.one, self.mul(a, y))
            if self.is_zero(r):
                return y
            y = self.mul(y, self.add(self.one, r))

    def from_int(self, n: int):
        out = np.zeros(self.N, dtype=np.int64)
        out[0] = n % self.p
        return self._freeze(out)

    def from_list(self, coeffs):
        out = np.zeros(self.N, dtype=np.int64)
        for i, c in enumerate(coeffs):
            if i < self.N:
                out[i] = c % self.p
        return self._freeze(out)

    def residue(self, a) -> int:
        return int(a[0])

    def reps(self):
        return [self.from_int(r) for r in range(self.p)]

    def coords(self, a):
        return [a]

    def from_coords(self, c):
        return c[0]

    def key(self, a):
        nz = np.flatnonzero(a)
        return tuple(int(x) for x in a[: nz[-1] + 1]) if nz.size else ()

    def embed(self, a):
        return a

    def parse(self, lit):
        """Read ints, coefficient lists or strings like "1+t+t^3"."""
        if isinstance(lit, (list, tuple)):
            return self.from_list([int(c) for c in lit])
        if isinstance(lit, int):
            return self.from_int(lit)
        s = lit.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial literal")
        coeffs: dict[int, int] = {}
        for term in re.findall(r"[+-]?[^+-]+", s):
            m = _TERM.match(term)
            if not m:
                raise ValueError(f"cannot parse term {term!r} in {lit!r}")
            c, tpart, _, exp = m.groups()
            if tpart is None:
                coef, k = int(c), 0
            else:
                coef = -1 if c == "-" else (int(c) if c not in ("", "+") else 1)
                k = int(exp) if exp else 1
            coeffs[k] = coeffs.get(k, 0) + coef
        top = max(coeffs) if coeffs else 0
        return self.from_list([coeffs.get(i, 0) for i in range(top + 1)])

    def show(self, a) -> str:
        terms = []
        for i, c in enumerate(self.key(a)):
            if c:
                mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}*{mono}"))
        return "+".join(terms) or "0"


@dataclass(frozen=True)
class GroundField:
    kind: str  # "padic" or "laurent"
    p: int

    def __post_init__(self):
        if self.kind not in ("padic", "laurent"):
            raise ValueError(f"unknown ground kind {self.kind!r}")
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    def ring(self, N: int):
        return PadicRing(self.p, N) if self.kind == "padic" else LaurentRing(self.p, N)

    def label(self) -> str:
        return f"Q{self.p}" if self.kind == "padic" else f"F{self.p}((t))"


# ---------------------------------------------------------------- steps

@dataclass(frozen=True)
class Unramified:
    degree: int
    modulus: tuple | None = None  # monic, low-to-high, integer literals

    def describe(self):
        return {"type": "unramified", "degree": self.degree,
                **({"modulus": list(self.modulus)} if self.modulus else {})}


@dataclass(frozen=True)
class Eisenstein:
    coeffs: tuple  # monic, low-to-high; entries are ground literals or coordinate lists

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def describe(self):
        return {"type": "eisenstein", "coeffs": [c if not isinstance(c, tuple) else list(c) for c in self.coeffs]}


def _freeze_lit(c):
    if isinstance(c, list):
        return tuple(_freeze_lit(x) for x in c)
    return c


def eisenstein(coeffs) -> Eisenstein:
    return Eisenstein(tuple(_freeze_lit(c) for c in coeffs))


# ---------------------------------------------------------------- floors

class GroundFloor:
    """Wraps a ground ring so every floor exposes the same interface."""
    level = 0

    def __init__(self, ring):
        self.ring = ring
        self.base = None
        self.e, self.f, self.degree = 1, 1, 1
        self.q = ring.p
        self.zero, self.one, self.pi = ring.zero, ring.one, ring.pi
        r = ring
        self.add, self.sub, self.neg, self.mul = r.add, r.sub, r.neg, r.mul
        self.is_zero, self.w, self.div_pi, self.inv_unit = r.is_zero, r.w, r.div_pi, r.inv_unit
        self.from_int, self.key, self.coords, self.from_coords = r.from_int, r.key, r.coords, r.from_coords

    def reps(self):
        return self.ring.reps()

    def embed(self, a):
        return a

    def parse(self, lit):
        return self.ring.parse(lit)

    def scale(self, c, a):
        return self.mul(c, a)

    def pow(self, a, n):
        return _pow(self, a, n)


def _pow(F, a, n: int):
    result, base = F.one, a
    while n:
        if n & 1:
            result = F.mul(result, base)
        n >>= 1
        if n:
            base = F.mul(base, base)
    return result


class ExtFloor:
    """O_B[x]/(g) for a monic g over the floor B below."""

    def __init__(self, base, kind: str, g: Sequence):
        self.base = base
        self.kind = kind
        self.level = base.level + 1
        n = len(g) - 1
        self.n = self.degree_step = n
        self.g = tuple(g[:n])
        self.degree = base.degree * n
        B = base
        if kind == "eis":
            self.e, self.f = base.e * n, base.f
        else:
            self.e, self.f = base.e, base.f * n
        self.ring = base.ring
        self.q = self.ring.p ** self.f
        self.zero = tuple([B.zero] * n)
        self.one = (B.one,) + tuple([B.zero] * (n - 1))
        if kind == "eis":
            self.pi = (B.zero, B.one) + tuple([B.zero] * (n - 2))
            g0u = B.div_pi(self.g[0])
            self.g0u_inv = B.inv_unit(g0u)
            # 1/x = -(x^{n-1} + g_{n-1} x^{n-2} + ... + g_1) / g_0
            self.h = tuple(self.g[1:]) + (B.one,)
        else:
            self.pi = self.embed(B.pi)
        self._reps = None

    # -- ring structure
    def embed(self, a):
        return (a,) + tuple([self.base.zero] * (self.n - 1))

    def from_int(self, k: int):
        return self.embed(self.base.from_int(k))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def scale(self, c, a):
        """Multiply by an element c of the floor below."""
        B = self.base
        return tuple(B.mul(c, x) for x in a)

    def mul(self, a, b):
        B, n = self.base, self.n
        isz, add, mul, sub = B.is_zero, B.add, B.mul, B.sub
        prod = [B.zero] * (2 * n - 1)
        bnz = [(j, y) for j, y in enumerate(b) if not isz(y)]
        for i, x in enumerate(a):
            if isz(x):
                continue
            for j, y in bnz:
                prod[i + j] = add(prod[i + j], mul(x, y))
        g = self.g
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if isz(c):
                continue
            for i in range(n):
                if not isz(g[i]):
                    prod[k - n + i] = sub(prod[k - n + i], mul(c, g[i]))
        return tuple(prod[:n])

    def pow(self, a, n):
        return _pow(self, a, n)

    def is_zero(self, a):
        isz = self.base.is_zero
        return all(isz(x) for x in a)

    def w(self, a):
        """Valuation in units of 1/e of this floor, None for ring zero."""
        B = self.base
        best = None
        if self.kind == "eis":
            n = self.n
            for i, x in enumerate(a):
                wx = B.w(x)
                if wx is not None:
                    c = n * wx + i
                    if best is None or c < best:
                        best = c
        else:
            for x in a:
                wx = B.w(x)
                if wx is not None and (best is None or wx < best):
                    best = wx
        return best

    def div_pi(self, a):
        B = self.base
        if self.kind == "unram":
            return tuple(B.div_pi(x) for x in a)
        a0 = a[0]
        q = B.zero if B.is_zero(a0) else B.mul(B.div_pi(a0), self.g0u_inv)
        out = []
        for i in range(self.n):
            nxt = a[i + 1] if i + 1 < self.n else B.zero
            out.append(B.sub(nxt, B.mul(q, self.h[i])))
        return tuple(out)

    def inv_unit(self, a):
        if self.w(a) != 0:
            raise PossibleZero("inv_unit needs a unit")
        y = _pow(self, a, self.q - 2)
        for _ in range(200):
            r = self.sub(self.one, self.mul(a, y))
            if self.is_zero(r):
                return y
            y = self.mul(y, self.add(self.one, r))
        raise RuntimeError("unit inverse iteration did not settle")

    # -- bookkeeping
    def reps(self):
        if self._reps is None:
            B = self.base
            if self.kind == "eis":
                self._reps = [self.embed(r) for r in B.reps()]
            else:
                import itertools
                self._reps = [tuple(c) for c in itertools.product(B.reps(), repeat=self.n)]
        return self._reps

    def coords(self, a):
        out = []
        for x in a:
            out.extend(self.base.coords(x))
        return out

    def from_coords(self, c):
        k = self.base.degree
        return tuple(self.base.from_coords(c[i * k:(i + 1) * k]) for i in range(self.n))

    def key(self, a):
        return tuple(self.base.key(x) for x in a)

    def parse(self, lit):
        if isinstance(lit, (tuple, list)):
            flat = [self.ring.parse(x) for x in lit]
            if len(flat) != self.degree:
                raise ValueError(f"coordinate literal needs {self.degree} entries, got {len(flat)}")
            return self.from_coords(flat)
        return self.embed(self.base.parse(lit))


# ---------------------------------------------------------------- fields

class TowerField:
    """A complete discretely valued field given by ground + steps at precision N."""

    def __init__(self, ground: GroundField, steps: Sequence = (), prec: int = DEFAULT_PRECISION, _floors=None):
        self.ground = ground
        self.steps = tuple(steps)
        self.prec = int(prec)
        if _floors is not None:
            self.floors = _floors
        else:
            floors = [GroundFloor(ground.ring(self.prec))]
            for st in self.steps:
                floors.append(_make_floor(floors[-1], st))
            self.floors = floors
        top = self.floors[-1]
        self.top = top
        self.e, self.f, self.degree = top.e, top.f, top.degree
        self.q = ground.p ** self.f
        self.p = ground.p
        self.N = Fraction(self.prec)

    # construction
    def extend(self, step) -> "TowerField":
        floors = list(self.floors) + [_make_floor(self.floors[-1], step)]
        return TowerField(self.ground, self.steps + (step,), self.prec, _floors=floors)

    def with_precision(self, prec: int) -> "TowerField":
        return TowerField(self.ground, self.steps, prec)

    def is_ground(self):
        return not self.steps

    def base_field(self) -> "TowerField":
        return TowerField(self.ground, self.steps[:-1], self.prec, _floors=self.floors[:-1])

    def label(self):
        return self.ground.label() + "".join(
            f"+U{s.degree}" if isinstance(s, Unramified) else f"+E{s.degree}" for s in self.steps)

    # raw-value helpers (no precision tracking: everything is exact mod pi_K^N)
    def lift(self, x, level: int = 0):
        """Embed a raw value living on floor ``level`` into the top floor."""
        for fl in self.floors[level + 1:]:
            x = fl.embed(x)
        return x

    def lift_ground(self, x):
        return self.lift(x, 0)

    def raw_val(self, x):
        w = self.top.w(x)
        return None if w is None else Fraction(w, self.e)

    # element constructors
    def __call__(self, x, prec=None) -> "TowerElem":
        if isinstance(x, TowerElem):
            return self.coerce(x)
        if isinstance(x, int):
            raw = self.top.from_int(x)
        elif isinstance(x, (str, list)):
            raw = self.top.parse(x)
        else:
            raw = x
        return TowerElem(self, raw, self.N if prec is None else Fraction(prec))

    @property
    def ring(self):
        return self.floors[0].ring

    def elem(self, raw, prec=None) -> "TowerElem":
        return TowerElem(self, raw, self.N if prec is None else Fraction(prec))

    def zero(self):
        return self.elem(self.top.zero)

    def one(self):
        return self.elem(self.top.one)

    def uniformizer(self):
        return self.elem(self.top.pi)

    def unram_generator(self):
        """Lift of a residue-field generator from the topmost unramified floor (or 1)."""
        for i in range(len(self.floors) - 1, 0, -1):
            fl = self.floors[i]
            if fl.kind == "unram":
                raw = (fl.base.zero, fl.base.one) + tuple([fl.base.zero] * (fl.n - 2))
                return self.elem(self.lift(raw, i))
        return self.one()

    def residue_reps(self):
        return self.top.reps()

    def coerce(self, x: "TowerElem") -> "TowerElem":
        if x.field is self:
            return x
        src = x.field
        k = len(src.floors)
        if src.ground != self.ground or src.prec != self.prec or self.floors[:k] != src.floors[:k]:
            if src.ground == self.ground and src.prec == self.prec and self.steps[:len(src.steps)] == src.steps:
                # same tower description built separately: go through coordinates
                return self.elem(self.lift(src.floors[-1].from_coords(src.top.coords(x.raw)), k - 1), x.prec)
            raise ValueError(f"cannot coerce from {src.label()} into {self.label()}")
        return self.elem(self.lift(x.raw, k - 1), x.prec)

    def contains(self, other: "TowerField") -> bool:
        return other.ground == self.ground and self.steps[:len(other.steps)] == other.steps

    def __repr__(self):
        return f"TowerField({self.label()}, e={self.e}, f={self.f}, N={self.prec})"


def _make_floor(base, step):
    ring = base.ring
    if isinstance(step, Unramified):
        n = step.degree
        if n < 1:
            raise ValueError("unramified degree must be positive")
        if step.modulus is not None:
            mod = [int(c) for c in step.modulus]
        else:
            if base.f != 1:
                raise ValueError("give an explicit modulus for an unramified step over a non-prime residue field")
            mod = BUILTIN_MODULI.get((ring.p, n))
            if mod is None:
                raise ValueError(f"no built-in modulus for p={ring.p}, degree {n}")
        if len(mod) != n + 1 or mod[-1] % ring.p != 1:
            raise ValueError("unramified modulus must be monic of the stated degree")
        if base.f == 1:
            fac = find_factor([c % ring.p for c in mod], ring.p) if n > 1 else None
            if fac is not None:
                from .exactmath import ReducibleModulus
                raise ReducibleModulus(mod, fac)
        else:
            if n > 3:
                raise ValueError("irreducibility check over F_q only implemented up to degree 3")
            for r in base.reps():
                acc = base.zero
                for c in reversed(mod):
                    acc = base.add(base.mul(acc, r), base.from_int(c))
                if base.w(acc) != 0:
                    raise ValueError("unramified modulus has a residue root")
        g = [base.from_int(c) for c in mod]
        return ExtFloor(base, "unram", g)
    if isinstance(step, Eisenstein):
        n = step.degree
        if n < 2:
            raise NotEisenstein("Eisenstein steps need degree >= 2")
        g = [base.parse(c) if not isinstance(c, int) else base.from_int(c) for c in step.coeffs]
        if not base.is_zero(base.sub(g[-1], base.one)):
            raise NotEisenstein("polynomial must be monic")
        if base.w(g[0]) != 1:
            raise NotEisenstein(f"constant term must have valuation exactly one uniformizer, got {base.w(g[0])}")
        for i in range(1, n):
            wi = base.w(g[i])
            if wi is not None and wi < 1:
                raise NotEisenstein(f"coefficient of x^{i} is a unit")
        return ExtFloor(base, "eis", g)
    raise TypeError(f"unknown step {step!r}")


# ---------------------------------------------------------------- elements

@dataclass(frozen=True, eq=False)
class TowerElem:
    field: TowerField
    raw: object
    prec: Fraction

    def _other(self, o):
        if isinstance(o, TowerElem):
            if o.field is not self.field:
                if self.field.contains(o.field):
                    return self.field.coerce(o)
                if o.field.contains(self.field):
                    raise _Swap
            return o
        if isinstance(o, int):
            return self.field.elem(self.field.top.from_int(o))
        return NotImplemented

    def _binop(self, o, op):
        try:
            o2 = self._other(o)
        except _Swap:
            return op(o.field.coerce(self), o)
        if o2 is NotImplemented:
            return NotImplemented
        return op(self, o2)

    def __add__(self, o):
        return self._binop(o, lambda a, b: TowerElem(a.field, a.field.top.add(a.raw, b.raw), min(a.prec, b.prec)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._binop(o, lambda a, b: TowerElem(a.field, a.field.top.sub(a.raw, b.raw), min(a.prec, b.prec)))

    def __rsub__(self, o):
        return self._binop(o, lambda a, b: TowerElem(a.field, a.field.top.sub(b.raw, a.raw), min(a.prec, b.prec)))

    def __neg__(self):
        return TowerElem(self.field, self.field.top.neg(self.raw), self.prec)

    def __mul__(self, o):
        def mul(a, b):
            va, vb = a.valuation().bound, b.valuation().bound
            prec = min(va + b.prec, vb + a.prec, a.field.N)
            return TowerElem(a.field, a.field.top.mul(a.raw, b.raw), prec)
        return self._binop(o, mul)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def valuation(self) -> ValResult:
        v = self.field.raw_val(self.raw)
        if v is None or v >= self.prec:
            return AtLeast(self.prec)
        return Exact(v)

    def val(self) -> Fraction:
        """Certified valuation or InsufficientPrecision."""
        r = self.valuation()
        if not r.is_exact:
            raise InsufficientPrecision(self.prec, "valuation not certified")
        return r.v

    def is_zero(self) -> bool:
        """True when indistinguishable from 0 at the current precision."""
        return not self.valuation().is_exact

    def div_uniformizer(self, k: int = 1) -> "TowerElem":
        F = self.field
        r = self.raw
        for _ in range(k):
            r = F.top.div_pi(r)
        return TowerElem(F, r, self.prec - Fraction(k, F.e))

    def inverse(self) -> "TowerElem":
        return self.field.one() / self

    def __truediv__(self, o):
        try:
            o2 = self._other(o)
        except _Swap:
            return o.field.coerce(self) / o
        if o2 is NotImplemented:
            return NotImplemented
        return _divide(self, o2)

    def __rtruediv__(self, o):
        o2 = self._other(o)
        return _divide(o2, self)

    def coords(self):
        return self.field.top.coords(self.raw)

    def key(self):
        return self.field.top.key(self.raw)

    def __repr__(self):
        ring = self.field.ring
        cs = ", ".join(ring.show(c) for c in self.coords())
        return f"<{self.field.label()} [{cs}] +O({self.prec})>"


class _Swap(Exception):
    pass


def _divide(a: TowerElem, b: TowerElem) -> TowerElem:
    vb = b.valuation()
    if not vb.is_exact:
        raise PossibleZero(f"divisor is only known to have valuation >= {vb.N}")
    F = a.field
    k = int(vb.v * F.e)
    va = a.valuation()
    if va.bound < vb.v:
        raise ValueError("quotient is not integral")
    num = F.top.div_pi
    ra, rb = a.raw, b.raw
    for _ in range(k):
        ra, rb = num(ra), num(rb)
    u = F.top.inv_unit(rb)
    if va.is_exact:
        rel = min(a.prec - va.v, b.prec - vb.v)
        prec = va.v - vb.v + rel
    else:
        prec = a.prec - vb.v
    prec = min(prec, F.N - vb.v)
    return TowerElem(F, F.top.mul(ra, u), prec)


# ---------------------------------------------------------------- polynomials

def poly_eval(F: TowerField, coeffs: Sequence, x):
    """Horner on raw values; coeffs low-to-high, raw in F's top floor."""
    top = F.top
    acc = top.zero
    for c in reversed(coeffs):
        acc = top.add(top.mul(acc, x), c)
    return acc


def taylor_coeffs(F: TowerField, coeffs: Sequence, x) -> list:
    """Raw values P_j(x) with P(x + y) = sum_j P_j(x) y^j."""
    top = F.top
    work = list(coeffs)
    out = []
    d = len(work) - 1
    for j in range(d + 1):
        acc = top.zero
        nxt = []
        for c in reversed(work):
            acc = top.add(top.mul(acc, x), c)
            nxt.append(acc)
        out.append(nxt[-1])
        # quotient of the synthetic division, high-to-low -> low-to-high
        work = list(reversed(nxt[:-1]))
    return out


def lift_poly(F: TowerField, P: Sequence, level: int = 0) -> list:
    return [F.lift(c, level) for c in P]


def elem_poly_eval(P: Sequence[TowerElem], x: TowerElem) -> TowerElem:
    acc = x.field.zero()
    for c in reversed(P):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------- Newton polygons

@dataclass(frozen=True)
class NewtonPolygon:
    segments: tuple  # ((root valuation, multiplicity), ...), root valuations decreasing
    zero_roots: int = 0

    def root_valuations(self) -> list[Fraction]:
        out = []
        for rv, mult in self.segments:
            out.extend([rv] * mult)
        return sorted(out)

    @property
    def total(self):
        return sum(m for _, m in self.segments)


def newton_polygon(vals: Sequence[ValResult], ceiling=None) -> NewtonPolygon:
    """Lower hull of (j, v_j); vals are ValResults for coefficients 0..d."""
    d = len(vals) - 1
    if not vals[d].is_exact:
        raise InsufficientPrecision(vals[d].N, "leading coefficient not certified")
    lead = 0
    while lead < d and not vals[lead].is_exact:
        if ceiling is None or vals[lead].N < ceiling:
            raise InsufficientPrecision(vals[lead].N, "low coefficient uncertified below ceiling")
        lead += 1
    pts = [(j, vals[j].v) for j in range(lead, d + 1) if vals[j].is_exact]
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    # an uncertified point counts only if its lower bound is strictly above the hull
    for j in range(lead, d + 1):
        if vals[j].is_exact:
            continue
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 < j < x2:
                line = y1 + (y2 - y1) * Fraction(j - x1, x2 - x1)
                if vals[j].N <= line and (ceiling is None or vals[j].N < ceiling):
                    raise InsufficientPrecision(vals[j].N, f"coefficient {j} may lie on the hull")
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (x2 - x1)
        segs.append((-slope, x2 - x1))
    return NewtonPolygon(tuple(segs), lead)


def poly_newton_polygon(F: TowerField, P: Sequence, ceiling=None) -> NewtonPolygon:
    """Newton polygon of a polynomial with raw coefficients in F (precision N)."""
    vals = []
    for c in P:
        v = F.raw_val(c)
        vals.append(AtLeast(F.N) if v is None else Exact(v))
    return newton_polygon(vals, ceiling)
