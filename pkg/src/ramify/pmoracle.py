"""Fontaine's lifting property for a monogenic L/K against explicit test fields E.

Homomorphisms O_L = O_K[x]/(P) -> O_E/a^m are the classes beta mod a^m with
v_K(P(beta)) >= m, and K-embeddings L -> E are the roots of P in E.  So a
counterexample at m is an E with no root of P and max_beta v_K(P(beta)) >= m.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .galois import (Extension, _refine, count_in_disc, find_roots, shifted_vals)
from .localfield import (Eisenstein, GroundField, InsufficientPrecision, TowerElem, TowerField,
                         Unramified, poly_eval)


class EnumerationTooLarge(Exception):
    def __init__(self, size, where=""):
        super().__init__(f"enumeration of {size} classes exceeds the cap{(' for ' + where) if where else ''}")
        self.size = size


# ---------------------------------------------------------------- test fields

@dataclass(frozen=True)
class TestField:
    """A test field E given as a literal tower over the ground of L."""
    name: str
    ground: GroundField
    steps: tuple
    kind: str  # base | sub | twist | perturb
    twist_index: int = 1  # e' of the twist this member is built over

    def field(self, prec) -> TowerField:
        return TowerField(self.ground, self.steps, prec)

    def describe(self):
        return {"name": self.name, "kind": self.kind, "steps": [s.describe() for s in self.steps]}


@dataclass(frozen=True)
class QuotientTarget:
    E: TowerField
    m: Fraction

    @property
    def cut(self) -> int:
        """Least j with j/e_E >= m: classes mod a^m are digit strings of length cut."""
        return max(0, math.ceil(self.m * self.E.e))

    @property
    def size(self) -> int:
        return self.E.q ** self.cut


# ---------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class TrueByExhaustion:
    scanned: int  # classes examined (tree leaves in smart mode)
    embedding: bool  # True when some root of P lies in E
    max_val: object = None  # max v(P(beta)) when no embedding exists

    holds = True


@dataclass(frozen=True)
class TrueByBound:
    m: Fraction
    u: Fraction

    holds = True


@dataclass(frozen=True)
class Counterexample:
    witness: TowerElem
    v_P: Fraction
    no_embedding: dict  # record of the exhaustive root search in E

    holds = False


# ---------------------------------------------------------------- smart mode

@dataclass
class DepthSearch:
    """Outcome of the disc search for max_{beta in O_E} v_K(P(beta))."""
    root: TowerElem | None  # a root of P in E, if any
    max_val: Fraction | None
    witness: TowerElem | None
    leaves: int
    max_depth: int


def _depth_cap(E: TowerField) -> int:
    return int(E.N * E.e) // 2


def max_valuation(P_raw: Sequence, E: TowerField) -> DepthSearch:
    """Disc search: a disc holding no root of P has constant v(P) = v(q_0); one
    holding exactly one root contains a root in E (the disc is E-rational)."""
    reps = E.residue_reps()
    stack = [(E.top.zero, 0)]
    best, best_beta, leaves, deepest = None, None, 0, 0
    while stack:
        beta, k = stack.pop()
        vals = shifted_vals(E, P_raw, beta, k)
        n = count_in_disc(vals)
        deepest = max(deepest, k)
        if n == 0:
            leaves += 1
            v = vals[0].v
            if best is None or v > best:
                best, best_beta = v, beta
            continue
        if n == 1:
            root = _refine(P_raw, E, beta, k)
            return DepthSearch(root, None, None, leaves, deepest)
        if k >= _depth_cap(E):
            raise InsufficientPrecision(E.N * 2, "roots of P not separated from E")
        pk = E.top.pow(E.top.pi, k)
        for r in reps:
            stack.append((E.top.add(beta, E.top.mul(pk, r)), k + 1))
    return DepthSearch(None, best, E.elem(best_beta), leaves, deepest)


# ---------------------------------------------------------------- root fields

LITERAL_DIGITS = 16  # perturbed towers are frozen to this many ground digits


class RootFieldFailure(Exception):
    pass


def _literal(F: TowerField, floor_index: int, raw, digits: int = LITERAL_DIGITS):
    """Portable literal of a raw value living on floor ``floor_index``."""
    ring = F.ring
    coords = F.floors[floor_index].coords(raw)
    out = []
    for c in coords:
        if ring.kind == "padic":
            mod = ring.p ** digits
            c = c % mod
            out.append(c - mod if c > mod // 2 else c)
        else:
            out.append(list(ring.key(c))[:digits])
    return out[0] if floor_index == 0 else out


def _poly_divmod(a: list, b: list):
    """Quotient and remainder of a by monic b (TowerElem coefficients, low-to-high)."""
    a = list(a)
    n = len(b) - 1
    quot = [None] * max(len(a) - n, 1)
    for k in range(len(a) - 1, n - 1, -1):
        c = a[k]
        quot[k - n] = c
        for i in range(n + 1):
            a[k - n + i] = a[k - n + i] - c * b[i]
    zero = b[0].field.zero()
    return [q if q is not None else zero for q in quot], a[:n]


def cluster_factor(S: list, n: int, max_iter: int = 4000) -> list:
    """Monic factor of S (TowerElems) whose roots are the n roots with v(y) >= 0.

    Needs the last minimal coefficient valuation of S at index n.  S/S_n reduces
    to a monic degree-n polynomial times 1, so A <- A + (S mod A) converges.
    """
    lead = S[n]
    s = [c / lead for c in S]
    d = len(s) - 1
    if n == d:
        return s
    A = s[:n] + [s[0].field.one()]
    for _ in range(max_iter):
        _, R = _poly_divmod(s, A)
        if all(r.is_zero() for r in R):
            return A
        A = [a + r for a, r in zip(A[:n], R)] + [A[n]]
    raise InsufficientPrecision(None, "cluster factor iteration did not settle")


def _unram_modulus(F: TowerField, r: int):
    from .exactmath import BUILTIN_MODULI
    if math.gcd(r, F.f) != 1:
        return None
    return BUILTIN_MODULI.get((F.p, r))


def _terminal_cluster(Q_raw, F: TowerField):
    """Depth-first search for a root of Q in F or the first disc holding >= 2
    roots none of whose children hold any.  Returns ('root', x) or ('cluster', beta, k, n)."""
    reps = F.residue_reps()
    stack = [(F.top.zero, 0)]
    while stack:
        beta, k = stack.pop()
        n = count_in_disc(shifted_vals(F, Q_raw, beta, k))
        if n == 0:
            continue
        if n == 1:
            return ("root", _refine(Q_raw, F, beta, k))
        if k >= _depth_cap(F):
            raise InsufficientPrecision(F.N * 2, "cluster not resolved")
        pk = F.top.pow(F.top.pi, k)
        kids = [(F.top.add(beta, F.top.mul(pk, r)), k + 1) for r in reps]
        if all(count_in_disc(shifted_vals(F, Q_raw, b, kk)) == 0 for b, kk in kids):
            return ("cluster", beta, k, n)
        stack.extend(reversed(kids))
    return ("none",)


def root_field_steps(F: TowerField, Q_raw: Sequence, max_degree: int = 32, rounds: int = 6) -> tuple:
    """Extra tower steps over F after which Q (raw coefficients in F) has a root.

    Each round locates a terminal root cluster of Q and adjoins either the
    residue extension its unit roots need or an Eisenstein polynomial for the
    cluster itself.  Raises RootFieldFailure for shapes outside that ladder.
    """
    from .localfield import newton_polygon
    from .localfield import taylor_coeffs as _taylor
    steps = []
    cur = F
    Q = list(Q_raw)
    for _ in range(rounds):
        hit = _terminal_cluster(Q, cur)
        if hit[0] == "root":
            return tuple(steps)
        if hit[0] == "none":
            raise RootFieldFailure("no root of the polynomial in the ring of integers")
        _, beta, k, n = hit
        top = cur.top
        pk = top.pow(top.pi, k)
        S, scale = [], top.one
        for c in _taylor(cur, Q, beta):
            S.append(cur.elem(top.mul(c, scale)))
            scale = top.mul(scale, pk)
        A = cluster_factor(S, n)
        # a residue root shared by all cluster roots sits at fractional distance:
        # recentre there so every root has valuation strictly inside (0, 1)
        for x in cur.residue_reps():
            if _eval_elems(A, cur.elem(x)).valuation().bound > 0:
                A = [cur.elem(c, min(a.prec for a in A)) for c in _taylor(cur, [a.raw for a in A], x)]
                break
        np_ = newton_polygon([a.valuation() for a in A])
        slopes = sorted({rv * cur.e for rv, _ in np_.segments})
        if slopes == [0]:
            # unit roots whose residues live in a proper extension of the residue field
            step = _residue_step(cur, A)
        elif len(slopes) == 1 and slopes[0] * n in (1, n - 1):
            step = _exact_eisenstein(cur, A, n, slopes[0])
        else:
            step = _segment_step(cur, A, slopes[-1])
        if step is None:
            raise RootFieldFailure(f"cluster shape {[str(x) for x in slopes]} with {n} roots not handled")
        steps.append(step)
        nxt = cur.extend(step)
        if nxt.degree > max_degree:
            raise RootFieldFailure("root field exceeds the degree budget")
        Q = [nxt.lift(c, len(cur.floors) - 1) for c in Q]
        cur = nxt
    raise RootFieldFailure("root field ladder did not finish")


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


def _eval_elems(P, x):
    acc = x.field.zero()
    for c in reversed(P):
        acc = acc * x + c
    return acc


def _has_residue_root(F: TowerField, R) -> bool:
    return any(_eval_elems(R, F.elem(x)).valuation().bound > 0 for x in F.residue_reps()
               if not F.top.is_zero(x))


def _lift_elems(F: TowerField, src: TowerField, R):
    lev = len(src.floors) - 1
    return [F.elem(F.lift(c.raw, lev), c.prec) for c in R]


def _residue_step(F: TowerField, R):
    """Smallest constructible unramified step over which R acquires a residue root."""
    for r in range(2, 5):
        mod = _unram_modulus(F, r)
        if mod is None:
            continue
        st = Unramified(r, tuple(mod))
        trial = F.extend(st)
        if _has_residue_root(trial, _lift_elems(trial, F, R)):
            return st
    return None


def _check_literal_precision(coeffs):
    for c in coeffs:
        if c.prec < LITERAL_DIGITS:
            raise InsufficientPrecision(None, "cluster data known too coarsely to freeze")


def _exact_eisenstein(F: TowerField, A, n, slope):
    """A itself (slope 1/n) or its reversal in pi/y (slope (n-1)/n) is Eisenstein."""
    if slope * n == 1:
        coeffs = A
    else:
        a0 = A[0]
        pie = F.uniformizer()
        coeffs = [A[n - j] * pie ** (n - j) / a0 for j in range(n + 1)]
    _check_literal_precision(coeffs[:-1])
    lev = len(F.floors) - 1
    return Eisenstein(tuple(_freeze(_literal(F, lev, c.raw)) for c in coeffs[:-1]) + (1,))


def _segment_step(F: TowerField, A, slope):
    """Adjoin x^n' + pi*x - pi*rho for the segment of root valuation h'/n' with h' = 1,
    rho a lift of a root of its residual polynomial.  For h' > 1 adjoin an n'-th
    root of a uniformizer first (rho = 1); the next round sees integral valuations."""
    slope = Fraction(slope)
    h, n1 = slope.numerator, slope.denominator
    lev = len(F.floors) - 1
    pi_lit = _freeze(_literal(F, lev, F.top.pi))
    if h != 1:
        c0 = _freeze(_literal(F, lev, F.top.neg(F.top.pi)))
        return Eisenstein((c0, pi_lit) + tuple([0] * (n1 - 2)) + (1,))
    pie = F.uniformizer()
    vals = [a.valuation() for a in A]
    # points of the segment: v(A_j) + j*slope constant and minimal
    height = min(v.bound * F.e + j * slope for j, v in enumerate(vals))
    idx = [j for j, v in enumerate(vals) if v.is_exact and v.v * F.e + j * slope == height]
    j0 = idx[0]
    R = []
    for i in range((idx[-1] - j0) // n1 + 1):
        j = j0 + i * n1
        shift = height - j * slope  # integral at points on the segment
        c = A[j]
        R.append(c / pie ** int(shift) if shift.denominator == 1 and not c.is_zero() else F.zero())
    rho = None
    for x in F.residue_reps():
        if not F.top.is_zero(x) and _eval_elems(R, F.elem(x)).valuation().bound > 0:
            rho = x
            break
    if rho is None:
        return _residue_step(F, R)
    c0 = _freeze(_literal(F, lev, F.top.neg(F.top.mul(F.top.pi, rho))))
    return Eisenstein((c0, pi_lit) + tuple([0] * (n1 - 2)) + (1,))


# ---------------------------------------------------------------- catalog

@dataclass(frozen=True)
class CatalogConfig:
    e_max: int = 4  # largest twist index e'
    units: tuple = ("1", "-1", "1+pi")
    perturb_den: int = 4  # denominators of the perturbation levels v_K(c)
    perturb_window: Fraction = Fraction(1)  # levels range over [u - window, u)
    limit: int = 64


def _unit_raw(F: TowerField, name: str):
    top = F.top
    if name == "1":
        return top.one
    if name == "-1":
        return top.neg(top.one)
    if name == "1+pi":
        return top.add(top.one, F.lift_ground(F.ring.pi))
    raise ValueError(f"unknown unit multiplier {name!r}")


def _ground_lit(F: TowerField, raw_ground):
    return _freeze(_literal(F, 0, raw_ground))


def twist_step(K0: TowerField, e1: int, unit: str) -> Eisenstein:
    """x^e' - w*pi_K over K0, or x^e' + pi_K*x - w*pi_K when p | e' in characteristic p
    (the pure radical would be inseparable there)."""
    lev = len(K0.floors) - 1
    ring = K0.ring
    wpi = K0.top.mul(_unit_raw(K0, unit), K0.lift_ground(ring.pi))
    c0 = _freeze(_literal(K0, lev, K0.top.neg(wpi)))
    if ring.kind == "laurent" and e1 % ring.p == 0:
        c1 = _freeze(_literal(K0, lev, K0.lift_ground(ring.pi)))
        return Eisenstein((c0, c1) + tuple([0] * (e1 - 2)) + (1,))
    return Eisenstein((c0,) + tuple([0] * (e1 - 1)) + (1,))


def relative_twist_step(M: TowerField, e1: int, unit: str) -> Eisenstein:
    """x^e' - w*pi_M over M (pi_M the top uniformizer), separable form when p | e'."""
    lev = len(M.floors) - 1
    wpi = M.top.mul(_unit_raw(M, unit), M.top.pi)
    c0 = _freeze(_literal(M, lev, M.top.neg(wpi)))
    if M.ring.kind == "laurent" and e1 % M.p == 0:
        c1 = _freeze(_literal(M, lev, M.top.pi))
        return Eisenstein((c0, c1) + tuple([0] * (e1 - 2)) + (1,))
    return Eisenstein((c0,) + tuple([0] * (e1 - 1)) + (1,))


def relative_polynomial(ext: Extension):
    """(M steps, raw coefficients over M) of the minimal polynomial of alpha over the
    penultimate floor M, when the last step is Eisenstein and alpha = pi_L + integer."""
    from .localfield import taylor_coeffs
    steps = ext.spec.steps
    if len(steps) < 2 or not isinstance(steps[-1], Eisenstein):
        return None
    L = ext.field
    shift = ext.spec.generator if isinstance(ext.spec.generator, int) else 0
    if not (ext.alpha - L.uniformizer() - shift).is_zero():
        return None
    M = TowerField(ext.spec.ground, steps[:-1], L.prec)
    g = [M.top.from_int(c) if isinstance(c, int) else M.top.parse(list(c) if isinstance(c, tuple) else c)
         for c in steps[-1].coeffs]
    return steps[:-1], taylor_coeffs(M, g, M.top.from_int(-shift))


def _unramified_base(ext: Extension) -> tuple:
    """Leading unramified steps of L: its maximal unramified subextension K0."""
    out = []
    for st in ext.spec.steps:
        if not isinstance(st, Unramified):
            break
        out.append(st)
    return tuple(out)


def subfield_tests(ext: Extension, lattice, prec: int) -> list[TestField]:
    K = TowerField(ext.spec.ground, (), prec)
    out = []
    for i, sf in enumerate(lattice):
        if sf.degree in (1, ext.degree) or sf.minpoly is None:
            continue
        Q = [K.top.parse(c) if K.ring.kind == "laurent" else K.top.from_int(c) for c in sf.minpoly]
        try:
            steps = root_field_steps(K, Q)
        except RootFieldFailure:
            continue
        tag = "n" if sf.normal else "x"
        out.append(TestField(f"sub:{i}:{tag}{sf.degree}", ext.spec.ground, steps, "sub"))
    return out


def build_catalog(ext: Extension, u, lattice=None, cfg: CatalogConfig = CatalogConfig(),
                  prec: int | None = None) -> tuple[list[TestField], list[dict]]:
    """Test fields: K, subfields of L, twists K0(w pi^(1/e')), and root fields of
    P + c over the e'_max twists.  Returns (catalog, skipped-with-reason)."""
    prec = prec or ext.field.prec
    ground = ext.spec.ground
    base = _unramified_base(ext)
    K0 = TowerField(ground, base, prec)
    cat: list[TestField] = [TestField("K", ground, (), "base")]
    if base:
        cat.append(TestField("K0", ground, base, "base"))
    skipped = []
    if lattice is not None:
        cat.extend(subfield_tests(ext, lattice, prec))
    twists = []
    for e1 in range(2, cfg.e_max + 1):
        for w in cfg.units:
            st = twist_step(K0, e1, w)
            t = TestField(f"twist:e={e1}:w={w}", ground, base + (st,), "twist", e1)
            twists.append(t)
    cat.extend(twists)
    # perturbations P + pi'^j over the deepest twists
    if u is not None and u != float("-inf") and u > 0:
        e1 = cfg.e_max
        levels = [Fraction(j, e1) for j in range(1, int(u * e1) + 1)
                  if u - cfg.perturb_window <= Fraction(j, e1) < u
                  and Fraction(j, e1).denominator <= cfg.perturb_den]
        for t in twists:
            if t.twist_index != e1:
                continue
            Kp = t.field(prec)
            for lev in levels:
                j = int(lev * e1)
                Q = [Kp.lift_ground(c) for c in ext.P]
                Q[0] = Kp.top.add(Q[0], Kp.top.pow(Kp.top.pi, j))
                name = f"perturb:{t.name[6:]}:v={lev.numerator}/{lev.denominator}"
                try:
                    extra = root_field_steps(Kp, Q)
                except (RootFieldFailure, InsufficientPrecision) as exc:
                    skipped.append({"name": name, "reason": str(exc)})
                    continue
                cat.append(TestField(name, ground, t.steps + extra, "perturb", e1))
    # the same over the penultimate floor M of L, perturbing the relative polynomial
    rel = relative_polynomial(ext) if u not in (None, float("-inf")) and u > 0 else None
    if rel is not None and TowerField(ground, rel[0], prec).e > 1:
        msteps, g = rel
        M = TowerField(ground, msteps, prec)
        e1 = cfg.e_max
        for w in cfg.units:
            st = relative_twist_step(M, e1, w)
            Mp = M.extend(st)
            for j in range(1, int(u * Mp.e) + 1):
                lev = Fraction(j, Mp.e)
                if not (u - cfg.perturb_window <= lev < u and lev.denominator <= cfg.perturb_den):
                    continue
                Q = [Mp.lift(c, len(M.floors) - 1) for c in g]
                Q[0] = Mp.top.add(Q[0], Mp.top.pow(Mp.top.pi, j))
                name = f"relperturb:e={e1}:w={w}:v={lev.numerator}/{lev.denominator}"
                try:
                    extra = root_field_steps(Mp, Q)
                except (RootFieldFailure, InsufficientPrecision) as exc:
                    skipped.append({"name": name, "reason": str(exc)})
                    continue
                cat.append(TestField(name, ground, msteps + (st,) + extra, "perturb", e1))
    seen, uniq = set(), []
    for t in cat:
        if t.steps in seen:
            continue
        seen.add(t.steps)
        uniq.append(t)
    if len(uniq) > cfg.limit:
        skipped.extend({"name": t.name, "reason": "catalog limit"} for t in uniq[cfg.limit:])
        uniq = uniq[:cfg.limit]
    return uniq, skipped


# ---------------------------------------------------------------- verdicts

def P_raw(ext: Extension, E: TowerField):
    return [c.raw if isinstance(c, TowerElem) else c for c in ext.P_in(E)]


@dataclass
class FieldScan:
    """max_beta v(P(beta)) over one test field, computed once and reused per m."""
    test: TestField
    E: TowerField
    search: DepthSearch

    @property
    def embeds(self):
        return self.search.root is not None


def scan_field(ext: Extension, test: TestField, prec: int | None = None) -> FieldScan:
    E = test.field(prec or ext.field.prec)
    return FieldScan(test, E, max_valuation(P_raw(ext, E), E))


def verdict_from_scan(fs: FieldScan, m) -> object:
    m = Fraction(m)
    s = fs.search
    if s.root is not None:
        return TrueByExhaustion(s.leaves, True)
    if s.max_val >= m:
        record = {"field": fs.test.name, "roots_in_E": 0, "leaves": s.leaves, "depth": s.max_depth}
        return Counterexample(s.witness, s.max_val, record)
    return TrueByExhaustion(s.leaves, False, s.max_val)


def pm_verdict(ext: Extension, test: TestField, m, u=None, mode: str = "smart", cap: int = 10 ** 7):
    """(Pm) for L/K against one test field.  The bound shortcut is taken only for m > u."""
    m = Fraction(m)
    if u is not None and u != float("-inf") and m > u:
        return TrueByBound(m, u)
    if mode == "smart":
        return verdict_from_scan(scan_field(ext, test), m)
    E = test.field(ext.field.prec)
    roots = find_roots(P_raw(ext, E), E)
    wit = hom_witnesses(ext, QuotientTarget(E, m), cap)
    if roots or not wit:
        return TrueByExhaustion(QuotientTarget(E, m).size, bool(roots))
    best = max(wit, key=lambda b: _val_of_P(ext, E, b))
    return Counterexample(best, Fraction(m), {"field": test.name, "roots_in_E": 0, "classes": len(wit)})


# ---------------------------------------------------------------- brute mode

def _val_of_P(ext, E, beta: TowerElem):
    acc = poly_eval(E, P_raw(ext, E), beta.raw)
    v = E.raw_val(acc)
    return E.N if v is None else v


def class_reps(E: TowerField, digits: int):
    """All sums sum_{i<digits} r_i pi_E^i with r_i residue representatives."""
    top = E.top
    reps = E.residue_reps()
    pows = [top.one]
    for _ in range(max(digits - 1, 0)):
        pows.append(top.mul(pows[-1], top.pi))
    scaled = [[top.mul(pw, r) for r in reps] for pw in pows[:digits]]
    for combo in itertools.product(*scaled):
        acc = top.zero
        for x in combo:
            acc = top.add(acc, x)
        yield acc


def hom_witnesses(ext: Extension, target: QuotientTarget, cap: int = 10 ** 7) -> list[TowerElem]:
    """Every class beta mod a^m of O_E with v_K(P(beta)) >= m, by plain enumeration."""
    E, m = target.E, target.m
    if target.size > cap:
        raise EnumerationTooLarge(target.size, f"{E.label()} at m={m}")
    P = P_raw(ext, E)
    out = []
    for b in class_reps(E, target.cut):
        v = E.raw_val(poly_eval(E, P, b))
        if v is None or v >= m:
            out.append(E.elem(b, Fraction(target.cut, E.e)))
    return out


def brute_capped_max(ext: Extension, E: TowerField, digits: int, cap: int = 10 ** 5) -> Fraction:
    """max over beta mod pi_E^digits of min(v(P(beta)), digits/e_E) (well defined on classes)."""
    size = E.q ** digits
    if size > cap:
        raise EnumerationTooLarge(size, E.label())
    ceiling = Fraction(digits, E.e)
    P = P_raw(ext, E)
    best = Fraction(0)
    for b in class_reps(E, digits):
        v = E.raw_val(poly_eval(E, P, b))
        v = ceiling if v is None else min(v, ceiling)
        if v > best:
            best = v
            if best == ceiling:
                break
    return best


# ---------------------------------------------------------------- aggregation

@dataclass
class ScanReport:
    u: object
    grid: list
    fields: list  # FieldScan
    rows: list  # per m: dict
    lower_bound: object
    best_twist: int
    sound: bool
    violations: list
    skipped: list = field(default_factory=list)


def m_grid(u, max_den: int = 4, span: Fraction = Fraction(2)):
    from .exactmath import farey_grid
    top = (u if u not in (None, float("-inf")) and u > 0 else Fraction(0)) + span
    return farey_grid(max_den, 0, top)


def pm_scan(ext: Extension, catalog: Sequence[TestField], u, grid=None, prec: int | None = None,
            skipped=()) -> ScanReport:
    """Run every test field once, then read off verdicts on the whole m grid."""
    grid = list(grid if grid is not None else m_grid(u))
    scans = [scan_field(ext, t, prec) for t in catalog]
    rows = []
    lower = None
    best_e = 1
    for m in grid:
        hits = [fs for fs in scans if not fs.embeds and fs.search.max_val >= m]
        if hits:
            # deterministic pick: catalog order
            fs = hits[0]
            rows.append({"m": m, "verdict": "counterexample", "field": fs.test.name,
                         "v_P": fs.search.max_val, "witness": fs.search.witness})
            if lower is None or m > lower:
                lower = m
                best_e = max(fs.test.twist_index for fs in hits)
        else:
            rows.append({"m": m, "verdict": "true", "field": None, "v_P": None, "witness": None})
    viol = []
    for fs in scans:
        if not fs.embeds and u not in (None, float("-inf")) and fs.search.max_val > u:
            viol.append({"field": fs.test.name, "max_val": fs.search.max_val})
    return ScanReport(u, grid, scans, rows, lower, best_e, not viol, viol, list(skipped))


def m_lower_bound(ext, catalog, grid, u=None):
    return pm_scan(ext, catalog, u, grid).lower_bound


def soundness_scan(ext: Extension, catalog: Sequence[TestField], u) -> dict:
    """Every non-embedding test field must satisfy max_beta v(P(beta)) <= u."""
    rows = []
    ok = True
    for t in catalog:
        fs = scan_field(ext, t)
        if fs.embeds:
            rows.append({"field": t.name, "embeds": True})
            continue
        good = fs.search.max_val <= u
        ok &= good
        rows.append({"field": t.name, "embeds": False, "max_val": fs.search.max_val, "ok": good})
    return {"passes": ok, "rows": rows}


def fontaine_window_check(report: ScanReport, degree: int, i_max, e_L: int) -> dict:
    """lower bound in [u - 1/e', u] for the deepest twist that produced it, below the
    crude degree bound d * i_max, and above u - 1/e_L (Fontaine's necessary condition)."""
    u = report.u
    lb = report.lower_bound
    if u in (None, float("-inf")):
        return {"vacuous": True, "passes": True}
    if lb is None:
        # no counterexample on the grid: only consistent for unramified L/K
        return {"vacuous": False, "passes": u <= 0, "lower_bound": None}
    e1 = report.best_twist
    window = (u - Fraction(1, e1), u)
    crude = degree * i_max
    res = {
        "vacuous": False,
        "lower_bound": lb,
        "window": window,
        "twist_index": e1,
        "in_window": window[0] <= lb <= window[1],
        "below_crude": lb <= crude,
    }
    res["passes"] = res["in_window"] and res["below_crude"]
    return res


# ---------------------------------------------------------------- base change, composites

def factor_over(G, H, root_index: int):
    """Coefficients (TowerElems of L) of prod_{h in H} (x - h(z)) for z = roots[root_index]."""
    from .galois import _poly_from_roots
    z = G.roots[root_index]
    return _poly_from_roots([G.apply(h, z) for h in sorted(H)])


def transport_witness(G, H, scan: FieldScan, m) -> dict:
    """Unramified base change K -> K0 = L^H: a counterexample witness beta in a test
    field E containing K0 still has v(P0(beta)) >= m for the K0-factor P0 of P through
    the root nearest beta, and E has no root of P0 since it has none of P."""
    E = scan.E
    beta = scan.search.witness
    L = G.ext.field
    k0 = len(_unramified_base(G.ext))
    if E.steps[:k0] != L.steps[:k0]:
        raise ValueError("test field does not contain K0")
    above = len(L.steps) - k0
    best = None
    for i in range(G.order):
        coeffs = factor_over(G, H, i)
        Pe = []
        for c in coeffs:
            raw = c.raw
            for _ in range(above):
                raw = raw[0]
            Pe.append(E.elem(E.lift(raw, k0), c.prec))
        val = _eval_elems(Pe, beta).valuation().bound
        if best is None or val > best[0]:
            best = (val, i)
    return {"v_factor": best[0], "root": best[1], "holds": best[0] >= m and not scan.embeds}
