"""Herbrand functions, breaks, disc covers, conductor and Krasner certificates.

Indices follow v_K normalisation: i(s) = v_K(s(alpha) - alpha), the lower
filtration is {s : i(s) >= t}, f(u) is the integral of #G_(t) from 0 to u,
and the upper group at u is {s : f(i(s)) >= u}, which is the classical
upper group at u - 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath import PLFunction
from .galois import GaloisGroup, RamProfile
from .localfield import (InsufficientPrecision, TowerElem, TowerField, eisenstein)

NEG_INF = float("-inf")  # break of the trivial extension K/K


def herbrand(profile: RamProfile) -> tuple[PLFunction, PLFunction]:
    """f and its inverse from the multiset of conjugate-difference valuations."""
    pos = sorted(x for x in profile.diffs if x > 0)
    pieces = []
    prev = Fraction(0)
    for b in sorted(set(pos)):
        slope = 1 + sum(1 for x in pos if x >= b)
        pieces.append((b - prev, slope))
        prev = b
    f = PLFunction.from_slopes(pieces, 1)
    return f, f.invert()


@dataclass(frozen=True)
class Breaks:
    i_max: object  # Fraction or NEG_INF
    u_max: object
    lower_breaks: tuple
    upper_breaks: tuple
    f: PLFunction
    p_inv: PLFunction

    def upper_of(self, i) -> Fraction:
        return self.f(i)


def breaks(profile: RamProfile) -> Breaks:
    f, g = herbrand(profile)
    if not profile.diffs:
        return Breaks(NEG_INF, NEG_INF, (), (), f, g)
    lower = tuple(sorted(profile.diffs))
    upper = tuple(f(x) for x in lower)
    i_max = max(lower)
    return Breaks(i_max, f(i_max), lower, upper, f, g)


def lower_filtration(profile: RamProfile) -> list[tuple[Fraction, int]]:
    """Step function t -> #G_(t) as (threshold, order): order holds on (prev, threshold]."""
    out = []
    for b in sorted(set(profile.diffs)):
        out.append((b, 1 + sum(1 for x in profile.diffs if x >= b)))
    return out


def serre_convention(br: Breaks, e: int) -> dict:
    """Classical numbering: lower break e*i - 1, upper break u - 1."""
    return {
        "lower": [e * x - 1 for x in br.lower_breaks],
        "upper": [u - 1 for u in br.upper_breaks],
    }


# ---------------------------------------------------------------- discs

def pairwise_valuations(roots: Sequence[TowerElem]) -> dict:
    out = {}
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            v = (roots[i] - roots[j]).valuation()
            if not v.is_exact:
                raise InsufficientPrecision(None, "roots not separated")
            out[(i, j)] = v.v
    return out


@dataclass(frozen=True)
class DiscCover:
    m: Fraction
    radius: Fraction  # p_inv(m): discs are {x : v(x - z_i) >= radius}
    components: tuple
    qpp_holds: bool
    q_holds: object = None  # filled by the sampled check when requested


def _components(n, pairs: dict, radius) -> tuple:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j), v in pairs.items():
        if v >= radius:
            parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(sorted(tuple(g) for g in groups.values()))


def disc_cover(n_roots: int, pairs: dict, br: Breaks, m) -> DiscCover:
    m = Fraction(m)
    if m < 0:
        raise ValueError("m must be non-negative")
    r = br.p_inv(m)
    comps = _components(n_roots, pairs, r)
    return DiscCover(m, r, comps, all(len(c) == 1 for c in comps))


def conductor(n_roots: int, pairs: dict, br: Breaks) -> object:
    """inf{m : the discs of radius p_inv(m) around the roots are disjoint}.

    Found from the disc side: locate the p_inv segment where the cover splits
    into singletons, then solve for the exact crossing inside it.
    """
    if n_roots <= 1:
        return NEG_INF
    g = br.p_inv
    knots = [Fraction(0)] + [x for x, _ in g.knots]
    holds = [disc_cover(n_roots, pairs, br, m).qpp_holds for m in knots]
    top = max(pairs.values())
    if holds[0]:
        return Fraction(0)
    # first knot where separation holds, or the open last piece
    k = next((i for i, h in enumerate(holds) if h), None)
    a = knots[k - 1] if k is not None else knots[-1]
    slope = g.slope_at(a)
    # on this piece g(m) = g(a) + (m - a) * slope; separation needs g(m) > top
    c = a + (top - g(a)) / slope
    assert not disc_cover(n_roots, pairs, br, c).qpp_holds
    assert disc_cover(n_roots, pairs, br, c + Fraction(1, 1000)).qpp_holds
    return c


# ---------------------------------------------------------------- point checks

def fontaine_identity_check(P: Sequence[TowerElem], beta: TowerElem, roots: Sequence[TowerElem], br: Breaks):
    """(v(P(beta)), f(max_i v(z_i - beta))); None entries mark uncertified sides."""
    acc = beta.field.zero()
    for c in reversed(P):
        acc = acc * beta + c
    lhs = acc.valuation()
    dists = [(z - beta).valuation() for z in roots]
    if not lhs.is_exact or not all(d.is_exact for d in dists):
        return None, None
    return lhs.v, br.f(max(d.v for d in dists))


def krasner_check(x: TowerElem, roots: Sequence[TowerElem]):
    """Index of a root z with v(x - z) > max_{z' != z} v(z - z'), else None."""
    for i, z in enumerate(roots):
        d = (x - z).valuation()
        sep = max(((z - w).val() for j, w in enumerate(roots) if j != i), default=NEG_INF)
        if d.bound > sep:
            return i
    return None


# ---------------------------------------------------------------- sampled (Q_m)

def aux_field(L: TowerField, k: int) -> TowerField:
    """L adjoined a root of y^k + pi_L*y + pi_L (Eisenstein, separable in every characteristic)."""
    if k == 1:
        return L
    pc = [L.ring.key(c) for c in L.uniformizer().coords()]
    step = eisenstein([pc, pc] + [0] * (k - 2) + [1])
    return L.extend(step)


def _aux_degree(L: TowerField, radius: Fraction) -> int:
    # doubled so the probe radius just below `radius` has an odd numerator
    # over e_T and therefore is never the distance between two roots in L
    return 2 * (radius * L.e).denominator


def sampled_q(P_ground, L: TowerField, roots: Sequence[TowerElem], br: Breaks, m, cache=None) -> tuple[bool, list]:
    """Direct check of (Q_m) by probing v(P) at points around every root.

    For each root z the boundary radius of the largest disc around z inside
    X^m = {x : v(P(x)) >= m} is located by sampling x = z + u*pi_T^j at the two
    radii bracketing p_inv(m); (Q_m) holds when no such disc contains a second root.
    Returns (holds, measured radii).
    """
    m = Fraction(m)
    target = br.p_inv(m)
    k = _aux_degree(L, target)
    cache = {} if cache is None else cache
    T = cache.get((id(L), k))
    if T is None:
        T = aux_field(L, k)
        cache[(id(L), k)] = T
    Pt = [T.elem(T.lift_ground(c)) for c in P_ground]
    zs = [T.coerce(z) for z in roots]
    j = int(target * T.e)
    pi = T.uniformizer()
    units = [T.elem(r) for r in T.residue_reps() if not T.top.is_zero(r)]

    def v_at(x):
        acc = T.zero()
        for c in reversed(Pt):
            acc = acc * x + c
        return acc.valuation().bound

    radii = []
    holds = True
    for i, z in enumerate(zs):
        inside = all(v_at(z + u * pi ** j) >= m for u in units)
        outside = j == 0 or any(v_at(z + u * pi ** (j - 1)) < m for u in units)
        if not (inside and outside):
            radii.append(None)
            holds = False
            continue
        rho = Fraction(j, T.e)
        radii.append(rho)
        for l, w in enumerate(zs):
            if l != i and (z - w).val() >= rho:
                holds = False
    return holds, radii
