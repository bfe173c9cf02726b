"""Monogenic Galois extensions: generators, minimal polynomials, roots, groups, subfields."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .localfield import (AtLeast, Eisenstein, Exact, GroundField, InsufficientPrecision,
                         NewtonPolygon, TowerElem, TowerField, Unramified, eisenstein,
                         newton_polygon, poly_eval, taylor_coeffs)


class NotGalois(Exception):
    def __init__(self, found, degree):
        super().__init__(f"only {found} of {degree} roots lie in the field")
        self.found, self.degree = found, degree


class GeneratorFailure(Exception):
    pass


# ---------------------------------------------------------------- linear algebra over O_K

def _residue_rank(ring, cols) -> int:
    """Rank over F_p of the residue matrix with the given columns."""
    p = ring.p
    rows = [[ring.residue(c[i]) for c in cols] for i in range(len(cols[0]))]
    rank, ncol = 0, len(cols)
    for j in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][j] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][j], -1, p)
        for i in range(len(rows)):
            if i != rank and rows[i][j] % p:
                c = rows[i][j] * inv
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def invert_matrix(ring, A):
    """Inverse of a square matrix over O_K / pi^N whose determinant is a unit."""
    n = len(A)
    M = [list(row) + [ring.one if i == j else ring.zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if ring.residue(M[r][col]) % ring.p), None)
        if piv is None:
            raise GeneratorFailure("matrix is singular mod the maximal ideal")
        M[col], M[piv] = M[piv], M[col]
        inv = ring.inv_unit(M[col][col])
        M[col] = [ring.mul(inv, x) for x in M[col]]
        for r in range(n):
            if r != col and not ring.is_zero(M[r][col]):
                c = M[r][col]
                M[r] = [ring.sub(x, ring.mul(c, y)) for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def mat_vec(ring, A, v):
    out = []
    for row in A:
        acc = ring.zero
        for a, b in zip(row, v):
            acc = ring.add(acc, ring.mul(a, b))
        out.append(acc)
    return out


# ---------------------------------------------------------------- extensions

@dataclass(frozen=True)
class ExtensionSpec:
    ground: GroundField
    steps: tuple
    name: str = ""
    generator: object = None  # None, int shift added to the uniformizer, or coordinate list
    galois_claimed: bool = True

    def field(self, prec) -> TowerField:
        return TowerField(self.ground, self.steps, prec)


@dataclass
class Extension:
    spec: ExtensionSpec
    field: TowerField
    alpha: TowerElem
    P: list  # raw ground coefficients, low-to-high, monic
    power_inverse: list  # inverse of the matrix whose columns are coords(alpha^j)

    @property
    def degree(self):
        return len(self.P) - 1

    @property
    def ring(self):
        return self.field.ring

    def P_signed(self):
        ring = self.ring
        if ring.kind == "padic":
            return [ring.signed(c) for c in self.P]
        return [ring.show(c) for c in self.P]

    def P_in(self, E: TowerField) -> list:
        ring = E.ring
        return [E.lift_ground(ring.parse(c) if ring.kind == "laurent" else ring.from_int(c))
                for c in self._portable_P()]

    def _portable_P(self):
        ring = self.ring
        if ring.kind == "padic":
            return [ring.signed(c) for c in self.P]
        return [list(ring.key(c)) for c in self.P]

    def alpha_coords(self, x: TowerElem) -> list:
        """Coefficients c_j in O_K with x = sum c_j alpha^j."""
        return mat_vec(self.ring, self.power_inverse, x.coords())


def _candidates(T: TowerField, spec: ExtensionSpec):
    pi = T.uniformizer()
    if spec.generator is not None:
        g = spec.generator
        yield pi + g if isinstance(g, int) else T(list(g))
        return
    om = T.unram_generator()
    yield pi
    yield om
    yield pi + om
    yield pi * om + om
    for c in range(1, 13):
        yield pi + om * c + om * om


def build_extension(spec: ExtensionSpec, prec: int = 32) -> Extension:
    """Pick alpha with O_L = O_K[alpha] (certified) and its minimal polynomial."""
    T = spec.field(prec)
    ring, d = T.ring, T.degree
    tried = 0
    for alpha in _candidates(T, spec):
        tried += 1
        if tried > 16:
            break
        powers = [T.one()]
        for _ in range(d):
            powers.append(powers[-1] * alpha)
        cols = [x.coords() for x in powers[:d]]
        if _residue_rank(ring, cols) < d:
            if spec.generator is not None:
                raise GeneratorFailure("designated generator does not generate the ring of integers "
                                       "(power basis is singular mod p)")
            continue
        A = [[cols[j][i] for j in range(d)] for i in range(d)]
        Ainv = invert_matrix(ring, A)
        c = mat_vec(ring, Ainv, powers[d].coords())
        P = [ring.neg(x) for x in c] + [ring.one]
        return Extension(spec, T, alpha, P, Ainv)
    raise GeneratorFailure(f"no certified generator after {tried - 1} candidates")


# ---------------------------------------------------------------- disc search

def shifted_vals(E: TowerField, Pe, beta, k: int):
    """Valuations of the coefficients of P(beta + pi_E^k y) as ValResults."""
    out = []
    for j, c in enumerate(taylor_coeffs(E, Pe, beta)):
        v = E.raw_val(c)
        shift = Fraction(j * k, E.e)
        out.append(AtLeast(E.N + shift) if v is None else Exact(v + shift))
    return out


def count_in_disc(vals) -> int:
    """Number of roots (in an algebraic closure) of sum q_j y^j with v(y) >= 0."""
    exact = [v.v for v in vals if v.is_exact]
    if not exact:
        raise InsufficientPrecision(None, "all shifted coefficients uncertified")
    m = min(exact)
    for v in vals:
        if not v.is_exact and v.N <= m:
            raise InsufficientPrecision(v.N, "cannot locate roots in disc")
    return max(j for j, v in enumerate(vals) if v.is_exact and v.v == m)


def _child(E, beta, k, r):
    top = E.top
    return top.add(beta, top.mul(top.pow(top.pi, k), r))


def _depth_limit(E: TowerField) -> int:
    return int(E.N * E.e) // 2


def find_roots(P_raw: Sequence, E: TowerField) -> list[TowerElem]:
    """All roots in O_E of the monic polynomial with raw coefficients P_raw (already in E)."""
    top = E.top
    reps = E.residue_reps()
    stack = [(top.zero, 0)]
    found = []
    while stack:
        beta, k = stack.pop()
        n = count_in_disc(shifted_vals(E, P_raw, beta, k))
        if n == 0:
            continue
        if n == 1:
            found.append(_refine(P_raw, E, beta, k))
            continue
        if k >= _depth_limit(E):
            raise InsufficientPrecision(E.N * 2, "roots not separated")
        for r in reps:
            stack.append((_child(E, beta, k, r), k + 1))
    return found


def _refine(P_raw, E: TowerField, beta, k) -> TowerElem:
    """Hensel/Newton from a disc known to contain exactly one root."""
    d = len(P_raw) - 1
    dP = [E.top.mul(E.top.from_int(j), P_raw[j]) for j in range(1, d + 1)]
    reps = E.residue_reps()
    while True:
        v0 = E.raw_val(poly_eval(E, P_raw, beta))
        v1 = E.raw_val(poly_eval(E, dP, beta))
        if v1 is None:
            raise InsufficientPrecision(E.N * 2, "derivative vanishes at working precision")
        if v0 is None or v0 > 2 * v1:
            break
        if k >= _depth_limit(E):
            raise InsufficientPrecision(E.N * 2, "Hensel condition not reached")
        for r in reps:
            c = _child(E, beta, k, r)
            if count_in_disc(shifted_vals(E, P_raw, c, k + 1)) >= 1:
                beta, k = c, k + 1
                break
        else:
            raise RuntimeError("root escaped its disc")
    x = E.elem(beta)
    Pe = [E.elem(c) for c in P_raw]
    dPe = [E.elem(c) for c in dP]
    delta = v1
    # x is treated as an exact element each round; once P(x) vanishes mod
    # pi_K^N the true root is within N - v(P'(x)) of it
    for _ in range(64):
        px = _eval(Pe, x)
        if E.raw_val(px.raw) is None:
            break
        x = E.elem((x - px / _eval(dPe, x)).raw)
    else:
        raise InsufficientPrecision(E.N * 2, "Newton iteration did not settle")
    return E.elem(x.raw, E.N - delta)


def _eval(P, x):
    acc = x.field.zero()
    for c in reversed(P):
        acc = acc * x + c
    return acc


def root_key(x: TowerElem, digits: int):
    """Ordering key from coordinates reduced mod pi_K^digits (precision independent)."""
    ring = x.field.ring
    out = []
    for c in x.coords():
        if ring.kind == "padic":
            out.append(c % ring.p ** digits)
        else:
            out.append(tuple(int(a) for a in c[:digits]))
    return tuple(out)


# ---------------------------------------------------------------- profile

@dataclass(frozen=True)
class RamProfile:
    diffs: tuple  # sorted Fractions v_K(z_i - alpha), i != 1
    degree: int

    @property
    def i_max(self):
        return max(self.diffs) if self.diffs else None


def conjugate_profile(ext: Extension) -> RamProfile:
    """Root valuations of P(x + alpha)/x from its Newton polygon."""
    T = ext.field
    Pl = [T.lift_ground(c) for c in ext.P]
    shifted = taylor_coeffs(T, Pl, ext.alpha.raw)
    vals = []
    for c in shifted:
        v = T.raw_val(c)
        vals.append(AtLeast(T.N) if v is None else Exact(v))
    if vals[0].is_exact:
        raise InsufficientPrecision(T.N * 2, "P(alpha) does not vanish to working precision")
    np_ = newton_polygon(vals[1:], ceiling=None)
    diffs = tuple(sorted(np_.root_valuations()))
    return RamProfile(diffs, ext.degree)


def different_valuation(ext: Extension) -> Fraction:
    T = ext.field
    d = ext.degree
    dP = [T.lift_ground(ext.ring.mul(ext.ring.from_int(j), ext.P[j])) for j in range(1, d + 1)]
    return T.elem(poly_eval(T, dP, ext.alpha.raw)).val()


# ---------------------------------------------------------------- group

@dataclass
class GaloisGroup:
    ext: Extension
    roots: list  # TowerElems, canonical order
    identity: int
    perms: list  # perms[i][j] = index of sigma_i(z_j)
    table: list  # table[a][b] = index of sigma_a o sigma_b
    orders: list  # i(sigma_i) = v(z_i - alpha); None for identity
    separation: Fraction

    @property
    def order(self):
        return len(self.roots)

    def compose(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return next(b for b in range(self.order) if self.table[a][b] == self.identity)

    def apply(self, i: int, x: TowerElem) -> TowerElem:
        """sigma_i(x) for x in L."""
        c = self.ext.alpha_coords(x)
        z = self.roots[i]
        T = self.ext.field
        # basis elements have valuation in [0, 1), so coordinates lose < 1
        cprec = x.prec - 1
        acc = T.zero()
        for cj in reversed(c):
            acc = acc * z + T.elem(T.lift_ground(cj), cprec)
        return acc

    def closure(self, gens) -> frozenset:
        H = {self.identity} | set(gens)
        frontier = list(H)
        while frontier:
            new = []
            for a in frontier:
                for b in list(H):
                    for c in (self.table[a][b], self.table[b][a]):
                        if c not in H:
                            H.add(c)
                            new.append(c)
            frontier = new
        return frozenset(H)

    def subgroups(self) -> list[frozenset]:
        subs = {self.closure([g]) for g in range(self.order)}
        changed = True
        while changed:
            changed = False
            for A, B in itertools.combinations(list(subs), 2):
                C = self.closure(A | B)
                if C not in subs:
                    subs.add(C)
                    changed = True
        return sorted(subs, key=lambda H: (len(H), sorted(H)))

    def is_normal(self, H) -> bool:
        return all(self.table[self.table[g][h]][self.inverse(g)] in H for g in range(self.order) for h in H)

    def inertia(self) -> frozenset:
        return frozenset(i for i in range(self.order) if i == self.identity or self.orders[i] > 0)

    def cosets(self, H) -> list[frozenset]:
        seen, out = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            c = frozenset(self.table[g][h] for h in H)
            seen |= c
            out.append(c)
        return out


def galois_group(ext: Extension) -> GaloisGroup:
    T = ext.field
    Pl = [T.lift_ground(c) for c in ext.P]
    roots = find_roots(Pl, T)
    d = ext.degree
    if len(roots) < d:
        raise NotGalois(len(roots), d)
    sep = Fraction(0)
    for a, b in itertools.combinations(roots, 2):
        v = (a - b).valuation()
        if not v.is_exact:
            raise InsufficientPrecision(T.N * 2, "two roots coincide at working precision")
        sep = max(sep, v.v)
    digits = int(sep) + 2
    roots.sort(key=lambda z: root_key(z, digits))
    ident = max(range(d), key=lambda i: (roots[i] - ext.alpha).valuation().bound)
    coeffs = [ext.alpha_coords(z) for z in roots]
    perms = []
    for i, z in enumerate(roots):
        row = []
        for j in range(d):
            acc = T.zero()
            for cj in reversed(coeffs[j]):
                acc = acc * z + T.elem(T.lift_ground(cj))
            row.append(_match(acc, roots, sep))
        perms.append(row)
    table = [[perms[a][b] for b in range(d)] for a in range(d)]
    orders = [None if i == ident else (roots[i] - roots[ident]).val() for i in range(d)]
    return GaloisGroup(ext, roots, ident, perms, table, orders, sep)


def _match(x, roots, sep):
    hits = [i for i, z in enumerate(roots) if (x - z).valuation().bound > sep]
    if len(hits) != 1:
        raise InsufficientPrecision(None, "automorphism image not matched to a unique root")
    return hits[0]


def profile_from_roots(G: GaloisGroup) -> RamProfile:
    return RamProfile(tuple(sorted(o for o in G.orders if o is not None)), G.order)


# ---------------------------------------------------------------- subfields

@dataclass
class Subfield:
    H: frozenset
    normal: bool
    degree: int  # [M:K]
    gamma: TowerElem | None
    minpoly: list | None  # portable ground literals, low-to-high
    certified: bool
    label: str = ""
    e: int = 1
    f: int = 1


def _orbit_symmetric(G: GaloisGroup, H, x: TowerElem, kind: str):
    imgs = [G.apply(h, x) for h in sorted(H)]
    if kind == "trace":
        acc = imgs[0]
        for y in imgs[1:]:
            acc = acc + y
        return acc
    acc = imgs[0]
    for y in imgs[1:]:
        acc = acc * y
    return acc


def _subfield_candidates(G: GaloisGroup, H):
    ext = G.ext
    T = ext.field
    a = ext.alpha
    om = T.unram_generator()
    bases = [a, a * a, a + 1, a * om, a + om, a * a + om, a * a * a, a + 2]
    for x in bases:
        for kind in ("trace", "norm"):
            yield _orbit_symmetric(G, H, x, kind)


def _poly_from_roots(vals: list[TowerElem]):
    T = vals[0].field
    coeffs = [T.one()]
    for r in vals:
        nxt = [T.zero()] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        coeffs = nxt
    return coeffs


def _ground_literal(x: TowerElem):
    """Read a TowerElem that should lie in K as a portable ground literal."""
    T = x.field
    ring = T.ring
    cs = x.coords()
    for c in cs[1:]:
        if not ring.is_zero(c):
            w = ring.w(c)
            if w is not None and w < x.prec - 1:
                raise ValueError("coefficient is not in the base field")
    c = cs[0]
    keep = max(int(x.prec) - 1, 1)
    if ring.kind == "padic":
        mod = ring.p ** keep
        c %= mod
        return c - mod if c > mod // 2 else c
    return list(ring.key(c))[:keep]


def subextension_lattice(G: GaloisGroup) -> list[Subfield]:
    if G.order > 24:
        raise ValueError("lattice enumeration is limited to groups of order <= 24")
    ext = G.ext
    out = []
    inert = G.inertia()
    for H in G.subgroups():
        deg = G.order // len(H)
        e_M = len(inert) // len(inert & H)
        normal = G.is_normal(H)
        if len(H) == G.order:
            out.append(Subfield(H, True, 1, None, None, True, "K", 1, 1))
            continue
        if len(H) == 1:
            out.append(Subfield(H, True, G.order, ext.alpha, ext._portable_P(), True, "L",
                                ext.field.e, ext.field.f))
            continue
        target = sum(G.orders[s] for s in range(G.order) if s not in H)
        reps = [min(c) for c in G.cosets(H)]
        found = None
        for tries, gamma in enumerate(_subfield_candidates(G, H)):
            if tries >= 16:
                break
            conj = [G.apply(s, gamma) for s in reps]
            ok = True
            diffv = Fraction(0)
            for i in range(len(conj)):
                for j in range(len(conj)):
                    if i == j:
                        continue
                    v = (conj[i] - conj[j]).valuation()
                    if not v.is_exact:
                        ok = False
                        break
                    if i == 0:
                        diffv += v.v
                if not ok:
                    break
            if not ok:
                continue
            cert = diffv == target
            if not cert:
                continue
            mp = [_ground_literal(c) for c in _poly_from_roots(conj)]
            found = Subfield(H, normal, deg, gamma, mp, True, "", e_M, deg // e_M)
            break
        if found is None:
            found = Subfield(H, normal, deg, None, None, False, "", e_M, deg // e_M)
        out.append(found)
    return out
