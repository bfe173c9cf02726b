"""Upper filtrations on the Galois members of one subextension lattice.

Everything here works with the upper index u(s) = f(i(s)) of each element
(u = +inf for the identity).  G^(m) = {s : u(s) >= m}; the image of G^(m) in a
quotient G/H is the set of cosets meeting it, and the induced index of a coset
is the max of u over it (Herbrand).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .galois import (GaloisGroup, NotGalois, build_extension, galois_group,
                     profile_from_roots, Subfield, ExtensionSpec, RamProfile)
from .localfield import InsufficientPrecision, TowerField
from .ramification import Breaks, breaks, NEG_INF

INF = float("inf")


def upper_indices(G: GaloisGroup, br: Breaks) -> list:
    return [INF if s == G.identity else br.f(G.orders[s]) for s in range(G.order)]


def upper_group(uidx: Sequence, m) -> frozenset:
    """G^(m) = {s : u(s) >= m}."""
    return frozenset(s for s, u in enumerate(uidx) if u >= m)


def upper_group_plus(uidx: Sequence, m) -> frozenset:
    """G^(m+): the subgroup just above m, i.e. {s : u(s) > m} (chains are finite)."""
    return frozenset(s for s, u in enumerate(uidx) if u > m)


def member_u(uidx: Sequence, H) -> object:
    """u of the fixed field L^H: largest index outside H (NEG_INF when L^H = K)."""
    outside = [u for s, u in enumerate(uidx) if s not in H]
    return max(outside) if outside else NEG_INF


def coset_indices(G: GaloisGroup, uidx, H) -> list:
    """Induced indices on Gal(L^H/K) = G/H, one per coset (identity coset first)."""
    cos = G.cosets(H)
    cos.sort(key=lambda c: (G.identity not in c, min(c)))
    return [max(uidx[s] for s in c) for c in cos]


@dataclass
class QuotientChain:
    H: frozenset
    indices: list  # per coset, identity coset first (INF)

    def nontrivial(self) -> list:
        return sorted(x for x in self.indices if x != INF)

    def chain(self) -> list:
        """(break, order of the image just at and below it), increasing breaks."""
        vals = self.nontrivial()
        out = []
        for b in sorted(set(vals)):
            out.append((b, 1 + sum(1 for v in vals if v >= b)))
        return out

    @property
    def u(self):
        vals = self.nontrivial()
        return max(vals) if vals else NEG_INF


def induced_quotient_filtration(G: GaloisGroup, br: Breaks, H) -> QuotientChain:
    if not G.is_normal(H):
        raise ValueError("quotient filtration needs a normal subgroup")
    return QuotientChain(frozenset(H), coset_indices(G, upper_indices(G, br), H))


# ---------------------------------------------------------------- direct recomputation

@dataclass
class DirectMember:
    spec: ExtensionSpec
    breaks: Breaks
    indices: list  # upper indices of Gal(M/K), identity excluded


def member_spec(G: GaloisGroup, sf: Subfield) -> ExtensionSpec:
    """A literal tower for L^H over K from its minimal polynomial."""
    from .pmoracle import root_field_steps
    ground = G.ext.spec.ground
    K = TowerField(ground, (), G.ext.field.prec)
    Q = [K.top.parse(c) if K.ring.kind == "laurent" else K.top.from_int(c) for c in sf.minpoly]
    steps = root_field_steps(K, Q)
    M = TowerField(ground, steps, K.prec)
    if M.degree != sf.degree:
        raise ValueError(f"constructed tower has degree {M.degree}, member has {sf.degree}")
    return ExtensionSpec(ground, steps, f"member[{sf.degree}]")


def direct_member(spec: ExtensionSpec, prec: int) -> DirectMember:
    ext = build_extension(spec, prec)
    GM = galois_group(ext)
    br = breaks(profile_from_roots(GM))
    idx = sorted(br.f(o) for o in GM.orders if o is not None)
    return DirectMember(spec, br, idx)


@dataclass
class CompatRow:
    H: frozenset
    degree: int
    induced: list
    direct: list | None
    match: bool
    note: str = ""


def quotient_compatibility_check(G: GaloisGroup, br: Breaks, lattice: Sequence[Subfield],
                                 prec: int | None = None) -> list[CompatRow]:
    """Induced chain on every Galois member versus the member computed on its own."""
    prec = prec or G.ext.field.prec
    rows = []
    for sf in lattice:
        if not sf.normal:
            continue
        qc = induced_quotient_filtration(G, br, sf.H)
        induced = qc.nontrivial()
        if sf.degree == 1:
            rows.append(CompatRow(sf.H, 1, induced, [], induced == []))
            continue
        if sf.degree == G.order:
            direct = sorted(x for x in upper_indices(G, br) if x != INF)
            rows.append(CompatRow(sf.H, sf.degree, induced, direct, induced == direct))
            continue
        if sf.minpoly is None:
            rows.append(CompatRow(sf.H, sf.degree, induced, None, False, "no certified generator"))
            continue
        try:
            dm = direct_member(member_spec(G, sf), prec)
        except (ValueError, NotGalois, InsufficientPrecision) as exc:
            rows.append(CompatRow(sf.H, sf.degree, induced, None, False, str(exc)))
            continue
        rows.append(CompatRow(sf.H, sf.degree, induced, dm.indices, induced == dm.indices))
    return rows


# ---------------------------------------------------------------- fixed fields

def member_for(lattice: Sequence[Subfield], H) -> Subfield:
    H = frozenset(H)
    for sf in lattice:
        if sf.H == H:
            return sf
    raise ValueError(f"subgroup {sorted(H)} is not in the lattice")


@dataclass
class TableRow:
    m: Fraction
    below: frozenset  # subgroup of K-bar_{<m} cap L (intersection of H over members with u < m)
    upto: frozenset  # K-bar_{<=m} cap L
    fixed: frozenset  # G^(m)
    fixed_plus: frozenset  # G^(m+)

    @property
    def holds(self):
        return self.below == self.fixed and self.upto == self.fixed_plus


def _composite(G: GaloisGroup, members) -> frozenset:
    """Subgroup of the composite of the given fixed fields: intersection of their H."""
    H = frozenset(range(G.order))
    for sf in members:
        H = H & sf.H
    return H


def fixed_field_table(G: GaloisGroup, br: Breaks, lattice: Sequence[Subfield], grid) -> list[TableRow]:
    uidx = upper_indices(G, br)
    galois_members = [(sf, member_u(uidx, sf.H)) for sf in lattice if sf.normal]
    rows = []
    for m in grid:
        m = Fraction(m)
        below = _composite(G, [sf for sf, u in galois_members if u < m])
        upto = _composite(G, [sf for sf, u in galois_members if u <= m])
        fx, fxp = upper_group(uidx, m), upper_group_plus(uidx, m)
        for sub in (below, upto, fx, fxp):
            member_for(lattice, sub)  # guard: all four must be lattice members
        rows.append(TableRow(m, below, upto, fx, fxp))
    return rows


# ---------------------------------------------------------------- finite-level checks

def residue_inertia(G: GaloisGroup) -> frozenset:
    """Elements acting trivially on the residue field, read off from their action on
    a residue-field generator."""
    om = G.ext.field.unram_generator()
    out = set()
    for s in range(G.order):
        if (G.apply(s, om) - om).valuation().bound > 0:
            out.add(s)
    return frozenset(out)


def restricted_breaks(G: GaloisGroup, H) -> Breaks:
    """Breaks of L over L^H when L^H/K is unramified: same lower indices, restricted to H."""
    diffs = tuple(sorted(G.orders[s] for s in H if s != G.identity))
    return breaks(RamProfile(diffs, len(H)))


@dataclass
class FiniteLevelReport:
    trivial_above: bool
    inertia_low: bool
    member_classes: bool
    base_change: dict = field(default_factory=dict)
    inertia: frozenset = frozenset()

    @property
    def passes(self):
        return (self.trivial_above and self.inertia_low and self.member_classes
                and all(self.base_change.values()))


def finite_level_checks(G: GaloisGroup, br: Breaks, lattice: Sequence[Subfield], grid) -> FiniteLevelReport:
    uidx = upper_indices(G, br)
    u = br.u_max
    ident = frozenset([G.identity])
    # (a) trivial above u
    a = all(upper_group(uidx, m) == ident for m in grid if u == NEG_INF or m > u)
    # (b) inertia for 0 < m <= 1, inertia measured through the residue action
    inert = residue_inertia(G)
    b = inert == G.inertia() and all(upper_group(uidx, m) == inert for m in grid if 0 < m <= 1)
    # (c) unramified members have u = 0, ramified ones u >= 1
    c = True
    for sf in lattice:
        if not sf.normal or sf.degree == 1:
            continue
        um = member_u(uidx, sf.H)
        c &= (um == 0) if sf.e == 1 else (um >= 1)
    # (d) unramified K'/K inside L: filtration of Gal(L/K') is the restriction
    bc = {}
    for sf in lattice:
        if sf.e != 1 or not sf.normal:
            continue
        rb = restricted_breaks(G, sf.H)
        ok = all(rb.f(G.orders[s]) == uidx[s] for s in sf.H if s != G.identity)
        bc[",".join(map(str, sorted(sf.H)))] = ok
    return FiniteLevelReport(a, b, c, bc, inert)


def left_continuity(uidx: Sequence) -> bool:
    """G^(b) = G^(b - eps) at every break b, eps below the gap to the previous break."""
    vals = sorted({x for x in uidx if x != INF})
    prev = Fraction(0)
    for b in vals:
        gap = b - prev if b > prev else Fraction(1)
        eps = gap / 2 if gap else Fraction(1, 2)
        if upper_group(uidx, b) != upper_group(uidx, b - eps):
            return False
        prev = b
    return True


def separation(uidx: Sequence, u) -> dict:
    n = len(uidx)
    top = (u if u != NEG_INF else Fraction(0)) + Fraction(1, 1000)
    return {"trivial_above_u": len(upper_group(uidx, top)) == 1,
            "full_at_zero": len(upper_group(uidx, 0)) == n}


def composite_check(G: GaloisGroup, br: Breaks, lattice: Sequence[Subfield]) -> list[dict]:
    """u(M1 M2) = max(u(M1), u(M2)) over pairs of Galois members."""
    uidx = upper_indices(G, br)
    gal = [sf for sf in lattice if sf.normal]
    out = []
    for i, a in enumerate(gal):
        for bsf in gal[i + 1:]:
            comp = member_for(lattice, a.H & bsf.H)
            lhs = member_u(uidx, comp.H)
            rhs = max(member_u(uidx, a.H), member_u(uidx, bsf.H))
            out.append({"pair": (sorted(a.H), sorted(bsf.H)), "u": lhs, "ok": lhs == rhs})
    return out
