"""Built-in example extensions with independently derived invariants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .galois import ExtensionSpec
from .localfield import GroundField, Unramified, eisenstein

Q2 = GroundField("padic", 2)
Q3 = GroundField("padic", 3)
Q7 = GroundField("padic", 7)
F2T = GroundField("laurent", 2)


@dataclass(frozen=True)
class Builtin:
    spec: ExtensionSpec
    description: str
    u: Fraction  # expected upper break (None-like values never occur here)
    i_max: Fraction
    profile: tuple
    upper: tuple
    wild: bool
    tame_total: bool = False


def _b(name, ground, steps, desc, u, i_max, profile, upper, wild, tame_total=False, generator=None):
    spec = ExtensionSpec(ground, tuple(steps), name, generator)
    F = Fraction
    return Builtin(spec, desc, F(u), F(i_max), tuple(F(x) for x in profile),
                   tuple(F(x) for x in upper), wild, tame_total)


# unramified quadratic over Q_2 has no ramification: u = 0 by convention here
# (the trivial upper filtration); i and profile are empty
BUILTINS = {
    b.spec.name: b for b in [
        _b("sqrt2", Q2, [eisenstein([-2, 0, 1])], "Q2(sqrt 2), x^2-2",
           3, "3/2", ["3/2"], [3], True),
        _b("zeta8", Q2, [eisenstein([2, 4, 6, 4, 1])], "Q2(zeta_8), x^4+1 shifted by 1",
           3, 1, ["1/2", "1/2", 1], [2, 2, 3], True, generator=1),
        _b("zeta4", Q2, [eisenstein([2, 2, 1])], "Q2(i), x^2+1 shifted by 1",
           2, 1, [1], [2], True, generator=1),
        _b("unram2", Q2, [Unramified(2)], "unramified quadratic over Q2",
           0, 0, [0], [0], False),
        _b("tamecube", Q2, [Unramified(2), eisenstein([-2, 0, 0, 1])],
           "Q2(zeta_3, 2^(1/3)), tame cube root over the unramified quadratic",
           1, "1/3", [0, 0, 0, "1/3", "1/3"], [0, 0, 0, 1, 1], False),
        _b("as2", F2T, [eisenstein(["t", "t", 1])], "x^2+tx+t over F2((t))",
           2, 1, [1], [2], True),
        _b("zeta9", Q3, [eisenstein([3, 3, 1]), eisenstein([[0, -1], 3, 3, 1])],
           "Q3(zeta_9) as Q3(zeta_3)(x^3+3x^2+3x-pi), generator zeta_9",
           2, "1/2", ["1/6", "1/6", "1/6", "1/2", "1/2"], [1, 1, 1, 2, 2], True, generator=1),
        _b("tamesq", Q3, [eisenstein([-3, 0, 1])], "Q3(sqrt 3), x^2-3",
           1, "1/2", ["1/2"], [1], False, tame_total=True),
        _b("zeta12", Q2, [Unramified(2), eisenstein([2, 2, 1])], "Q2(zeta_12) = Q2(zeta_3, i)",
           2, 1, [0, 0, 1], [0, 0, 2], True),
        _b("tame7", Q7, [eisenstein([-7, 0, 0, 1])], "Q7(7^(1/3)), x^3-7",
           1, "1/3", ["1/3", "1/3"], [1, 1], False, tame_total=True),
    ]
}


def builtin(name: str) -> Builtin:
    try:
        return BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown built-in extension {name!r}; have {sorted(BUILTINS)}") from None
