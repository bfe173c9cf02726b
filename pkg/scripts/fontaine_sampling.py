#!/usr/bin/env python3
"""Random checks of v(P(beta)) = f(max_i v(z_i - beta)) in K and in a quadratic extension of L."""
import argparse
import random

from ramify.catalog import BUILTINS
from ramify.config import RunConfig
from ramify.localfield import TowerField
from ramify.ramification import aux_field, fontaine_identity_check
from ramify.report import analyze


def sample(F, rng, digits, lowest):
    reps = F.residue_reps()
    pi = F.uniformizer()
    acc = F.zero()
    for i in range(digits):
        acc = acc + F.elem(rng.choice(reps)) * pi ** (lowest + i)
    return acc


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("names", nargs="*", default=list(BUILTINS))
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    for name in args.names:
        an = analyze(BUILTINS[name].spec, RunConfig())
        L = an.ext.field
        K = TowerField(an.spec.ground, (), L.prec)
        T = aux_field(L, 2)
        P = [T.elem(T.lift_ground(c)) for c in an.ext.P]
        zs = [T.coerce(z) for z in an.G.roots]
        tally = {"K": [0, 0], "ext": [0, 0]}
        for _ in range(args.n):
            for where in tally:
                if where == "K":
                    beta = T.coerce(sample(K, rng, 4, rng.randrange(0, 4)))
                else:
                    beta = rng.choice(zs) + sample(T, rng, 3, rng.randrange(0, 8))
                lhs, rhs = fontaine_identity_check(P, beta, zs, an.br)
                if lhs is not None:
                    tally[where][0] += 1
                    tally[where][1] += lhs == rhs
        print(f"{name:10} " + "  ".join(f"{w}: {ok}/{c} equal" for w, (c, ok) in tally.items()))


if __name__ == "__main__":
    main()
