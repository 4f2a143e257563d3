"""Compare Step along x' = alpha*p with two candidate limits.

The first column is step_limit, the closed form given with the original
argument; the second is step_asymptote, the directional derivative of the
branch norm.  Only the second one is approached as p grows.

    python3 scripts/limit_check.py --alphas 1/4,1/2,1 --powers 2,3,5
"""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import mpmath

from diffseq import Branch
from diffseq.diophantine_branch import step_asymptote, step_interval, step_limit


@dataclass
class LimitConfig:
    alphas: List[Fraction] = field(default_factory=lambda: [Fraction(1, 4), Fraction(1, 2), Fraction(1)])
    powers: List[int] = field(default_factory=lambda: [2, 3, 5])
    ps: List[int] = field(default_factory=lambda: [10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5])


def as_mpf(iv):
    q = iv.midpoint
    return mpmath.mpf(q.numerator) / q.denominator


def run(cfg: LimitConfig) -> None:
    print(f"{'alpha':>6} {'n':>2} {'p':>7} {'Step':>12} {'|Step-limit|':>14} {'|Step-asym|':>14}")
    for alpha in cfg.alphas:
        for n in cfg.powers:
            lim, asym = as_mpf(step_limit(alpha, n)), as_mpf(step_asymptote(alpha, n))
            for p in cfg.ps:
                s = as_mpf(step_interval(Branch(int(alpha * p), n), p))
                print(f"{str(alpha):>6} {n:2d} {p:7d} {mpmath.nstr(s, 8):>12} "
                      f"{mpmath.nstr(abs(s - lim), 4):>14} {mpmath.nstr(abs(s - asym), 4):>14}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphas", default="1/4,1/2,1")
    ap.add_argument("--powers", default="2,3,5")
    ap.add_argument("--ps", default="100,1000,10000,100000")
    a = ap.parse_args()
    run(LimitConfig([Fraction(t) for t in a.alphas.split(",")],
                    [int(t) for t in a.powers.split(",")],
                    [int(t) for t in a.ps.split(",")]))


if __name__ == "__main__":
    main()
