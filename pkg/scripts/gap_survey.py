"""Integer points and gaps on n = 2 branches, cross-checked by brute force.

    python3 scripts/gap_survey.py --x-max 100 --p-max 100000
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from diffseq import Branch
from diffseq.diophantine_branch import brute_force_solutions, gap_audit


@dataclass
class GapSurveyConfig:
    n: int = 2
    x_max: int = 100
    p_max: int = 10 ** 5
    cross_check: bool = True


def run(cfg: GapSurveyConfig) -> int:
    gaps, points, bad = Counter(), {}, 0
    for x in range(1, cfg.x_max + 1):
        rep = gap_audit(Branch(x, cfg.n), cfg.p_max)
        points[x] = list(rep.integer_points)
        gaps.update(rep.gaps)
        bad += len(rep.violations)
    print(f"n={cfg.n}  x' <= {cfg.x_max}  p <= {cfg.p_max}")
    print(f"branches with nontrivial points: {sum(len(v) > 1 for v in points.values())}")
    print(f"smallest gaps: {sorted(gaps)[:10]}")
    print(f"violations: {bad}")
    if cfg.cross_check:
        found = {x: [] for x in points}
        for x, p, _ in brute_force_solutions(cfg.n, 1, cfg.x_max, cfg.p_max):
            found[x].append(p)
        agree = found == points
        print(f"brute force agrees: {agree}")
        bad += not agree
    return 1 if bad else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--x-max", type=int, default=100)
    ap.add_argument("--p-max", type=int, default=10 ** 5)
    ap.add_argument("--no-cross-check", action="store_true")
    a = ap.parse_args()
    raise SystemExit(run(GapSurveyConfig(a.n, a.x_max, a.p_max, not a.no_cross_check)))


if __name__ == "__main__":
    main()
