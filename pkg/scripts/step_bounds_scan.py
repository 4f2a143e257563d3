"""Certify 1 < Step < (A+1)^(1/n) over a grid of branches and print a tally.

    python3 scripts/step_bounds_scan.py --n-max 10 --x-max 50 --p-max 1000
"""

import argparse
import os
import time
from dataclasses import dataclass

from diffseq import Branch, certify_step_bounds
from diffseq.exact_arith import DEFAULT_BITS, DEFAULT_MAX_BITS


@dataclass
class StepBoundsScanConfig:
    n_min: int = 2
    n_max: int = 10
    x_max: int = 50
    p_max: int = 1000
    A: int = 1
    bits: int = DEFAULT_BITS
    max_bits: int = DEFAULT_MAX_BITS
    threads: int = os.cpu_count() or 1


def run(cfg: StepBoundsScanConfig) -> int:
    bad = 0
    for n in range(cfg.n_min, cfg.n_max + 1):
        t0 = time.perf_counter()
        certified = undecided = violations = 0
        for x in range(1, cfg.x_max + 1):
            rep = certify_step_bounds(Branch(x, n, cfg.A), range(0, cfg.p_max + 1),
                                      cfg.bits, cfg.max_bits, cfg.threads)
            certified += rep.certified
            undecided += len(rep.undecided)
            violations += len(rep.violations)
        bad += undecided + violations
        print(f"n={n:2d}  certified={certified:7d}  undecided={undecided}  "
              f"violations={violations}  {time.perf_counter() - t0:6.2f}s")
    return 1 if bad else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(StepBoundsScanConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=value)
    cfg = StepBoundsScanConfig(**vars(ap.parse_args()))
    raise SystemExit(run(cfg))


if __name__ == "__main__":
    main()
