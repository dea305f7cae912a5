#!/usr/bin/env python3
"""Check the three pole-polynomial routes agree across diagram families.

For every admissible diagram in the requested (k, n) ranges the
per-edge product, the necklace-minor radical, and the reverse-necklace
radical are computed independently and compared as factor sets.
Exits nonzero if any diagram disagrees.
"""

import argparse
import sys
import time
from dataclasses import dataclass

from wlpoles.diagrams import enumerate_diagrams
from wlpoles.poles import check_r_equalities


@dataclass
class SweepConfig:
    k_max: int = 2
    n_max: int = 8


def run(cfg: SweepConfig) -> int:
    bad = 0
    for k in range(1, cfg.k_max + 1):
        for n in range(k + 4, cfg.n_max + 1):
            t0 = time.perf_counter()
            diagrams = enumerate_diagrams(k, n)
            mismatched = []
            for W in diagrams:
                rep = check_r_equalities(W)
                if not rep.ok:
                    mismatched.append((W, rep.mismatches))
            dt = time.perf_counter() - t0
            print(
                f"k={k} n={n}  diagrams={len(diagrams)}"
                f"  mismatches={len(mismatched)}  {dt:.2f}s"
            )
            for W, lines in mismatched:
                bad += 1
                print(f"    {W}")
                for line in lines:
                    print(f"      {line}")
    return 1 if bad else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args(argv)
    return run(SweepConfig(k_max=args.k_max, n_max=args.n_max))


if __name__ == "__main__":
    sys.exit(main())
