#!/usr/bin/env python3
"""Sweep the cancellation report over a range of amplitude shapes.

For each (k, n) the script partitions every codimension-one pole
factor into verified groups, prints one summary line per shape, and
optionally dumps the full JSON reports into a directory.
"""

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from wlpoles.cancel import amplitude_report, report_json


@dataclass
class SweepConfig:
    shapes: list[tuple[int, int]] = field(
        default_factory=lambda: [(1, 5), (1, 6), (1, 7), (2, 6), (2, 7)]
    )
    seed: int = 0
    trials: int = 10
    out_dir: Path | None = None


def parse_shapes(arg: str) -> list[tuple[int, int]]:
    shapes = []
    for part in arg.split(","):
        k, n = part.split(":")
        shapes.append((int(k), int(n)))
    return shapes


def run(cfg: SweepConfig) -> int:
    incomplete = 0
    for k, n in cfg.shapes:
        t0 = time.perf_counter()
        rep = amplitude_report(k, n, seed=cfg.seed, trials=cfg.trials)
        dt = time.perf_counter() - t0
        cases = Counter(g.case for g in rep.groups)
        case_txt = " ".join(f"{c}:{cases[c]}" for c in sorted(cases))
        print(
            f"k={k} n={n}  status={rep.status}  groups={len(rep.groups)}"
            f"  [{case_txt}]  excluded={len(rep.excluded)}"
            f"  failures={len(rep.failures)}  {dt:.1f}s"
        )
        if rep.status != "complete":
            incomplete += 1
            for line in rep.failures:
                print(f"    failure: {line}")
        if cfg.out_dir is not None:
            cfg.out_dir.mkdir(parents=True, exist_ok=True)
            path = cfg.out_dir / f"cancel_k{k}_n{n}.json"
            path.write_text(report_json(rep) + "\n")
            print(f"    wrote {path}")
    return 1 if incomplete else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--shapes",
        default="1:5,1:6,1:7,2:6,2:7",
        help="comma-separated k:n pairs",
    )
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--out-dir", type=Path, default=None)
    args = ap.parse_args(argv)
    cfg = SweepConfig(
        shapes=parse_shapes(args.shapes),
        seed=args.seed,
        trials=args.trials,
        out_dir=args.out_dir,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
