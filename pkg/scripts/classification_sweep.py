"""Classify random square channels and compare the structural and CP routes."""

from __future__ import annotations

import argparse
import collections
import logging
import time
from dataclasses import dataclass

import numpy as np

from fgc.degradability import classify, degrading_candidate, is_degradable_structural
from fgc.errors import SingularA
from fgc.sampling import channel_family


@dataclass(frozen=True)
class SweepConfig:
    count: int = 300
    max_modes: int = 3
    seed: int = 0


def parse_args() -> SweepConfig:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=SweepConfig.count)
    p.add_argument("--max-modes", type=int, default=SweepConfig.max_modes)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = p.parse_args()
    return SweepConfig(a.count, a.max_modes, a.seed)


def run(cfg: SweepConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    verdicts: collections.Counter = collections.Counter()
    by_kind: collections.Counter = collections.Counter()
    disagreements = skipped = 0
    start = time.perf_counter()
    for _ in range(cfg.count):
        kind, T = channel_family(int(rng.integers(1, cfg.max_modes + 1)), rng)
        report = classify(T)
        verdicts[report.verdict] += 1
        by_kind[(kind, report.verdict)] += 1
        try:
            cp = degrading_candidate(T).is_cp
        except SingularA:
            skipped += 1
            continue
        disagreements += is_degradable_structural(T) != cp
    return {
        "verdicts": dict(verdicts),
        "by_kind": dict(by_kind),
        "disagreements": disagreements,
        "singular_skipped": skipped,
        "seconds": time.perf_counter() - start,
    }


def main() -> None:
    logging.basicConfig(level=logging.WARNING)
    cfg = parse_args()
    res = run(cfg)
    print(f"{cfg.count} channels in {res['seconds']:.2f}s, seed {cfg.seed}")
    for verdict, count in sorted(res["verdicts"].items()):
        print(f"  {verdict:15s} {count}")
    print("by family:")
    for (kind, verdict), count in sorted(res["by_kind"].items()):
        print(f"  {kind:15s} {verdict:15s} {count}")
    print(f"structural vs CP disagreements: {res['disagreements']} ({res['singular_skipped']} singular skipped)")


if __name__ == "__main__":
    main()
