"""Tabulate the quantum capacity of the single-mode lossy channel."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from fgc.capacity import capacity_curve, curve_csv, write_curve_csv


@dataclass(frozen=True)
class CurveConfig:
    t_min: float = 0.0
    t_max: float = 1.0
    steps: int = 101
    out: Path | None = None


def parse_args() -> CurveConfig:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--t-min", type=float, default=CurveConfig.t_min)
    p.add_argument("--t-max", type=float, default=CurveConfig.t_max)
    p.add_argument("--steps", type=int, default=CurveConfig.steps)
    p.add_argument("--out", type=Path, default=None)
    a = p.parse_args()
    return CurveConfig(a.t_min, a.t_max, a.steps, a.out)


def main() -> None:
    cfg = parse_args()
    rows = capacity_curve(cfg.t_min, cfg.t_max, cfg.steps)
    if cfg.out is None:
        print(curve_csv(rows), end="")
    else:
        write_curve_csv(rows, cfg.out)
        best = max(rows, key=lambda r: r.Q)
        print(f"wrote {len(rows)} rows to {cfg.out}; max Q = {best.Q:.6f} at t = {best.t:g}")


if __name__ == "__main__":
    main()
