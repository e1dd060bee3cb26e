"""Quantum capacity of the single-mode lossy channel ``gamma -> t gamma + (1 - t) J``.

``t`` is the transmission: ``t = 1`` is the identity, ``t = 0`` replaces the
input with the vacuum.  The channel is degradable for ``t >= 1/2`` (so its
capacity is the single-letter coherent information, maximised over Gaussian
inputs ``lambda J``) and antidegradable for ``t <= 1/2`` (zero capacity).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag
from scipy.optimize import minimize_scalar

from .channels import GaussianChannel, apply
from .errors import OutOfRange
from .linalg import J, SIGMA_X, omega
from .states import binary_entropy, entropy_bits

GRID_POINTS = 1001
REFINE_TOL = 1e-8


def _check_unit(name: str, x: float, lo: float = 0.0, hi: float = 1.0) -> float:
    x = float(x)
    if not (lo <= x <= hi):
        raise OutOfRange(f"{name}={x} outside [{lo}, {hi}]")
    return x


def lossy_channel(t: float, n: int = 1) -> GaussianChannel:
    """``A = sqrt(t) 1``, ``B = (1 - t) (+)_n J``."""
    t = _check_unit("t", t)
    return GaussianChannel(np.sqrt(t) * np.eye(2 * n), (1.0 - t) * omega(n))


def coherent_information(t: float, lam):
    """Coherent information (bits) of the lossy channel for input ``lam * J``.

    The output has canonical value ``t lam + (1 - t)`` and the environment
    (equivalently, output plus reference) ``(1 - t) lam + t``.
    """
    t = _check_unit("t", t)
    lam = np.asarray(lam, dtype=float)
    if np.any(np.abs(lam) > 1.0):
        raise OutOfRange("lambda outside [-1, 1]")
    mu_out = t * lam + (1.0 - t)
    mu_env = (1.0 - t) * lam + t
    out = binary_entropy((1.0 + mu_out) / 2.0) - binary_entropy((1.0 + mu_env) / 2.0)
    return float(out) if out.ndim == 0 else out


def purified_input(lam: float) -> np.ndarray:
    """Two-mode pure CM whose first mode has CM ``lam * J``."""
    k = np.sqrt(max(0.0, 1.0 - lam**2))
    return np.block([[lam * J, k * SIGMA_X], [-k * SIGMA_X, lam * J]])


def coherent_information_cm(t: float, lam: float) -> float:
    """Same quantity from entropies of actual output CMs (cross-check)."""
    T = lossy_channel(t)
    out = apply(T, lam * J)
    ext = GaussianChannel(block_diag(T.A, np.eye(2)), block_diag(T.B, np.zeros((2, 2))))
    joint = apply(ext, purified_input(lam))
    return entropy_bits(out) - entropy_bits(joint)


@dataclass(frozen=True)
class CapacityResult:
    t: float
    Q: float
    lambda_opt: float
    grid_points: int
    tolerance: float
    reason: str


def bounded_max(f, a: float, b: float, tol: float = REFINE_TOL) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[a, b]`` with scipy's bounded Brent search."""
    res = minimize_scalar(lambda z: -f(z), bounds=(a, b), method="bounded", options={"xatol": tol})
    return float(res.x), float(-res.fun)


def quantum_capacity_lossy(t: float, grid_points: int = GRID_POINTS, tol: float = REFINE_TOL) -> CapacityResult:
    """Capacity of the lossy channel: zero for ``t <= 1/2``, else the maximised coherent information."""
    t = _check_unit("t", t)
    if t <= 0.5:
        return CapacityResult(t, 0.0, 1.0, 0, tol, "antidegradable")
    grid = np.linspace(-1.0, 1.0, grid_points)
    vals = coherent_information(t, grid)
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    x, fx = bounded_max(lambda z: coherent_information(t, z), lo, hi, tol)
    if vals[i] > fx:
        x, fx = grid[i], vals[i]
    return CapacityResult(t, max(fx, 0.0), x, grid_points, tol, "degradable")


def capacity_curve(t_min: float, t_max: float, steps: int) -> list[CapacityResult]:
    """Capacities on ``steps`` equally spaced transmissions (a single point if ``t_min == t_max``)."""
    t_min = _check_unit("t_min", t_min)
    t_max = _check_unit("t_max", t_max)
    if t_min > t_max:
        raise OutOfRange("t_min exceeds t_max")
    if steps < 1 or (steps < 2 and t_min < t_max):
        raise OutOfRange(f"steps={steps} too small for the range")
    ts = np.linspace(t_min, t_max, steps) if t_min < t_max else np.array([t_min])
    return [quantum_capacity_lossy(t) for t in ts]


def curve_csv(rows: list[CapacityResult]) -> str:
    buf = io.StringIO()
    buf.write("t,Q,lambda_opt\n")
    for r in rows:
        buf.write(f"{r.t:.12g},{r.Q:.12g},{r.lambda_opt:.12g}\n")
    return buf.getvalue()


def write_curve_csv(rows: list[CapacityResult], path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(curve_csv(rows))
