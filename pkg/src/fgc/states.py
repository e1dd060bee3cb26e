"""Fermionic Gaussian states described by their covariance matrices (CMs).

A CM of ``n`` modes is a real antisymmetric ``2n x 2n`` matrix with
``1 + i gamma >= 0``; the vacuum is ``(+)_n J``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag
from scipy.special import entr

from .errors import BadPartition, InvalidCM, NotPure, OddDimension, ShapeMismatch
from .linalg import (
    PURE_TOL,
    SIGMA_X,
    antisym_canonical,
    check_antisymmetric,
    lambda_blocks,
    max_abs,
)

VALID_TOL = 1e-9


def _as_cm(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {gamma.shape}")
    if gamma.shape[0] % 2:
        raise OddDimension(f"dimension {gamma.shape[0]} is odd")
    return check_antisymmetric(gamma)


def modes(gamma) -> int:
    return np.asarray(gamma).shape[0] // 2


def abs_lambdas(gamma) -> np.ndarray:
    """Canonical values ``|lambda_j|`` in descending order (eigenvalues of i*gamma)."""
    gamma = _as_cm(gamma)
    if gamma.size == 0:
        return np.zeros(0)
    ev = np.linalg.eigvalsh(1j * gamma)
    n = modes(gamma)
    return ev[::-1][:n]


def is_valid_cm(gamma, tol: float = VALID_TOL) -> bool:
    lam = abs_lambdas(gamma)
    return bool(lam.size == 0 or lam[0] <= 1.0 + tol)


def require_valid(gamma, exc=InvalidCM) -> np.ndarray:
    gamma = _as_cm(gamma)
    if not is_valid_cm(gamma):
        raise exc(f"largest canonical value {abs_lambdas(gamma)[0]:.12g} exceeds 1")
    return gamma


def purity_defect(gamma) -> float:
    """Max-abs entry of ``gamma^2 + 1``; zero exactly for pure states."""
    gamma = require_valid(gamma)
    return max_abs(gamma @ gamma + np.eye(gamma.shape[0]))


def binary_entropy(p) -> np.ndarray | float:
    """Binary entropy in bits."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    return (entr(p) + entr(1.0 - p)) / np.log(2.0)


def entropy_bits(gamma) -> float:
    """Von Neumann entropy (bits) of the Gaussian state with CM ``gamma``."""
    gamma = require_valid(gamma)
    lam = np.clip(abs_lambdas(gamma), -1.0, 1.0)
    return float(np.sum(binary_entropy((1.0 + lam) / 2.0)))


def max_entangled(n: int) -> np.ndarray:
    """Pure CM of ``2n`` modes, each of the first ``n`` maximally entangled with its partner."""
    K = np.kron(np.eye(n), SIGMA_X)
    Z = np.zeros_like(K)
    return np.block([[Z, K], [-K, Z]])


def pure_mode_count(lambdas, tol: float = PURE_TOL) -> int:
    return int(np.sum(np.abs(lambdas) >= 1.0 - tol))


def purify(gamma) -> np.ndarray:
    """Purification with one auxiliary mode per mixed mode of ``gamma``.

    The result has ``2n - l`` modes (``l`` = number of pure modes); its
    leading ``2n x 2n`` block is ``gamma`` itself.  Each mixed mode with
    canonical value ``lambda`` is paired with an auxiliary mode through
    ``[[lambda J, kappa X], [-kappa X, lambda J]]``, ``kappa = sqrt(1 - lambda^2)``.
    """
    gamma = require_valid(gamma)
    n = modes(gamma)
    if n == 0:
        return gamma.copy()
    canon = antisym_canonical(gamma)
    mixed = [j for j, lam in enumerate(canon.lambdas) if abs(lam) < 1.0 - PURE_TOL]
    r = len(mixed)
    if r == 0:
        return gamma.copy()
    lam = np.clip(canon.lambdas[mixed], -1.0, 1.0)
    kappa = np.sqrt(1.0 - lam**2)
    K = np.zeros((2 * n, 2 * r))
    for a, (j, k) in enumerate(zip(mixed, kappa)):
        K[2 * j : 2 * j + 2, 2 * a : 2 * a + 2] = k * SIGMA_X
    C = canon.rotation @ K
    return np.block([[gamma, C], [-C.T, lambda_blocks(lam)]])


@dataclass(frozen=True)
class SchmidtForm:
    """Local normal form of a bipartite pure CM.

    In the rotated frame ``(O_A + O_B)^T Gamma (O_A + O_B)`` the left modes
    are ordered pure-first and then mixed (``lambdas`` sorted by ``|lambda|``
    descending), each mixed left mode ``j`` is paired with right mode ``j``
    through ``kappa_j sigma_x``, and the remaining right modes are pure with
    values ``right_pure``.
    """

    left_modes: int
    right_modes: int
    pure_left: int
    lambdas: np.ndarray
    kappas: np.ndarray
    right_pure: np.ndarray
    local_rotations: tuple[np.ndarray, np.ndarray]

    def normal_form(self) -> np.ndarray:
        n, m, l = self.left_modes, self.right_modes, self.pure_left
        r = n - l
        mixed = self.lambdas[l:]
        left = lambda_blocks(self.lambdas)
        right = lambda_blocks(np.concatenate([mixed, self.right_pure]))
        K = np.zeros((2 * n, 2 * m))
        for j, k in enumerate(self.kappas[:r]):
            K[2 * (l + j) : 2 * (l + j) + 2, 2 * j : 2 * j + 2] = k * SIGMA_X
        return np.block([[left, K], [-K.T, right]])

    def reconstruct(self) -> np.ndarray:
        O = block_diag(*self.local_rotations)
        return O @ self.normal_form() @ O.T


def schmidt_form(Gamma, n: int, m: int, tol: float = 1e-8) -> SchmidtForm:
    """Bring a pure ``(n + m)``-mode CM to its bipartite normal form by local rotations."""
    Gamma = require_valid(Gamma)
    if n < 0 or m < 0 or Gamma.shape[0] != 2 * (n + m):
        raise BadPartition(f"CM of {modes(Gamma)} modes cannot be split as {n} + {m}")
    if max_abs(Gamma @ Gamma + np.eye(Gamma.shape[0])) > tol:
        raise NotPure("Schmidt form requires a pure state")
    G11 = Gamma[: 2 * n, : 2 * n]
    G12 = Gamma[: 2 * n, 2 * n :]
    G22 = Gamma[2 * n :, 2 * n :]

    canon = antisym_canonical(G11) if n else None
    lam = canon.lambdas if n else np.zeros(0)
    order = np.argsort(-np.abs(lam), kind="stable")
    lam = lam[order]
    OA = canon.rotation[:, np.ravel([[2 * j, 2 * j + 1] for j in order])] if n else np.zeros((0, 0))
    pure = np.abs(lam) >= 1.0 - PURE_TOL
    l = int(np.sum(pure))
    lam[pure] = np.sign(lam[pure])
    r = n - l

    # right partners of mixed left modes are read off the coupling block
    C = OA.T @ G12
    kappas = np.sqrt(np.clip(1.0 - lam[l:] ** 2, 0.0, None))
    partners = []
    for j in range(r):
        row1 = C[2 * (l + j)]
        row2 = C[2 * (l + j) + 1]
        partners += [row2 / kappas[j], row1 / kappas[j]]
    F = np.column_stack(partners) if partners else np.zeros((2 * m, 0))

    # remaining right modes are pure; canonicalise them inside the complement
    if 2 * m - F.shape[1] > 0:
        if F.shape[1]:
            u, _, _ = np.linalg.svd(F, full_matrices=True)
            V = u[:, F.shape[1] :]
        else:
            V = np.eye(2 * m)
        sub = antisym_canonical(V.T @ G22 @ V)
        V = V @ sub.rotation
        right_pure = np.sign(sub.lambdas)
        right_pure[right_pure == 0] = 1.0
    else:
        V = np.zeros((2 * m, 0))
        right_pure = np.zeros(0)
    OB = np.column_stack([F, V]) if m else np.zeros((0, 0))

    # prefer proper rotations: flip a pure mode's orientation when one is available
    if m and np.linalg.det(OB) < 0 and len(right_pure):
        OB[:, [-2, -1]] = OB[:, [-1, -2]]
        right_pure[-1] = -right_pure[-1]
    if n and np.linalg.det(OA) < 0 and l:
        OA[:, [2 * l - 2, 2 * l - 1]] = OA[:, [2 * l - 1, 2 * l - 2]]
        lam[l - 1] = -lam[l - 1]
    if n and m and r and np.linalg.det(OA) < 0 and np.linalg.det(OB) < 0:
        j = n - 1
        OA[:, [2 * j, 2 * j + 1]] = OA[:, [2 * j + 1, 2 * j]]
        OB[:, [2 * (r - 1), 2 * r - 1]] = OB[:, [2 * r - 1, 2 * (r - 1)]]
        lam[j] = -lam[j]
    return SchmidtForm(n, m, l, lam, kappas, right_pure, (OA, OB))


def cm_to_json(gamma) -> dict:
    gamma = np.asarray(gamma, dtype=float)
    return {"modes": modes(gamma), "matrix": gamma.tolist()}


def cm_from_json(obj: dict) -> np.ndarray:
    n = int(obj["modes"])
    gamma = np.array(obj["matrix"], dtype=float)
    if gamma.shape != (2 * n, 2 * n):
        raise ShapeMismatch(f"matrix shape {gamma.shape} does not match modes={n}")
    return _as_cm(gamma)
