"""Real-matrix primitives used throughout the package.

Conventions: ``J = [[0, -1], [1, 0]]`` and an antisymmetric matrix is said to
be in canonical form when it equals ``O (+)_j lambda_j J O^T`` with
``O`` special orthogonal.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.linalg import block_diag, cossin, schur

from .errors import (
    BadPartition,
    Indefinite,
    IndexOutOfRange,
    NotAntisymmetric,
    NotHermitian,
    NotOrthogonal,
    NotSpecialOrthogonal,
    NotSymmetric,
    OddDimension,
    ShapeMismatch,
)

# Shared numerical thresholds.
TOL_ORTH = 1e-9
PURE_TOL = 1e-9  # |lambda| >= 1 - PURE_TOL counts as a pure mode
PERFECT_TOL = 1e-9  # singular value >= 1 - PERFECT_TOL counts as perfect transmission
GROUP_TOL = 1e-8  # singular / canonical values closer than this form one block
PSD_TOL = 1e-9
CLIP_TOL = 1e-10

J = np.array([[0.0, -1.0], [1.0, 0.0]])
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


class AntisymCanonical(NamedTuple):
    rotation: np.ndarray
    lambdas: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.rotation @ lambda_blocks(self.lambdas) @ self.rotation.T


class SVDResult(NamedTuple):
    O1: np.ndarray
    d: np.ndarray
    O2: np.ndarray

    def padded(self) -> np.ndarray:
        """The rectangular diagonal middle factor."""
        out = np.zeros((self.O1.shape[0], self.O2.shape[0]))
        k = len(self.d)
        out[:k, :k] = np.diag(self.d)
        return out

    def reconstruct(self) -> np.ndarray:
        return self.O1 @ self.padded() @ self.O2


class CSDecomposition(NamedTuple):
    Q1: np.ndarray
    Q2: np.ndarray
    d: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    s: np.ndarray  # sqrt(1 - d^2), kept separately for accuracy near d = 1

    def middle(self) -> np.ndarray:
        return cs_middle(self.d, self.Q2.shape[0], self.s)

    def reconstruct(self) -> np.ndarray:
        return block_diag(self.Q1, self.Q2) @ self.middle() @ block_diag(self.R1, self.R2)


def omega(n: int) -> np.ndarray:
    """Direct sum of ``n`` copies of ``J`` (the n-mode vacuum CM)."""
    return np.kron(np.eye(n), J)


def lambda_blocks(lambdas) -> np.ndarray:
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        return np.zeros((0, 0))
    return np.kron(np.diag(lambdas), J)


def max_abs(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def orthogonality_residual(O) -> float:
    O = np.asarray(O, dtype=float)
    return max_abs(O.T @ O - np.eye(O.shape[1]))


def is_orthogonal(O, tol: float = TOL_ORTH) -> bool:
    O = np.asarray(O)
    return O.ndim == 2 and O.shape[0] == O.shape[1] and orthogonality_residual(O) <= tol


def check_antisymmetric(M, rtol: float = 1e-10) -> np.ndarray:
    """Return the antisymmetric part of ``M`` after checking it is close to ``M``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {M.shape}")
    scale = max(np.linalg.norm(M), 1.0)
    if max_abs(M + M.T) > rtol * scale:
        raise NotAntisymmetric(f"antisymmetry residual {max_abs(M + M.T):.3e}")
    return 0.5 * (M - M.T)


def group_values(values, tol: float = GROUP_TOL) -> list[tuple[float, int]]:
    """Group sorted values into ``(mean, multiplicity)`` runs.

    Consecutive entries closer than ``tol`` share a group.
    """
    groups: list[list[float]] = []
    for v in values:
        if groups and abs(groups[-1][-1] - v) <= tol:
            groups[-1].append(float(v))
        else:
            groups.append([float(v)])
    return [(float(np.mean(g)), len(g)) for g in groups]


def antisym_canonical(M) -> AntisymCanonical:
    """Bring a real antisymmetric matrix to canonical form.

    Finds ``O`` in SO(2n) and ``lambdas`` (sorted descending) with
    ``M = O (+)_j lambda_j J O^T``. All lambdas are non-negative except
    possibly the last one, whose sign absorbs the determinant of the
    eigenbasis.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] % 2:
        raise OddDimension(f"dimension {M.shape[0]} is odd")
    M = check_antisymmetric(M)
    N = M.shape[0]
    if N == 0:
        return AntisymCanonical(np.zeros((0, 0)), np.zeros(0))

    T, Z = schur(M, output="real")
    pairs: list[tuple[float, np.ndarray, np.ndarray]] = []
    singles: list[int] = []
    i = 0
    while i < N:
        if i + 1 < N and T[i + 1, i] != 0.0:
            b = 0.5 * (T[i, i + 1] - T[i + 1, i])
            x, y = Z[:, i], Z[:, i + 1]
            # block [[0, b], [-b, 0]] = -b J on (x, y)
            lam = -b
            if lam < 0:
                x, y, lam = y, x, -lam
            pairs.append((lam, x, y))
            i += 2
        else:
            singles.append(i)
            i += 1
    for a, b in zip(singles[::2], singles[1::2]):
        pairs.append((0.0, Z[:, a], Z[:, b]))

    pairs.sort(key=lambda p: -p[0])
    lambdas = np.array([p[0] for p in pairs])
    O = np.column_stack([v for p in pairs for v in (p[1], p[2])])
    if np.linalg.det(O) < 0:
        O[:, [-2, -1]] = O[:, [-1, -2]]
        lambdas[-1] = -lambdas[-1]
    return AntisymCanonical(O, lambdas)


def svd_so(A, zero_tol: float = 1e-14) -> SVDResult:
    """SVD ``A = O1 [D 0; 0 0] O2`` with D >= 0 descending.

    The determinant of each factor is made +1 by flipping singular vectors
    that sit in the zero space (or in a zero singular value). When ``A`` is
    square with ``det A < 0`` and no zero singular value this is impossible
    with ``D >= 0``; ``O2`` then keeps determinant -1 (still a Gaussian
    unitary, realised by an odd operator).
    """
    A = np.asarray(A, dtype=float)
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    r = len(s)
    zeros = [k for k in range(r) if s[k] <= zero_tol * max(1.0, s[0] if r else 1.0)]

    def negative(F):
        return F.shape[0] > 0 and np.linalg.det(F) < 0

    def flip_free(F, rows: bool) -> bool:
        # flip a singular vector that does not touch the product
        if F.shape[0] > r:
            idx = F.shape[0] - 1
        elif zeros:
            idx = zeros[-1]
        else:
            return False
        if rows:
            F[idx] *= -1
        else:
            F[:, idx] *= -1
        return True

    def flip_pair():
        U[:, r - 1] *= -1
        Vt[r - 1] *= -1

    def has_free(F) -> bool:
        return F.shape[0] > r or bool(zeros)

    if negative(U) and negative(Vt) and r:
        flip_pair()
    if negative(U) and not flip_free(U, rows=False) and r:
        flip_pair()
        flip_free(Vt, rows=True)
    if negative(Vt) and not flip_free(Vt, rows=True) and r and has_free(U):
        flip_pair()
        flip_free(U, rows=False)
    return SVDResult(U, s, Vt)


def psd_min_eig(H, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Return ``(is_psd, min_eig)`` for a Hermitian matrix.

    ``is_psd`` allows a slack of ``tol * max(1, ||H||)``.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {H.shape}")
    if H.size == 0:
        return True, 0.0
    scale = max(np.linalg.norm(H), 1.0)
    if max_abs(H - H.conj().T) > 1e-10 * scale:
        raise NotHermitian(f"hermiticity residual {max_abs(H - H.conj().T):.3e}")
    ev = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    min_eig = float(ev[0])
    norm = float(np.max(np.abs(ev)))
    return min_eig >= -tol * max(1.0, norm), min_eig


def doubled_real_form(X, Y) -> np.ndarray:
    """``[[X, Y], [Y^T, X]]``, PSD exactly when ``X + iY`` is (X sym., Y antisym.)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return np.block([[X, Y], [Y.T, X]])


def complex_form_psd(X, Y, tol: float = PSD_TOL) -> bool:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ShapeMismatch(f"shapes {X.shape} and {Y.shape} do not match")
    return psd_min_eig(X + 1j * Y, tol)[0]


def pinv_sqrt(S, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse square root of a symmetric PSD matrix.

    Eigenvalues below ``rank_tol`` (default ``1e-10 * max eig``) are treated
    as kernel and map to zero.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {S.shape}")
    if S.size == 0:
        return np.zeros_like(S)
    scale = max(np.linalg.norm(S), 1.0)
    if max_abs(S - S.T) > 1e-10 * scale:
        raise NotSymmetric(f"symmetry residual {max_abs(S - S.T):.3e}")
    w, V = np.linalg.eigh(0.5 * (S + S.T))
    if w[0] < -1e-8 * scale:
        raise Indefinite(f"eigenvalue {w[0]:.3e} is negative")
    w = np.clip(w, 0.0, None)
    if rank_tol is None:
        rank_tol = 1e-10 * w[-1]
    inv = np.zeros_like(w)
    keep = w > rank_tol
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return (V * inv) @ V.T


def psd_sqrt(S) -> np.ndarray:
    """Symmetric square root with small negative eigenvalues clipped."""
    S = np.asarray(S, dtype=float)
    if S.size == 0:
        return np.zeros_like(S)
    w, V = np.linalg.eigh(0.5 * (S + S.T))
    if w[0] < -1e-8 * max(1.0, abs(w[-1])):
        raise Indefinite(f"eigenvalue {w[0]:.3e} is negative")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def cs_middle(d, second_dim: int, s=None) -> np.ndarray:
    """``[[D, S, 0], [-S, D, 0], [0, 0, 1]]`` with ``S = sqrt(1 - D^2)``."""
    d = np.asarray(d, dtype=float)
    p = len(d)
    k = second_dim - p
    D = np.diag(d)
    if s is None:
        s = np.sqrt(np.clip(1.0 - d**2, 0.0, None))
    S = np.diag(s)
    Z = np.zeros((p, k))
    return np.block(
        [
            [D, S, Z],
            [-S, D, Z],
            [Z.T, Z.T, np.eye(k)],
        ]
    )


def cs_decompose(O, n: int, m: int) -> CSDecomposition:
    """Cosine-sine decomposition of a bipartite orthogonal matrix.

    ``O = (Q1 + Q2) [[D, S, 0], [-S, D, 0], [0, 0, 1]] (R1 + R2)`` where the
    first factor of each direct sum acts on the first ``2n`` coordinates and
    ``1 >= D >= 0`` is diagonal, sorted descending.
    """
    O = np.asarray(O, dtype=float)
    if n < 0 or m < n:
        raise BadPartition(f"need 0 <= n <= m, got n={n}, m={m}")
    N = 2 * (n + m)
    if O.shape != (N, N):
        raise BadPartition(f"matrix shape {O.shape} does not match 2(n+m)={N}")
    if not is_orthogonal(O, 1e-8):
        raise NotOrthogonal(f"orthogonality residual {orthogonality_residual(O):.3e}")
    p = 2 * n
    if p == 0:
        empty = np.zeros((0, 0))
        return CSDecomposition(empty, O.copy(), np.zeros(0), empty, np.eye(N), np.zeros(0))

    (u1, u2), _, (v1h, v2h) = cossin(O, p=p, q=p, separate=True)
    Q1, Q2, R1, R2 = u1.copy(), u2.copy(), v1h.copy(), v2h.copy()
    M = block_diag(Q1, Q2).T @ O @ block_diag(R1, R2).T

    # first block: non-negative, descending diagonal
    for i in range(p):
        if M[i, i] < 0:
            M[i, :] *= -1
            Q1[:, i] *= -1
    order = np.argsort(-np.diag(M)[:p], kind="stable")
    perm = np.concatenate([order, np.arange(p, N)])
    M = M[perm][:, perm]
    Q1 = Q1[:, order]
    R1 = R1[order]

    # pair every first-block coordinate with its coupled second-block coordinate
    q = N - p
    col_partner: list[int | None] = []
    row_partner: list[int | None] = []
    used_c: set[int] = set()
    used_r: set[int] = set()
    for i in range(p):
        j = int(np.argmax(np.abs(M[i, p:])))
        if abs(M[i, p + j]) > 1e-13 and j not in used_c:
            col_partner.append(j)
            used_c.add(j)
        else:
            col_partner.append(None)
        j = int(np.argmax(np.abs(M[p:, i])))
        if abs(M[p + j, i]) > 1e-13 and j not in used_r:
            row_partner.append(j)
            used_r.add(j)
        else:
            row_partner.append(None)
    free_c = iter(j for j in range(q) if j not in used_c)
    free_r = iter(j for j in range(q) if j not in used_r)
    col_order = [j if j is not None else next(free_c) for j in col_partner] + list(free_c)
    row_order = [j if j is not None else next(free_r) for j in row_partner] + list(free_r)
    M = np.concatenate([M[:p], M[p:][row_order]])
    M = np.concatenate([M[:, :p], M[:, p:][:, col_order]], axis=1)
    Q2 = Q2[:, row_order]
    R2 = R2[col_order]

    for i in range(p):
        if M[i, p + i] < 0:
            M[:, p + i] *= -1
            R2[i] *= -1
        if M[p + i, i] > 0:
            M[p + i, :] *= -1
            Q2[:, i] *= -1
    for j in range(p, q):
        if M[p + j, p + j] < 0:
            M[p + j, :] *= -1
            Q2[:, j] *= -1
    for i in range(p):
        # uncoupled coordinates (D = 1) may still carry a sign on the partner
        if col_partner[i] is None and M[p + i, p + i] < 0:
            M[p + i, :] *= -1
            Q2[:, i] *= -1

    coupling = np.array([M[i, p + i] if col_partner[i] is not None else 0.0 for i in range(p)])
    theta = np.arctan2(np.clip(coupling, 0.0, None), np.clip(np.diag(M)[:p], 0.0, None))
    return CSDecomposition(Q1, Q2, np.cos(theta), R1, R2, np.sin(theta))


def so_log(O) -> np.ndarray:
    """Principal real logarithm of a special orthogonal matrix.

    Returns antisymmetric ``h`` with ``expm(h) = O``; rotation angles lie in
    ``(-pi, pi]``.
    """
    O = np.asarray(O, dtype=float)
    if not is_orthogonal(O, 1e-8):
        raise NotOrthogonal(f"orthogonality residual {orthogonality_residual(O):.3e}")
    N = O.shape[0]
    if N == 0:
        return np.zeros((0, 0))
    if np.linalg.det(O) < 0:
        raise NotSpecialOrthogonal("determinant is -1")
    T, Z = schur(O, output="real")
    H = np.zeros((N, N))
    minus: list[int] = []
    i = 0
    while i < N:
        if i + 1 < N and T[i + 1, i] != 0.0:
            c = 0.5 * (T[i, i] + T[i + 1, i + 1])
            s = 0.5 * (T[i + 1, i] - T[i, i + 1])
            theta = np.arctan2(s, c)
            H[i : i + 2, i : i + 2] = theta * J
            i += 2
        else:
            if T[i, i] < 0:
                minus.append(i)
            i += 1
    # -1 eigenvalues come in pairs; each pair is a rotation by pi
    for a, b in zip(minus[::2], minus[1::2]):
        H[a, b] = -np.pi
        H[b, a] = np.pi
    h = Z @ H @ Z.T
    return 0.5 * (h - h.T)


def horn_check(X, Y, i: int, j: int, k: int, slack: float = 1e-10) -> bool:
    """Check ``nu_k <= lambda_i + mu_j`` for descending eigenvalues (1-based).

    ``lambda``, ``mu`` and ``nu`` are the spectra of ``X``, ``Y`` and
    ``X + Y``; the inequality is required for ``i + j = k + 1``.
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ShapeMismatch(f"shapes {X.shape} and {Y.shape} do not match")
    N = X.shape[0]
    if i + j != k + 1 or not (1 <= i <= N and 1 <= j <= N and 1 <= k <= N):
        raise IndexOutOfRange(f"(i, j, k) = ({i}, {j}, {k}) invalid for dimension {N}")
    lam = np.linalg.eigvalsh(X)[::-1]
    mu = np.linalg.eigvalsh(Y)[::-1]
    nu = np.linalg.eigvalsh(X + Y)[::-1]
    return bool(nu[k - 1] <= lam[i - 1] + mu[j - 1] + slack)
