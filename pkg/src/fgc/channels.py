"""Fermionic Gaussian channels ``gamma -> A gamma A^T + B``.

A channel from ``n`` to ``m`` modes is stored as the pair ``(A, B)`` with
``A`` of shape ``2m x 2n`` and ``B`` antisymmetric ``2m x 2m``.  It is
completely positive iff ``1 - iB - A A^T >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .errors import (
    InvalidChannel,
    InvalidInput,
    NotAntisymmetric,
    NotAntisymmetricB,
    NotSquareChannel,
    NotStandardForm,
    ShapeMismatch,
)
from .linalg import (
    PERFECT_TOL,
    PSD_TOL,
    check_antisymmetric,
    max_abs,
    omega,
    orthogonality_residual,
    pinv_sqrt,
    psd_min_eig,
    svd_so,
)
from .states import abs_lambdas, is_valid_cm, max_entangled, pure_mode_count, purify

KERNEL_TOL = 2 * PERFECT_TOL  # eigenvalue of 1 - A A^T below this: perfectly transmitted
CHOI_KERNEL_TOL = 1e-8
STANDARD_TOL = 1e-12


@dataclass(frozen=True)
class GaussianChannel:
    """Channel ``gamma -> A gamma A^T + B`` from ``n_in`` to ``n_out`` modes."""

    A: np.ndarray
    B: np.ndarray
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        if A.ndim != 2 or B.ndim != 2:
            raise ShapeMismatch("A and B must be matrices")
        if A.shape[0] % 2 or A.shape[1] % 2:
            raise ShapeMismatch(f"A has odd shape {A.shape}")
        if B.shape != (A.shape[0], A.shape[0]):
            raise ShapeMismatch(f"B has shape {B.shape}, expected {(A.shape[0],) * 2}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
            raise ShapeMismatch("A and B must have finite entries")
        try:
            B = check_antisymmetric(B)
        except NotAntisymmetric as exc:
            raise NotAntisymmetricB(str(exc)) from None
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n_in(self) -> int:
        return self.A.shape[1] // 2

    @property
    def n_out(self) -> int:
        return self.A.shape[0] // 2

    @property
    def is_square(self) -> bool:
        return self.n_in == self.n_out

    def __call__(self, gamma) -> np.ndarray:
        return apply(self, gamma)

    def to_json(self) -> dict:
        out = {"n_in": self.n_in, "n_out": self.n_out, "A": self.A.tolist(), "B": self.B.tolist()}
        if self.label is not None:
            out["label"] = self.label
        return out

    @classmethod
    def from_json(cls, obj: dict) -> GaussianChannel:
        return channel_from_json(obj)


def _matrix(rows, name: str, shape: tuple[int, int]) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != shape[0]:
        got = len(rows) if isinstance(rows, list) else type(rows).__name__
        raise ShapeMismatch(f"{name}: expected {shape[0]} rows, got {got}")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ShapeMismatch(f"{name}: row {i} has {got} entries, expected {shape[1]}")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ShapeMismatch(f"{name}[{i}][{j}] = {x!r} is not a number")
    return np.array(rows, dtype=float).reshape(shape)


def channel_from_json(obj: dict) -> GaussianChannel:
    """Parse ``{"n_in", "n_out", "A", "B"}``; shape errors name the offending row/column."""
    if not isinstance(obj, dict):
        raise ShapeMismatch("channel must be a JSON object")
    for key in ("n_in", "n_out", "A", "B"):
        if key not in obj:
            raise ShapeMismatch(f"missing key {key!r}")
    n, m = int(obj["n_in"]), int(obj["n_out"])
    if n < 0 or m < 0:
        raise ShapeMismatch("mode counts must be non-negative")
    A = _matrix(obj["A"], "A", (2 * m, 2 * n))
    B = _matrix(obj["B"], "B", (2 * m, 2 * m))
    return GaussianChannel(A, B, label=obj.get("label"))


def identity_channel(n: int) -> GaussianChannel:
    return GaussianChannel(np.eye(2 * n), np.zeros((2 * n, 2 * n)))


def constant_channel(gamma, n_in: int) -> GaussianChannel:
    """Channel that discards its input and prepares ``gamma``."""
    gamma = np.asarray(gamma, dtype=float)
    return GaussianChannel(np.zeros((gamma.shape[0], 2 * n_in)), gamma)


def cp_matrix(T: GaussianChannel) -> np.ndarray:
    return np.eye(T.A.shape[0]) - 1j * T.B - T.A @ T.A.T


def validate(T: GaussianChannel, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Return ``(valid, min_eig)`` of ``1 - iB - A A^T``."""
    if T.n_out == 0:
        return True, 0.0
    return psd_min_eig(cp_matrix(T), tol)


def require_valid_channel(T: GaussianChannel) -> GaussianChannel:
    valid, min_eig = validate(T)
    if not valid:
        raise InvalidChannel(f"1 - iB - AA^T has eigenvalue {min_eig:.3e}")
    return T


def apply(T: GaussianChannel, gamma) -> np.ndarray:
    require_valid_channel(T)
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (2 * T.n_in, 2 * T.n_in):
        raise ShapeMismatch(f"input CM has shape {gamma.shape}, channel expects {T.n_in} modes")
    try:
        ok = is_valid_cm(gamma)
    except NotAntisymmetric as exc:
        raise InvalidInput(str(exc)) from None
    if not ok:
        raise InvalidInput("input is not a valid covariance matrix")
    return T.A @ gamma @ T.A.T + T.B


def compose(T2: GaussianChannel, T1: GaussianChannel) -> GaussianChannel:
    """``T2 o T1`` (apply ``T1`` first)."""
    if T1.n_out != T2.n_in:
        raise ShapeMismatch(f"cannot compose {T1.n_out}-mode output with {T2.n_in}-mode input")
    return GaussianChannel(T2.A @ T1.A, T2.A @ T1.B @ T2.A.T + T2.B)


def direct_sum(*channels: GaussianChannel) -> GaussianChannel:
    return GaussianChannel(block_diag(*[T.A for T in channels]), block_diag(*[T.B for T in channels]))


def rotate(T: GaussianChannel, O_post, O_pre) -> GaussianChannel:
    """``U_{O_post} o T o U_{O_pre}`` at the CM level."""
    O_post = np.asarray(O_post, dtype=float)
    return GaussianChannel(O_post @ T.A @ np.asarray(O_pre, dtype=float), O_post @ T.B @ O_post.T)


def channel_distance(T1: GaussianChannel, T2: GaussianChannel) -> float:
    if T1.A.shape != T2.A.shape:
        return np.inf
    return max(max_abs(T1.A - T2.A), max_abs(T1.B - T2.B))


@dataclass(frozen=True)
class ChannelStandardForm:
    """``T = U_{O1} o T_std o U_{O2}`` with ``T_std = (D padded, B_std)``."""

    O1: np.ndarray
    O2: np.ndarray
    d: np.ndarray
    B_std: np.ndarray

    @property
    def A_std(self) -> np.ndarray:
        out = np.zeros((self.O1.shape[0], self.O2.shape[0]))
        k = len(self.d)
        out[:k, :k] = np.diag(self.d)
        return out

    def channel(self) -> GaussianChannel:
        return GaussianChannel(self.A_std, self.B_std)

    def reassemble(self) -> GaussianChannel:
        return rotate(self.channel(), self.O1, self.O2)


def standard_form(T: GaussianChannel) -> ChannelStandardForm:
    require_valid_channel(T)
    svd = svd_so(T.A)
    B_std = check_antisymmetric(svd.O1.T @ T.B @ svd.O1)
    return ChannelStandardForm(svd.O1, svd.O2, svd.d, B_std)


def is_standard_form(T: GaussianChannel, tol: float = STANDARD_TOL) -> bool:
    k = 2 * min(T.n_in, T.n_out)
    d = np.diag(T.A)[:k] if k else np.zeros(0)
    off = T.A.copy()
    off[np.arange(k), np.arange(k)] = 0.0
    return bool(max_abs(off) <= tol and np.all(d >= -tol) and np.all(np.diff(d) <= tol))


def split_perfect_modes(T_std: GaussianChannel) -> tuple[int, GaussianChannel]:
    """Strip the perfectly transmitted modes of a standard-form channel.

    ``L`` singular values at least ``1 - 1e-9`` give ``L // 2`` identity modes;
    the returned remainder keeps at most one unit singular value.
    """
    if not is_standard_form(T_std):
        raise NotStandardForm("channel A is not diagonal with descending non-negative entries")
    d = np.diag(T_std.A)
    k = int(np.sum(d >= 1.0 - PERFECT_TOL)) // 2
    rest = GaussianChannel(T_std.A[2 * k :, 2 * k :], T_std.B[2 * k :, 2 * k :])
    return k, rest


def choi_cm(T: GaussianChannel) -> np.ndarray:
    """CM of ``(T (x) id)`` applied to ``max_entangled(n_in)``; output modes come first."""
    require_valid_channel(T)
    n = T.n_in
    G = max_entangled(n)
    L = block_diag(T.A, np.eye(2 * n))
    return L @ G @ L.T + block_diag(T.B, np.zeros((2 * n, 2 * n)))


def choi_rank_modes(T: GaussianChannel, tol: float = CHOI_KERNEL_TOL) -> int:
    """``2n - dim ker(1 - A A^T - iB)`` for an ``n -> n`` channel."""
    if not T.is_square:
        raise NotSquareChannel(f"{T.n_in} -> {T.n_out} channel")
    require_valid_channel(T)
    if T.n_in == 0:
        return 0
    ev = np.linalg.eigvalsh(cp_matrix(T))
    return 2 * T.n_in - int(np.sum(ev <= tol))


@dataclass(frozen=True)
class Dilation:
    """Orthogonal system-environment coupling with a pure environment.

    Coordinates of ``O_SE``: columns are ``[system in (2n) | env (2m) | aux
    (2(m-l))]`` and rows are ``[system out (2m) | env out (2n) | aux]``.
    ``gamma_E`` is the pure CM of the ``2m - l`` environment modes, a
    purification of ``B_prime``.
    """

    O_SE: np.ndarray
    gamma_E: np.ndarray
    pure_env_modes: int
    B_prime: np.ndarray
    n_in: int
    n_out: int

    @property
    def env_modes(self) -> int:
        return self.gamma_E.shape[0] // 2

    def joint_output(self, gamma) -> np.ndarray:
        G = block_diag(np.asarray(gamma, dtype=float), self.gamma_E)
        return self.O_SE @ G @ self.O_SE.T

    def system_output(self, gamma) -> np.ndarray:
        k = 2 * self.n_out
        return self.joint_output(gamma)[:k, :k]

    def environment_output(self, gamma) -> np.ndarray:
        k = 2 * self.n_out
        return self.joint_output(gamma)[k:, k:]


def effective_env(T: GaussianChannel) -> np.ndarray:
    """``B' = W B W`` with ``W`` the pseudo-inverse square root of ``1 - A A^T``.

    On perfectly transmitted directions ``B'`` is undefined; it is completed
    with pure vacuum pairs there (one Majorana stays at zero if the kernel is
    odd-dimensional), so that e.g. the identity channel gets a pure
    environment.
    """
    S = np.eye(T.A.shape[0]) - T.A @ T.A.T
    if S.size == 0:
        return np.zeros((0, 0))
    W = pinv_sqrt(S, rank_tol=KERNEL_TOL)
    Bp = W @ T.B @ W
    w, V = np.linalg.eigh(0.5 * (S + S.T))
    K = V[:, w <= KERNEL_TOL]
    pairs = K.shape[1] // 2
    if pairs:
        Kp = K[:, : 2 * pairs]
        Bp = Bp + Kp @ omega(pairs) @ Kp.T
    return check_antisymmetric(Bp)


def defect_roots(A) -> tuple[np.ndarray, np.ndarray]:
    """``sqrt(1 - A A^T)`` and ``sqrt(1 - A^T A)`` from one SVD of ``A``.

    Sharing the singular vectors keeps ``A sqrt(1 - A^T A) = sqrt(1 - A A^T) A``
    exact to rounding even when ``A`` has singular values at 1.
    """
    A = np.asarray(A, dtype=float)
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    c = np.sqrt(np.clip(1.0 - s**2, 0.0, None))
    c_out = np.ones(A.shape[0])
    c_in = np.ones(A.shape[1])
    c_out[: len(s)] = c
    c_in[: len(s)] = c
    return (U * c_out) @ U.T, (Vt.T * c_in) @ Vt


def dilation(T: GaussianChannel) -> Dilation:
    require_valid_channel(T)
    n, m = T.n_in, T.n_out
    A = T.A
    Bp = effective_env(T)
    l = pure_mode_count(abs_lambdas(Bp)) if m else 0
    gamma_E = purify(Bp) if m else np.zeros((0, 0))
    S_out, S_in = defect_roots(A)
    O = np.block([[A, S_out], [-S_in, A.T]])
    O_SE = block_diag(O, np.eye(2 * (m - l)))
    res = orthogonality_residual(O_SE)
    if res > 1e-9:
        raise InvalidChannel(f"dilation is not orthogonal (residual {res:.2e})")
    return Dilation(O_SE, gamma_E, l, Bp, n, m)


def complement(T: GaussianChannel, dil: Dilation | None = None) -> GaussianChannel:
    """Complementary channel ``n -> n + m - l`` for the pure-environment dilation."""
    dil = dilation(T) if dil is None else dil
    n, m, l = T.n_in, T.n_out, dil.pure_env_modes
    extra = 2 * (m - l)
    A_c = np.vstack([defect_roots(T.A)[1], np.zeros((extra, 2 * n))])
    L = block_diag(T.A, np.eye(extra))
    B_c = L.T @ dil.gamma_E @ L
    return GaussianChannel(A_c, B_c)
