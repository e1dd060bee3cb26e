"""Dense Fock-space oracle for small mode numbers.

Majorana operators follow the Jordan-Wigner construction
``c_{2k-1} = Z..Z X``, ``c_{2k} = Z..Z Y`` acting on site ``k``.  With this
choice the all-zeros basis state has CM ``J`` per mode, and a single mode
``diag((1 + lam)/2, (1 - lam)/2)`` has CM ``lam J``.

A Gaussian unitary ``U(O)`` is fixed by ``U c_k U^dag = sum_l O_kl c_l``;
the covariance matrix then transforms as ``gamma -> O^T gamma O`` under
``rho -> U rho U^dag``, so ``U(O^T)`` implements ``gamma -> O gamma O^T``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from .channels import GaussianChannel, dilation, require_valid_channel
from .errors import NotDensityMatrix, NotOrthogonal, TooManyModes
from .linalg import antisym_canonical, is_orthogonal, so_log
from .states import max_entangled, require_valid

MAX_MODES = 9  # dimension 512
DM_TOL = 1e-10
EIG_CUTOFF = 1e-14

_X = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
_Y = sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex))
_Z = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))


def _check_modes(n: int) -> None:
    if n > MAX_MODES:
        raise TooManyModes(f"{n} modes exceed the dense limit of {MAX_MODES}")


def _site_op(ops) -> sp.csr_matrix:
    out = sp.identity(1, dtype=complex, format="csr")
    for op in ops:
        out = sp.kron(out, op, format="csr")
    return out


@lru_cache(maxsize=None)
def majoranas(n: int) -> tuple[sp.csr_matrix, ...]:
    """The ``2n`` Jordan-Wigner Majorana operators as sparse matrices."""
    if n < 1:
        raise TooManyModes("at least one mode is required")
    _check_modes(n)
    eye = sp.identity(2, dtype=complex, format="csr")
    out = []
    for k in range(n):
        pre = [_Z] * k
        post = [eye] * (n - k - 1)
        out.append(_site_op(pre + [_X] + post))
        out.append(_site_op(pre + [_Y] + post))
    return tuple(out)


def parity(n: int) -> sp.csr_matrix:
    """Total parity ``Z (x) ... (x) Z`` (+1 on the vacuum)."""
    _check_modes(n)
    return _site_op([_Z] * n)


def modes_of(rho: np.ndarray) -> int:
    dim = rho.shape[0]
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if dim < 2 or 2**n != dim or rho.shape != (dim, dim):
        raise NotDensityMatrix(f"shape {rho.shape} is not 2^n x 2^n")
    return n


def check_density_matrix(rho, tol: float = DM_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2:
        raise NotDensityMatrix("not a matrix")
    modes_of(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise NotDensityMatrix("not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise NotDensityMatrix(f"trace {np.trace(rho).real:.12g}")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -tol:
        raise NotDensityMatrix("not positive semidefinite")
    return rho


def expectation(rho: np.ndarray, op) -> complex:
    """``tr(rho op)`` for a sparse or dense ``op``."""
    if sp.issparse(op):
        return complex(op.multiply(rho.T).sum())
    return complex(np.sum(op * rho.T))


def cm_from_state(rho) -> np.ndarray:
    """``gamma_kl = (i/2) tr(rho [c_k, c_l])``."""
    rho = check_density_matrix(rho)
    n = modes_of(rho)
    c = majoranas(n)
    gamma = np.zeros((2 * n, 2 * n))
    for k in range(2 * n):
        for l in range(k + 1, 2 * n):
            val = 1j * expectation(rho, c[k] @ c[l])
            gamma[k, l] = val.real
            gamma[l, k] = -val.real
    return gamma


def _generator(h: np.ndarray, c) -> sp.csr_matrix:
    dim = c[0].shape[0]
    X = sp.csr_matrix((dim, dim), dtype=complex)
    for k in range(h.shape[0]):
        for l in range(k + 1, h.shape[0]):
            if h[k, l] != 0.0:
                X = X + (0.5 * h[k, l]) * (c[k] @ c[l])
    return X


def unitary_from_orthogonal(O) -> np.ndarray:
    """Dense ``U`` with ``U c_k U^dag = sum_l O_kl c_l``.

    Proper rotations use ``U = exp(-(1/4) sum_kl h_kl c_k c_l)`` with
    ``h = log O``; improper ones are reduced to proper ones by a trailing
    factor ``c_{2n}`` (which reflects every Majorana except the last).
    """
    O = np.asarray(O, dtype=float)
    if not is_orthogonal(O) or O.shape[0] % 2:
        raise NotOrthogonal("expected an even-dimensional orthogonal matrix")
    n = O.shape[0] // 2
    c = majoranas(n)
    reflect = np.linalg.det(O) < 0
    if reflect:
        R = np.diag(np.r_[-np.ones(2 * n - 1), 1.0])
        O = R @ O
    h = so_log(O)
    U = expm(-_generator(h, c).toarray())
    if reflect:
        U = U @ c[-1].toarray()
    return U


def evolve(rho: np.ndarray, O) -> np.ndarray:
    """State whose CM is ``O gamma O^T`` when ``rho`` has CM ``gamma``."""
    U = unitary_from_orthogonal(np.asarray(O).T)
    return U @ rho @ U.conj().T


def state_from_cm(gamma) -> np.ndarray:
    """Gaussian density matrix with covariance matrix ``gamma``."""
    gamma = require_valid(gamma)
    n = gamma.shape[0] // 2
    _check_modes(n)
    canon = antisym_canonical(gamma)
    lam = np.clip(canon.lambdas, -1.0, 1.0)
    diag = np.ones(1)
    for x in lam:
        diag = np.kron(diag, [(1.0 + x) / 2.0, (1.0 - x) / 2.0])
    rho = np.diag(diag).astype(complex)
    rho = evolve(rho, canon.rotation)
    return 0.5 * (rho + rho.conj().T)


def partial_trace_tail(rho: np.ndarray, keep: int) -> np.ndarray:
    """Trace out all but the first ``keep`` modes."""
    n = modes_of(rho)
    a, b = 2**keep, 2 ** (n - keep)
    return np.einsum("ijkj->ik", rho.reshape(a, b, a, b))


def _mode_permutation(order) -> np.ndarray:
    """Orthogonal matrix sending mode ``order[i]`` to position ``i``."""
    idx = np.ravel([[2 * j, 2 * j + 1] for j in order])
    P = np.zeros((len(idx), len(idx)))
    P[np.arange(len(idx)), idx] = 1.0
    return P


def apply_channel_dense(T: GaussianChannel, rho, spectators: int = 0) -> np.ndarray:
    """Stinespring simulation of ``T`` on the first ``n_in`` modes of ``rho``.

    The state may carry ``spectators`` further modes (after the input ones)
    that the channel leaves alone; the output lists the ``n_out`` channel
    outputs first, then the spectators.
    """
    require_valid_channel(T)
    rho = check_density_matrix(rho)
    n, m, s = T.n_in, T.n_out, spectators
    if modes_of(rho) != n + s:
        raise NotDensityMatrix(f"state has {modes_of(rho)} modes, expected {n + s}")
    dil = dilation(T)
    e = dil.env_modes
    _check_modes(n + s + e)
    joint = np.kron(rho, state_from_cm(dil.gamma_E)) if e else rho
    # inputs [sys n | spect s | env e] -> channel coordinates [sys | env | spect]
    P_in = _mode_permutation(list(range(n)) + list(range(n + s, n + s + e)) + list(range(n, n + s)))
    out_rest = n + e - m
    P_out = _mode_permutation(
        list(range(m)) + list(range(m + out_rest, m + out_rest + s)) + list(range(m, m + out_rest))
    )
    G = P_out @ np.block(
        [[dil.O_SE, np.zeros((2 * (n + e), 2 * s))], [np.zeros((2 * s, 2 * (n + e))), np.eye(2 * s)]]
    ) @ P_in
    out = evolve(joint, G)
    return partial_trace_tail(out, m + s)


def choi_state_dense(T: GaussianChannel) -> np.ndarray:
    """``(T (x) id)`` applied to the dense maximally entangled state."""
    rho = state_from_cm(max_entangled(T.n_in))
    return apply_channel_dense(T, rho, spectators=T.n_in)


def entropy_dense(rho) -> float:
    """Von Neumann entropy in bits."""
    rho = check_density_matrix(rho)
    p = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    p = p[p > EIG_CUTOFF]
    return float(-np.sum(p * np.log2(p)))


def dense_rank(rho, tol: float = 1e-10) -> int:
    return int(np.sum(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)) > tol))
