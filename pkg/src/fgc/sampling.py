"""Seeded random generators for orthogonal matrices, CMs and channels.

Channels are sampled so that they are valid by construction:
``A = O1 diag(s) O2`` and ``B = S gamma S`` with ``S = sqrt(1 - A A^T)`` and
``gamma`` a valid CM, which gives ``1 - A A^T - iB = S (1 - i gamma) S >= 0``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import ortho_group, special_ortho_group

from .channels import GaussianChannel
from .linalg import lambda_blocks, psd_sqrt

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def random_orthogonal(dim: int, rng: np.random.Generator, special: bool = True) -> np.ndarray:
    if dim == 0:
        return np.zeros((0, 0))
    if dim == 1:
        return np.ones((1, 1)) if special else np.array([[rng.choice([-1.0, 1.0])]])
    group = special_ortho_group if special else ortho_group
    return group.rvs(dim, random_state=rng)


def random_cm(n: int, rng: np.random.Generator, pure: bool = False, lambdas=None) -> np.ndarray:
    """Random valid CM ``O (+) lambda_j J O^T``.

    Canonical values are uniform in ``[-1, 1]`` unless given; ``pure`` draws
    them from ``{-1, +1}``.
    """
    if lambdas is None:
        lambdas = rng.choice([-1.0, 1.0], size=n) if pure else rng.uniform(-1.0, 1.0, size=n)
    O = random_orthogonal(2 * n, rng)
    return O @ lambda_blocks(lambdas) @ O.T


def random_channel(n_in: int, n_out: int, rng: np.random.Generator, singular_values=None,
                   env=None) -> GaussianChannel:
    """Random valid channel; ``env`` optionally fixes the CM sandwiched into ``B``."""
    k = 2 * min(n_in, n_out)
    s = rng.uniform(0.0, 1.0, size=k) if singular_values is None else np.asarray(singular_values)
    D = np.zeros((2 * n_out, 2 * n_in))
    D[:k, :k] = np.diag(s)
    A = random_orthogonal(2 * n_out, rng) @ D @ random_orthogonal(2 * n_in, rng)
    S = psd_sqrt(np.eye(2 * n_out) - A @ A.T)
    gamma = random_cm(n_out, rng) if env is None else env
    return GaussianChannel(A, S @ gamma @ S)


def rotate_channel(T: GaussianChannel, rng: np.random.Generator, special: bool = False) -> GaussianChannel:
    """Random Gaussian-unitary pre- and post-processing of ``T``."""
    O_pre = random_orthogonal(2 * T.n_in, rng, special)
    O_post = random_orthogonal(2 * T.n_out, rng, special)
    return GaussianChannel(O_post @ T.A @ O_pre, O_post @ T.B @ O_post.T)


def constant_loss_channel(blocks, rng: np.random.Generator | None = None, rotate: bool = True,
                          pure_blocks: bool = True) -> GaussianChannel:
    """Direct sum of constant-loss blocks ``(d_k, n_k)``.

    Block ``k`` is ``A = d_k 1`` with ``B_k = (1 - d_k^2) gamma_k`` and
    ``gamma_k`` a random pure (or, with ``pure_blocks=False``, mixed) CM on
    ``n_k`` modes; ``rotate`` adds random unitary pre/post-processing.
    """
    rng = np.random.default_rng() if rng is None else rng
    As, Bs = [], []
    for d, nk in blocks:
        As.append(d * np.eye(2 * nk))
        gamma = random_cm(nk, rng, pure=pure_blocks)
        Bs.append((1.0 - d**2) * gamma)
    T = GaussianChannel(block_diag(*As), block_diag(*Bs))
    return rotate_channel(T, rng) if rotate else T


def correlated_channel(d, rng: np.random.Generator, rotate: bool = True) -> GaussianChannel:
    """Standard-form ``D = diag(d)`` with a pure environment correlated across all modes."""
    d = np.asarray(d, dtype=float)
    n = len(d) // 2
    S = np.diag(np.sqrt(1.0 - d**2))
    T = GaussianChannel(np.diag(d), S @ random_cm(n, rng, pure=True) @ S)
    return rotate_channel(T, rng) if rotate else T


def channel_family(n: int, rng: np.random.Generator, kind: str | None = None) -> tuple[str, GaussianChannel]:
    """Draw an ``n -> n`` channel from a mix of structured families.

    Generic channels are almost never (anti)degradable, so sweeps also draw
    constant-loss channels on either side of ``1/sqrt(2)``, channels whose
    environment is mixed or correlated across loss blocks, and channels whose
    loss degeneracy is split.
    """
    kinds = ("generic", "degradable", "antidegradable", "mixed_env", "correlated", "split", "boundary")
    kind = kind or kinds[rng.integers(len(kinds))]
    if kind == "generic":
        return kind, random_channel(n, n, rng)
    sizes = _partition(n, rng)
    if kind == "degradable":
        ds = rng.uniform(INV_SQRT2 + 0.02, 1.0, size=len(sizes))
        return kind, constant_loss_channel(zip(ds, sizes), rng)
    if kind == "antidegradable":
        ds = rng.uniform(0.0, INV_SQRT2 - 0.02, size=len(sizes))
        return kind, constant_loss_channel(zip(ds, sizes), rng)
    if kind == "mixed_env":
        ds = rng.uniform(0.05, 0.95, size=len(sizes))
        return kind, constant_loss_channel(zip(ds, sizes), rng, pure_blocks=False)
    if kind == "boundary":
        return kind, constant_loss_channel([(INV_SQRT2, n)], rng)
    if kind == "correlated":
        lo = INV_SQRT2 + 0.02 if rng.random() < 0.5 else 0.0
        hi = 1.0 if lo > 0 else INV_SQRT2 - 0.02
        vals = np.sort(rng.uniform(lo, hi, size=n))[::-1]
        return kind, correlated_channel(np.repeat(vals, 2), rng)
    if kind == "split":
        base = rng.uniform(INV_SQRT2 + 0.05, 0.97)
        d = np.full(2 * n, base)
        d[-1] -= rng.uniform(0.02, 0.04)
        return kind, correlated_channel(d, rng)
    raise ValueError(f"unknown channel kind {kind!r}")


def _partition(n: int, rng: np.random.Generator) -> list[int]:
    sizes = []
    left = n
    while left:
        k = int(rng.integers(1, left + 1))
        sizes.append(k)
        left -= k
    return sizes
