from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import block_diag, expm
from scipy.stats import special_ortho_group

from conftest import random_antisym, rotation
from fgc.errors import (
    BadPartition,
    Indefinite,
    IndexOutOfRange,
    NotAntisymmetric,
    NotHermitian,
    NotOrthogonal,
    NotSpecialOrthogonal,
    OddDimension,
    ShapeMismatch,
)
from fgc.linalg import (
    J,
    antisym_canonical,
    complex_form_psd,
    cs_decompose,
    doubled_real_form,
    group_values,
    horn_check,
    lambda_blocks,
    max_abs,
    orthogonality_residual,
    pinv_sqrt,
    psd_min_eig,
    so_log,
    svd_so,
)
from fgc.states import abs_lambdas


def test_canonical_of_J_is_trivial():
    c = antisym_canonical(J)
    np.testing.assert_allclose(c.rotation, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(c.lambdas, [1.0])


def test_canonical_of_zero():
    c = antisym_canonical(np.zeros((4, 4)))
    np.testing.assert_allclose(c.lambdas, [0.0, 0.0])
    assert np.linalg.det(c.rotation) == pytest.approx(1.0)


def test_canonical_round_trip_many(rng):
    worst = 0.0
    for _ in range(1000):
        dim = 2 * int(rng.integers(1, 7))
        M = random_antisym(dim, rng)
        c = antisym_canonical(M)
        worst = max(worst, max_abs(c.reconstruct() - M) / max(1.0, max_abs(M)))
        assert np.linalg.det(c.rotation) == pytest.approx(1.0)
        assert np.all(np.diff(c.lambdas) <= 1e-12)
        assert np.sum(c.lambdas < 0) <= 1
    assert worst < 1e-9


def test_canonical_magnitudes_match_spectrum(rng):
    M = random_antisym(8, rng)
    c = antisym_canonical(M)
    np.testing.assert_allclose(np.sort(np.abs(c.lambdas))[::-1], abs_lambdas(M), atol=1e-10)


def test_canonical_errors():
    with pytest.raises(NotAntisymmetric):
        antisym_canonical(np.eye(2))
    with pytest.raises(OddDimension):
        antisym_canonical(np.zeros((3, 3)))


def test_svd_so_identity():
    r = svd_so(np.eye(2))
    np.testing.assert_allclose(r.d, [1.0, 1.0])
    np.testing.assert_allclose(r.reconstruct(), np.eye(2), atol=1e-12)
    assert np.linalg.det(r.O1) == pytest.approx(1.0)
    assert np.linalg.det(r.O2) == pytest.approx(1.0)


def test_svd_so_already_standard():
    A = np.diag([0.9, 0.9, 0.7, 0.7])
    r = svd_so(A)
    np.testing.assert_allclose(r.d, np.diag(A), atol=1e-14)
    np.testing.assert_allclose(r.reconstruct(), A, atol=1e-12)


def test_svd_so_recovers_singular_values(rng):
    A = rotation(rng.uniform(0, 6)) @ np.diag([0.8, 0.5]) @ rotation(rng.uniform(0, 6))
    r = svd_so(A)
    np.testing.assert_allclose(r.d, [0.8, 0.5], atol=1e-12)
    np.testing.assert_allclose(r.reconstruct(), A, atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6))
def test_svd_so_factors(seed, rows, cols):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(rows, cols))
    if rng.random() < 0.3 and min(rows, cols) > 1:
        A[:, 0] = 0.0
    r = svd_so(A)
    assert max_abs(r.reconstruct() - A) < 1e-10
    assert orthogonality_residual(r.O1) < 1e-9 and orthogonality_residual(r.O2) < 1e-9
    assert np.all(r.d >= 0) and np.all(np.diff(r.d) <= 1e-15)
    assert np.linalg.det(r.O1) > 0
    # an improper O2 is only forced for square, invertible A with det A < 0
    if np.linalg.det(r.O2) < 0:
        assert rows == cols and np.linalg.det(A) < 0 and r.d.min() > 1e-12


def test_psd_min_eig_examples():
    assert psd_min_eig(np.eye(2)) == (True, pytest.approx(1.0))
    ok, ev = psd_min_eig(np.diag([1.0, -0.5]))
    assert not ok and ev == pytest.approx(-0.5)
    with pytest.raises(NotHermitian):
        psd_min_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_of_valid_cm_form(rng):
    for _ in range(50):
        M = random_antisym(6, rng)
        M /= np.linalg.norm(M, 2)
        assert psd_min_eig(np.eye(6) + 1j * M)[0]


def test_complex_form_examples():
    assert complex_form_psd(np.eye(2), J)
    assert not complex_form_psd(np.eye(2), 1.5 * J)
    with pytest.raises(ShapeMismatch):
        complex_form_psd(np.eye(2), np.zeros((4, 4)))


@given(st.integers(0, 2**32 - 1))
def test_complex_and_doubled_real_agree(seed):
    rng = np.random.default_rng(seed)
    k = 2 * int(rng.integers(1, 4))
    G = rng.normal(size=(k, k))
    X = G @ G.T * rng.uniform(0.1, 2.0)
    Y = random_antisym(k, rng) * rng.uniform(0.0, 2.0)
    doubled = doubled_real_form(X, Y)
    np.testing.assert_allclose(doubled, doubled.T)
    assert complex_form_psd(X, Y) == psd_min_eig(doubled)[0]


def test_pinv_sqrt_examples():
    np.testing.assert_allclose(pinv_sqrt(np.eye(2)), np.eye(2))
    np.testing.assert_allclose(pinv_sqrt(np.diag([4.0, 0.0])), np.diag([0.5, 0.0]))
    with pytest.raises(Indefinite):
        pinv_sqrt(np.diag([1.0, -0.1]))


def test_pinv_sqrt_projector_and_kernel(rng):
    for _ in range(50):
        V = rng.normal(size=(5, 3))
        S = V @ V.T
        W = pinv_sqrt(S)
        P = V @ np.linalg.pinv(V)
        assert max_abs(W @ S @ W - P) < 1e-9
        u, _, _ = np.linalg.svd(V)
        assert max_abs(W @ u[:, 3:]) < 1e-9


def test_cs_block_diagonal_is_noninteracting(rng):
    O = block_diag(special_ortho_group.rvs(2, random_state=rng), special_ortho_group.rvs(4, random_state=rng))
    cs = cs_decompose(O, 1, 2)
    np.testing.assert_allclose(cs.d, [1.0, 1.0], atol=1e-12)
    assert max_abs(cs.reconstruct() - O) < 1e-8


def test_cs_recovers_coupling_strengths():
    d0 = np.array([1.0, 0.8, 0.8, 0.0])
    S = np.diag(np.sqrt(1 - d0**2))
    O = np.block([[np.diag(d0), S], [-S, np.diag(d0)]])
    cs = cs_decompose(O, 2, 2)
    np.testing.assert_allclose(cs.d, d0, atol=1e-12)
    assert max_abs(cs.reconstruct() - O) < 1e-8


@given(st.integers(0, 2**32 - 1), st.integers(0, 2), st.integers(0, 2))
def test_cs_round_trip(seed, n, extra):
    m = n + extra
    if n + m == 0:
        return
    rng = np.random.default_rng(seed)
    O = special_ortho_group.rvs(2 * (n + m), random_state=rng) if n + m > 0 else np.eye(0)
    cs = cs_decompose(O, n, m)
    assert max_abs(cs.reconstruct() - O) < 1e-8
    assert np.all(cs.d <= 1 + 1e-12) and np.all(cs.d >= -1e-12)
    assert orthogonality_residual(cs.middle()) < 1e-12


def test_cs_errors(rng):
    with pytest.raises(BadPartition):
        cs_decompose(np.eye(6), 2, 1)
    with pytest.raises(NotOrthogonal):
        cs_decompose(2 * np.eye(6), 1, 2)


def test_so_log_examples():
    np.testing.assert_allclose(so_log(np.eye(4)), np.zeros((4, 4)), atol=1e-14)
    R = rotation(np.pi / 3)
    h = so_log(R)
    np.testing.assert_allclose(expm(h), R, atol=1e-12)
    np.testing.assert_allclose(np.abs(h), np.pi / 3 * np.abs(J), atol=1e-12)
    O = block_diag(-np.eye(2), rotation(0.4))
    h = so_log(O)
    assert max_abs(expm(h) - O) < 1e-8
    np.testing.assert_allclose(h, -h.T)


def test_so_log_rejects_reflection():
    with pytest.raises(NotSpecialOrthogonal):
        so_log(np.diag([1.0, -1.0]))


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_so_log_round_trip(seed, k):
    O = special_ortho_group.rvs(2 * k, random_state=np.random.default_rng(seed))
    h = so_log(O)
    assert max_abs(expm(h) - O) < 1e-8
    assert max_abs(h + h.T) == 0.0


def test_horn_examples():
    assert horn_check(np.eye(2), np.eye(2), 1, 1, 1)
    with pytest.raises(IndexOutOfRange):
        horn_check(np.diag([1.0, 0.0]), np.diag([0.0, -1.0]), 2, 2, 3)
    with pytest.raises(IndexOutOfRange):
        horn_check(np.eye(2), np.eye(2), 1, 1, 2)


def test_horn_never_violated(rng):
    for _ in range(100):
        N = int(rng.integers(1, 9))
        G1 = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        G2 = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        X, Y = G1 + G1.conj().T, G2 + G2.conj().T
        for k in range(1, N + 1):
            for i in range(1, k + 1):
                assert horn_check(X, Y, i, k + 1 - i, k)


def test_group_values():
    assert group_values([0.9, 0.9 + 1e-10, 0.5]) == [(pytest.approx(0.9), 2), (0.5, 1)]
    assert group_values([]) == []


def test_lambda_blocks():
    np.testing.assert_allclose(lambda_blocks([1.0, 0.5]), block_diag(J, 0.5 * J))
