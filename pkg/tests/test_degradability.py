from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import block_diag

from fgc.capacity import lossy_channel
from fgc.channels import (
    GaussianChannel,
    apply,
    complement,
    compose,
    dilation,
    direct_sum,
    identity_channel,
    standard_form,
    validate,
)
from fgc.degradability import (
    INV_SQRT2,
    classify,
    degrading_candidate,
    is_antidegradable,
    is_degradable_structural,
    small_env_necessary,
)
from fgc.errors import ChoiRankTooLarge, NotSquareChannel, NotStandardForm, SingularA, SingularD
from fgc.linalg import J, max_abs, omega
from fgc.sampling import channel_family, constant_loss_channel, random_channel, random_cm, rotate_channel


def correlated_fixture(rng=None) -> GaussianChannel:
    """D = diag(0.9, 0.9, 0.8, 0.8) with a pure two-mode environment correlating the blocks."""
    rng = np.random.default_rng(7) if rng is None else rng
    d = np.array([0.9, 0.9, 0.8, 0.8])
    S = np.diag(np.sqrt(1 - d**2))
    theta = 0.6
    c, s = np.cos(theta), np.sin(theta)
    # beam-splitter-like rotation of two vacua mixes the blocks
    O = np.array([[c, 0, s, 0], [0, c, 0, s], [-s, 0, c, 0], [0, -s, 0, c]])
    gamma_p = O @ block_diag(J, -J) @ O.T
    return GaussianChannel(np.diag(d), S @ gamma_p @ S)


def test_candidate_lossy():
    assert degrading_candidate(lossy_channel(0.8)).cp_min_eig >= -1e-9
    assert degrading_candidate(lossy_channel(0.3)).cp_min_eig < 0


def test_candidate_matches_closed_form(rng):
    for _ in range(20):
        T = random_channel(2, 2, rng)
        A = T.A
        dil = dilation(T)
        cand = degrading_candidate(T, dil)
        S = np.eye(4) - A @ A.T
        w, V = np.linalg.eigh(S)
        rootS = (V * np.sqrt(np.clip(w, 0, None))) @ V.T
        Ainv = np.linalg.inv(A)
        top = Ainv @ rootS
        extra = cand.A_tilde.shape[0] - 4
        np.testing.assert_allclose(cand.A_tilde, np.vstack([top, np.zeros((extra, 4))]), atol=1e-9)
        Lc = block_diag(A, np.eye(extra))
        K = block_diag(Ainv - A.T, np.zeros((extra, extra)))
        B_formula = Lc.T @ dil.gamma_E @ Lc - K @ dil.gamma_E @ K.T
        np.testing.assert_allclose(cand.B_tilde, B_formula, atol=1e-8)


def test_candidate_singular():
    with pytest.raises(SingularA):
        degrading_candidate(GaussianChannel(np.diag([1.0, 0.0]), np.zeros((2, 2))))
    with pytest.raises(SingularA):
        degrading_candidate(lossy_channel(0.0))
    with pytest.raises(SingularA):
        degrading_candidate(random_channel(2, 1, np.random.default_rng(0)))


def test_candidate_intertwines(rng):
    found = 0
    for _ in range(80):
        _, T = channel_family(int(rng.integers(1, 4)), rng)
        try:
            cand = degrading_candidate(T)
        except SingularA:
            continue
        if not cand.is_cp:
            continue
        found += 1
        C = complement(T)
        D = cand.channel()
        assert validate(D)[0]
        for _ in range(50):
            g = random_cm(T.n_in, rng)
            assert max_abs(apply(compose(D, T), g) - apply(C, g)) < 1e-8
    assert found > 10


@pytest.mark.parametrize("t", [0.5, 0.7, 1.0])
def test_classify_lossy_degradable(t):
    r = classify(lossy_channel(t))
    assert r.verdict == "degradable"
    assert r.degradable


@pytest.mark.parametrize("t", [0.2, 0.49999])
def test_classify_lossy_antidegradable(t):
    r = classify(lossy_channel(t))
    assert r.verdict == "antidegradable"
    assert r.antidegradable and not r.degradable


def test_classify_boundary():
    r = classify(lossy_channel(0.5))
    assert r.degradable and r.antidegradable
    assert r.verdict == "degradable" and r.reason == "boundary"


def test_classify_correlated_blocks_is_neither():
    T = correlated_fixture()
    assert validate(T)[0]
    r = classify(T)
    assert r.verdict == "neither"
    assert r.reason == "cross_block_correlations"
    assert r.blocks == [(pytest.approx(0.9), 2), (pytest.approx(0.8), 2)]


def test_classify_direct_sums():
    assert classify(direct_sum(lossy_channel(0.9), lossy_channel(0.6))).verdict == "degradable"
    assert classify(direct_sum(lossy_channel(0.9), lossy_channel(0.3))).verdict == "neither"


def test_classify_mixed_environment_undetermined():
    S = np.sqrt(1 - 0.81)
    T = GaussianChannel(0.9 * np.eye(2), S * 0.5 * J * S)
    r = classify(T)
    assert not r.degradable
    assert r.verdict == "undetermined" and r.choi_rank == 2
    with pytest.raises(ChoiRankTooLarge):
        is_antidegradable(T)


def test_classify_fewer_outputs():
    T = random_channel(2, 1, np.random.default_rng(3))
    r = classify(T)
    assert r.degradable is False and r.verdict == "undetermined"


def test_large_choi_rank_rectangular_degradable():
    """An n -> n + k channel with Choi rank above n + k that is still degradable."""
    rng = np.random.default_rng(11)
    base = constant_loss_channel([(0.85, 1)], rng)
    lam = 0.4
    B2 = lam * J  # full-rank extra output mode
    T = GaussianChannel(np.vstack([base.A, np.zeros((2, 2))]), block_diag(base.B, B2))
    assert validate(T)[0]
    r = classify(T)
    assert r.verdict == "degradable" and r.reason == "gaussian_degrader"
    assert dilation(T).env_modes == 3  # larger than the 2 output modes

    # hand-built degrader: drop the B2 mode, degrade the base channel and
    # emit a purifying partner of B2; the partner is fixed only up to its
    # orientation, so either sign of lam * J is a valid choice
    base_cand = degrading_candidate(base)
    C = complement(T)
    inputs = [random_cm(1, rng) for _ in range(20)]
    matches = []
    for sign in (1.0, -1.0):
        D = GaussianChannel(
            block_diag(base_cand.A_tilde, np.zeros((2, 2))),
            block_diag(base_cand.B_tilde, sign * lam * J),
        )
        assert validate(D)[0]
        matches.append(all(max_abs(apply(compose(D, T), g) - apply(C, g)) < 1e-8 for g in inputs))
    assert any(matches)


def test_is_antidegradable_examples():
    assert is_antidegradable(lossy_channel(0.25))
    assert not is_antidegradable(lossy_channel(0.75))
    with pytest.raises(NotSquareChannel):
        is_antidegradable(random_channel(1, 2, np.random.default_rng(0)))


def test_antidegradable_excludes_degradable_off_boundary(rng):
    for t in rng.uniform(0, 1, 50):
        if abs(t - 0.5) < 1e-6:
            continue
        T = rotate_channel(lossy_channel(t), rng)
        if is_antidegradable(T):
            assert classify(T).verdict != "degradable"


def test_antidegradable_matches_complement(rng):
    for _ in range(40):
        kind, T = channel_family(int(rng.integers(1, 4)), rng, kind=rng.choice(["degradable", "antidegradable"]))
        C = complement(T)
        if C.is_square:
            assert is_antidegradable(T) == (classify(C).verdict == "degradable")


def test_small_env_examples():
    assert small_env_necessary(lossy_channel(0.8))[0]
    S = np.sqrt(1 - 0.81)
    ok, ev = small_env_necessary(GaussianChannel(0.9 * np.eye(2), S * 0.5 * J * S))
    assert not ok and ev < 0
    with pytest.raises(SingularD):
        small_env_necessary(GaussianChannel(np.diag([1.0, 0.0]), np.zeros((2, 2))))
    with pytest.raises(NotStandardForm):
        small_env_necessary(random_channel(1, 1, np.random.default_rng(1)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_degradable_implies_small_env(seed, n):
    rng = np.random.default_rng(seed)
    _, T = channel_family(n, rng)
    sf = standard_form(T)
    if sf.d.min() < 1e-6:
        return
    holds, _ = small_env_necessary(sf.channel())
    if classify(T).verdict == "degradable":
        assert holds
    if classify(T).choi_rank > n and sf.d.min() < 1 - 1e-9:
        assert not holds


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_structural_matches_numeric(seed, n):
    rng = np.random.default_rng(seed)
    _, T = channel_family(n, rng)
    try:
        cand = degrading_candidate(T)
    except SingularA:
        return
    assert is_degradable_structural(T) == cand.is_cp


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_verdict_invariant_under_rotation(seed, n):
    rng = np.random.default_rng(seed)
    _, T = channel_family(n, rng)
    base = classify(T).verdict
    assert classify(rotate_channel(T, rng)).verdict == base


def test_degradable_threshold_in_d(rng):
    for d in [INV_SQRT2 + 1e-3, 0.8, 0.99]:
        assert classify(constant_loss_channel([(d, 2)], rng)).verdict == "degradable"
    for d in [0.1, INV_SQRT2 - 1e-3]:
        assert classify(constant_loss_channel([(d, 2)], rng)).verdict == "antidegradable"


def test_odd_degeneracy_is_not_degradable():
    d = np.array([0.95, 0.9, 0.9, 0.9])
    S = np.diag(np.sqrt(1 - d**2))
    T = GaussianChannel(np.diag(d), S @ omega(2) @ S)
    r = classify(T)
    assert not r.degradable and r.reason == "odd_degeneracy"


def test_identity_is_degradable():
    r = classify(identity_channel(2))
    assert r.verdict == "degradable" and r.reason == "perfect"


def test_report_json():
    obj = json.loads(json.dumps(classify(lossy_channel(0.8)).to_json()))
    assert set(obj) >= {"verdict", "blocks", "cp_min_eig", "reason"}
    assert obj["verdict"] == "degradable"
    assert obj["blocks"] == [[pytest.approx(np.sqrt(0.8)), 2]]
