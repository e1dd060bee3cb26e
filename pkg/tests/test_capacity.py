from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fgc.capacity import (
    capacity_curve,
    coherent_information,
    coherent_information_cm,
    curve_csv,
    bounded_max,
    lossy_channel,
    quantum_capacity_lossy,
    write_curve_csv,
)
from fgc.channels import channel_distance, compose, identity_channel, validate
from fgc.degradability import classify
from fgc.errors import OutOfRange
from fgc.linalg import J, max_abs
from fgc.states import binary_entropy


def test_lossy_channel_examples():
    assert channel_distance(lossy_channel(1.0), identity_channel(1)) == 0.0
    T0 = lossy_channel(0.0)
    assert max_abs(T0.A) == 0.0 and max_abs(T0.B - J) == 0.0
    assert classify(lossy_channel(0.5)).reason == "boundary"
    for t in np.linspace(0, 1, 11):
        assert validate(lossy_channel(t, n=2))[0]
    with pytest.raises(OutOfRange):
        lossy_channel(1.1)


def test_coherent_information_examples():
    assert coherent_information(1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    for lam in np.linspace(-1, 1, 9):
        assert coherent_information(0.5, lam) == pytest.approx(0.0, abs=1e-15)
    ref = binary_entropy(0.625) - binary_entropy(0.875)
    assert coherent_information(0.75, 0.0) == pytest.approx(ref, abs=1e-14)
    with pytest.raises(OutOfRange):
        coherent_information(0.5, 1.5)


@given(st.floats(0, 1), st.floats(-1, 1))
def test_coherent_information_antisymmetric_in_t(t, lam):
    assert coherent_information(t, lam) == pytest.approx(-coherent_information(1 - t, lam), abs=1e-12)


@given(st.floats(0, 1), st.floats(-1, 1))
def test_closed_form_matches_entropies(t, lam):
    assert coherent_information(t, lam) == pytest.approx(coherent_information_cm(t, lam), abs=1e-10)


def test_capacity_examples():
    r = quantum_capacity_lossy(1.0)
    assert r.Q == pytest.approx(1.0, abs=1e-9)
    assert r.lambda_opt == pytest.approx(0.0, abs=1e-6)
    r = quantum_capacity_lossy(0.5)
    assert r.Q == 0.0 and r.reason == "antidegradable"


def test_capacity_brute_force():
    grid = np.linspace(-1, 1, 1_000_001)
    brute = coherent_information(0.75, grid).max()
    assert quantum_capacity_lossy(0.75).Q == pytest.approx(brute, abs=1e-6)
    assert quantum_capacity_lossy(0.75).Q >= brute - 1e-12


def test_bounded_max_quadratic():
    x, fx = bounded_max(lambda z: -(z - 0.3) ** 2, -1, 1)
    assert x == pytest.approx(0.3, abs=1e-7)


def test_capacity_zero_below_half():
    for t in np.linspace(0, 0.5, 11):
        assert quantum_capacity_lossy(t).Q == 0.0


def test_curve_endpoints_and_monotone():
    rows = capacity_curve(0.5, 1.0, 6)
    assert rows[0].Q == pytest.approx(0.0, abs=1e-9)
    assert rows[-1].Q == pytest.approx(1.0, abs=1e-9)
    rows = capacity_curve(0.5, 1.0, 101)
    assert np.all(np.diff([r.Q for r in rows]) >= -1e-12)


def test_lambda_opt_tends_to_zero():
    lams = [abs(quantum_capacity_lossy(t).lambda_opt) for t in (0.9, 0.99, 0.999, 1.0)]
    assert lams[-1] < 1e-6
    assert lams == sorted(lams, reverse=True)


def test_monotone_consistent_with_composition():
    # lossy(t2) o lossy(t1) = lossy(t1 t2): a channel degraded by further
    # loss cannot have larger capacity
    for t1, t2 in [(0.9, 0.8), (0.95, 0.7), (0.6, 0.99)]:
        assert channel_distance(compose(lossy_channel(t2), lossy_channel(t1)), lossy_channel(t1 * t2)) < 1e-15
        assert quantum_capacity_lossy(t1 * t2).Q <= quantum_capacity_lossy(t1).Q + 1e-12


def test_curve_errors():
    with pytest.raises(OutOfRange):
        capacity_curve(0.6, 0.5, 3)
    with pytest.raises(OutOfRange):
        capacity_curve(0.5, 1.0, 1)
    with pytest.raises(OutOfRange):
        capacity_curve(-0.1, 1.0, 3)
    assert len(capacity_curve(1.0, 1.0, 1)) == 1


def test_csv_format(tmp_path):
    rows = capacity_curve(0.5, 1.0, 3)
    text = curve_csv(rows)
    lines = text.split("\n")
    assert lines[0] == "t,Q,lambda_opt"
    assert len(lines) == 5 and lines[-1] == ""
    assert lines[1].startswith("0.5,0,")
    path = tmp_path / "curve.csv"
    write_curve_csv(rows, path)
    assert path.read_bytes() == text.encode()
    assert b"\r" not in path.read_bytes()
