"""Qutrit state checks and entanglement measures."""

import numpy as np
import pytest

from spdcfilm import (
    concurrence,
    concurrence_bounds,
    concurrence_phase_curve,
    depolarize,
    dominant_eigenstate,
    purity,
    schmidt_number,
)
from spdcfilm.errors import (
    DegenerateTop,
    InvalidDensityMatrix,
    NotNormalized,
    OutOfRange,
)
from spdcfilm.qutrit import check_density_matrix, check_state, pure_density_matrix

SEED = 20260819


def test_concurrence_anchor_states():
    assert concurrence(np.array([0.0, 1.0, 0.0])) == pytest.approx(1.0, abs=1e-15)
    assert concurrence(np.array([1.0, 0.0, 0.0])) == 0.0
    # equal symmetric superposition of the extreme terms
    plus = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
    assert concurrence(plus) == pytest.approx(1.0, abs=1e-15)
    # sign matters: the antisymmetric combination is also maximally entangled
    minus = np.array([1.0, 0.0, -1.0]) / np.sqrt(2)
    assert concurrence(minus) == pytest.approx(1.0, abs=1e-15)


def test_schmidt_number_anchors():
    assert schmidt_number(1.0) == pytest.approx(2.0)
    assert schmidt_number(0.0) == pytest.approx(1.0)
    assert schmidt_number(0.98) == pytest.approx(1.9238, abs=1e-4)
    assert schmidt_number(0.40) == pytest.approx(1.0870, abs=1e-4)
    with pytest.raises(OutOfRange):
        schmidt_number(1.2)
    with pytest.raises(OutOfRange):
        schmidt_number(-0.1)


def test_concurrence_range_property():
    rng = np.random.default_rng(SEED)
    for _ in range(300):
        state = rng.normal(size=3) + 1j * rng.normal(size=3)
        state /= np.linalg.norm(state)
        c = concurrence(state)
        assert 0.0 <= c <= 1.0 + 1e-12
        # global phase invariance
        assert concurrence(state * np.exp(1j * rng.uniform(0, 2 * np.pi))) == pytest.approx(c)


def test_depolarize_and_purity():
    state = np.array([0.0, 1.0, 0.0], dtype=complex)
    rho = depolarize(state, 0.03)
    check_density_matrix(rho)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert purity(rho) == pytest.approx(0.9606, abs=1e-4)
    assert purity(pure_density_matrix(state)) == pytest.approx(1.0)
    with pytest.raises(OutOfRange):
        depolarize(state, 1.5)


def test_dominant_eigenstate_recovers_branch():
    state = np.array([0.1, 0.97, 0.22], dtype=complex)
    state /= np.linalg.norm(state)
    rho = depolarize(state, 0.05)
    top, weight = dominant_eigenstate(rho)
    assert abs(np.vdot(top, state)) == pytest.approx(1.0, abs=1e-10)
    assert weight > 0.9
    with pytest.raises(DegenerateTop):
        dominant_eigenstate(np.eye(3) / 3.0)


def test_phase_curve_interpolates_bounds():
    weights = np.array([0.25, 0.40, 0.35])
    deltas = np.linspace(0.0, np.pi, 101)
    curve = concurrence_phase_curve(weights, deltas)
    lo, hi = concurrence_bounds(weights)
    assert curve.max() == pytest.approx(hi, abs=1e-12)
    assert curve.min() == pytest.approx(lo, abs=1e-12)
    # endpoints: delta = 0 adds the middle weight coherently against the
    # geometric-mean term, delta = pi subtracts it
    assert curve[0] == pytest.approx(abs(2 * np.sqrt(0.25 * 0.35) - 0.40), abs=1e-12)
    assert curve[-1] == pytest.approx(2 * np.sqrt(0.25 * 0.35) + 0.40, abs=1e-12)


def test_validation_errors():
    with pytest.raises(NotNormalized):
        check_state(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(InvalidDensityMatrix):
        check_density_matrix(np.diag([0.7, 0.4, -0.1]))
    with pytest.raises(InvalidDensityMatrix):
        check_density_matrix(np.ones((3, 3)))  # hermitian but trace 3
