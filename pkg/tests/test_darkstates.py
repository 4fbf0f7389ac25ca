import math

import numpy as np
import pytest

from darkgates.basis import build_basis
from darkgates.darkstates import (
    embed_fanout_dark,
    embed_toffoli_dark,
    exchange_perturbation,
    fanout_dark_state,
    fanout_dark_state_exact,
    fanout_symmetric_hamiltonian,
    nonadiabatic_estimate,
    toffoli_dark_state,
)


class _Cfg:
    kind = "toffoli"
    dimension_cap = 10_000_000

    def __init__(self, k):
        self.k = k


def test_toffoli_zero_drive():
    d = toffoli_dark_state(0.0, 1.0, 3)
    np.testing.assert_allclose(d.amplitudes, [1.0, 0.0])


def test_toffoli_equal_mixing():
    # omega = 2 b1, j = 1 -> tan(theta) = 1
    d = toffoli_dark_state(2.0, 1.0, 1)
    np.testing.assert_allclose(d.amplitudes, [1 / np.sqrt(2), -1 / np.sqrt(2)])


def test_toffoli_tangent_j4():
    d = toffoli_dark_state(0.4, 1.0, 4)
    assert math.tan(d.theta) == pytest.approx(0.1)


def test_toffoli_rejects_j0():
    with pytest.raises(ValueError):
        toffoli_dark_state(1.0, 1.0, 0)
    with pytest.raises(ValueError):
        toffoli_dark_state(1.0, 0.0, 1)


def test_fanout_zero_drive_population():
    d = fanout_dark_state(1e-12, 1.0, 4)
    assert d.populations[0] == pytest.approx(1.0)
    assert all(p < 1e-20 for p in d.populations[1:])


def test_fanout_j1_matches_toffoli():
    d = fanout_dark_state(0.6, 1.0, 1)
    t = toffoli_dark_state(0.6, 1.0, 1)
    np.testing.assert_allclose(d.amplitudes, t.amplitudes, atol=1e-14)


def test_fanout_first_step_population():
    # j = 3, omega/2b1 = 0.1 -> P_1 = (0.1 sqrt(3))^2
    d = fanout_dark_state(0.2, 1.0, 3)
    assert d.populations[1] == pytest.approx(0.03)


def test_fanout_populations_decreasing_weak_drive():
    for j in range(1, 7):
        x = 0.9 / math.sqrt(j)  # keeps every step tangent below one
        d = fanout_dark_state(2 * x, 1.0, j)
        assert all(a >= b for a, b in zip(d.populations, d.populations[1:]))


def test_fanout_amplitudes_normalized():
    d = fanout_dark_state(0.8, 1.0, 5)
    assert np.linalg.norm(d.amplitudes) == pytest.approx(1.0)


def test_symmetric_ladder_couplings_match_step_rules():
    h, labels = fanout_symmetric_hamiltonian(0.4, 1.0, 3)
    assert labels == ["A0", "A1", "A2", "A3", "B0", "B1", "B2"]
    # step 1 (odd): drive sqrt(j)*omega/2 between A0-A1, exchange sqrt(1)*b1 A1-B0
    assert h[0, 1] == pytest.approx(0.2 * math.sqrt(3))
    assert h[1, 4] == pytest.approx(1.0)
    # step 2 (even): drive sqrt(j-1)*omega/2 between B0-B1, exchange sqrt(2) B1-A2
    assert h[4, 5] == pytest.approx(0.2 * math.sqrt(2))
    assert h[5, 2] == pytest.approx(math.sqrt(2))


def test_fanout_exact_null_vector():
    for j in (1, 2, 3, 4, 5):
        h, _ = fanout_symmetric_hamiltonian(0.5, 1.0, j)
        d = fanout_dark_state_exact(0.5, 1.0, j)
        full = np.zeros(2 * j + 1)
        for m, amp in enumerate(d):
            flat = m if m % 2 == 0 else j + 1 + (m - 1)
            full[flat] = amp
        assert np.linalg.norm(h @ full) < 1e-12 * np.linalg.norm(h)


def _ladder_residual(j, x):
    """Relative residual of the closed-form ladder state in the symmetric space."""
    omega = 2.0 * x
    h, _ = fanout_symmetric_hamiltonian(omega, 1.0, j)
    d = fanout_dark_state(omega, 1.0, j)
    full = np.zeros(2 * j + 1)
    for m, amp in enumerate(d.amplitudes):
        flat = m if m % 2 == 0 else j + 1 + (m - 1)
        full[flat] = amp
    return np.linalg.norm(h @ full) / np.linalg.norm(h, 2)


def test_fanout_closed_form_exact_at_j1():
    assert _ladder_residual(1, 0.3) < 1e-15


def test_fanout_closed_form_residual_cubic():
    # First correction to the tangent-product ladder enters at (omega/2b1)^3
    # for every j >= 2 (skip-coupling from rung 2 into the first empty rung).
    for j in (2, 3):
        r1, r2 = _ladder_residual(j, 0.1), _ladder_residual(j, 0.05)
        slope = math.log(r1 / r2) / math.log(2)
        assert slope == pytest.approx(3.0, abs=0.15)


def test_nonadiabatic_estimates():
    b1 = 1.0
    assert nonadiabatic_estimate("toffoli", 0.42, b1, 1) == pytest.approx(
        0.42**4 / (640 * math.pi), rel=1e-12
    )
    assert nonadiabatic_estimate("fanout", 0.42, b1, 2) == pytest.approx(
        2 * 0.42**4 / (640 * math.pi), rel=1e-12
    )
    assert nonadiabatic_estimate("toffoli", 0.0, b1, 2) == 0.0
    assert nonadiabatic_estimate("toffoli", 0.1, b1, 1, envelope=True) == pytest.approx(
        3 * nonadiabatic_estimate("toffoli", 0.1, b1, 1)
    )


def test_exchange_perturbation_scoping():
    assert exchange_perturbation("toffoli", 1.0, 1.0, 0.3, 1) == 0.0
    assert exchange_perturbation("fanout", 1.0, 1.0, 0.3, 2) == 0.0


def test_exchange_perturbation_toffoli_value():
    b1 = 1.0
    value = exchange_perturbation("toffoli", 0.1 * b1, b1, 0.28 * b1, 2)
    assert value == pytest.approx(math.pi * 0.1 * 0.28 / 8.01, rel=1e-12)
    assert value == pytest.approx(1.10e-2, rel=0.01)


def test_embedded_toffoli_dark_structure():
    basis = build_basis(_Cfg(2))
    state = embed_toffoli_dark(basis, toffoli_dark_state(0.5, 1.0, 2))
    assert state.norm() == pytest.approx(1.0)
    # support: |g1, r, r> plus the two transfer components
    support = np.flatnonzero(np.abs(state.amplitudes) > 1e-15)
    assert len(support) == 3


def test_embedded_fanout_dark_structure():
    basis = build_basis(_Cfg(3))
    d = fanout_dark_state(0.5, 1.0, 3)
    state = embed_fanout_dark(basis, d.amplitudes)
    assert state.norm() == pytest.approx(1.0)
    # rungs: 1 + 3 + 3 + 3 product components for j = 3
    support = np.flatnonzero(np.abs(state.amplitudes) > 1e-18)
    assert len(support) == 10
