import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from darkgates.interactions import (
    LatticeConfig,
    ResonantChannelError,
    critical_distance,
    dipolar_coupling,
    get_scheme,
    level_spacing,
    load_schemes,
    place_atoms,
    vdw_coupling,
)

TWO_PI = 2 * math.pi


def test_dipolar_table_value():
    # C3 = -10.2 (2pi GHz um^3) at 10 um -> -2pi * 10.2 MHz
    assert dipolar_coupling(-10.2, 10.0) == pytest.approx(-TWO_PI * 10.2e6)


def test_dipolar_limits():
    assert dipolar_coupling(5.0, 1e9) == pytest.approx(0.0, abs=1e-12)
    assert dipolar_coupling(0.0, 3.0) == 0.0
    with pytest.raises(ValueError):
        dipolar_coupling(1.0, 0.0)


def test_vdw_table_values():
    assert vdw_coupling(-27.9, 8.0) == pytest.approx(-TWO_PI * 0.1064e6, rel=1e-3)
    assert vdw_coupling(-5.0, 5.0) == pytest.approx(-TWO_PI * 0.32e6)


@given(
    st.floats(min_value=-100, max_value=100, allow_nan=False),
    st.floats(min_value=0.5, max_value=50),
)
@settings(max_examples=100, deadline=None)
def test_power_law_scaling(c, r):
    assert dipolar_coupling(c, 2 * r) == pytest.approx(dipolar_coupling(c, r) / 8, abs=1e-18)
    assert vdw_coupling(c, 2 * r) == pytest.approx(vdw_coupling(c, r) / 64, abs=1e-18)


def test_critical_distance_channel3():
    assert critical_distance(5.0, 9.5) == pytest.approx(8.07, rel=2e-3)


def test_critical_distance_resonant_raises():
    with pytest.raises(ResonantChannelError):
        critical_distance(5.0, 0.0)


def test_critical_distance_zero_coupling():
    assert critical_distance(0.0, 10.0) == 0.0


def test_level_spacing_values():
    assert level_spacing(101) == pytest.approx(TWO_PI * 3.193e9, rel=1e-3)
    assert level_spacing(109) == pytest.approx(TWO_PI * 2.540e9, rel=1e-3)


def test_level_spacing_monotone():
    values = [level_spacing(n) for n in range(50, 200, 10)]
    assert all(a > b for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        level_spacing(1)


def test_shipped_table_golden():
    schemes = load_schemes()
    rows = {
        "87S-95S": (-5.6, -1.56, -5.0, 31.8),
        "101S-109S": (-10.2, -2.87, -27.9, 15.2),
        "150S-160S": (-49.0, -14.3, -4300.0, 2.0),
    }
    assert set(rows) <= set(schemes)
    for name, (c3b1, c3b2, c6, e) in rows.items():
        s = schemes[name]
        assert (s.c3_b1, s.c3_b2, s.c6_mm, s.e_field) == (c3b1, c3b2, c6, e)


def test_shipped_channels_golden():
    s = get_scheme("101S-109S")
    assert len(s.channels) == 7
    listed = {ch.number: (ch.c3, ch.delta_mhz) for ch in s.channels}
    assert listed[1] == (-10.2, 0.0)
    assert listed[2] == (-2.9, 0.0)
    assert listed[3] == (5.0, 9.5)
    assert listed[4] == (-8.6, 382.0)
    assert listed[5] == (-6.5, 52.0)
    assert listed[6] == (-14.0, -207.0)
    assert listed[7] == (3.0, 3.0)
    assert all(s_.resonant for s_ in s.channels[:2])


def test_dominant_channel_critical_distances():
    assert get_scheme("101S-109S").dominant_channel().critical_distance() == pytest.approx(
        8.0, rel=0.02
    )
    assert get_scheme("87S-95S").dominant_channel().critical_distance() == pytest.approx(
        4.5, rel=0.05
    )


def test_place_atoms_linear_k2():
    lat = place_atoms(2, "linear", 10.0)
    np.testing.assert_allclose(lat.positions[0], [0.0, 0.0])
    ends = sorted(tuple(p) for p in lat.positions[1:])
    assert ends == [(-10.0, 0.0), (10.0, 0.0)]


def test_place_atoms_square_k3_block():
    lat = place_atoms(3, "square", 8.0)
    # 4 atoms fill a 2x2 block
    xs = {tuple(np.round(p - lat.positions.min(axis=0), 9)) for p in lat.positions}
    assert xs == {(0.0, 0.0), (8.0, 0.0), (0.0, 8.0), (8.0, 8.0)}


@given(st.integers(min_value=1, max_value=12), st.sampled_from(["linear", "square"]))
@settings(max_examples=40, deadline=None)
def test_place_atoms_min_distance(k, geometry):
    lat = place_atoms(k, geometry, 8.0)
    assert lat.n_atoms == k + 1
    for i in range(lat.n_atoms):
        for j in range(i + 1, lat.n_atoms):
            assert lat.distance(i, j) >= 8.0 - 1e-9


def test_lattice_rejects_close_atoms():
    with pytest.raises(ValueError, match="closer"):
        LatticeConfig("linear", 10.0, np.array([[0.0, 0.0], [5.0, 0.0]]))
