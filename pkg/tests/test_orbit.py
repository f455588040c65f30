import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gravidec.orbit import (
    TwoBodyOrbit,
    orbit_from_masses_frequency,
    orbit_from_masses_separation,
    position,
    projected_force,
    quadrupole,
    separation_distance,
    tidal_acceleration,
    tidal_action_rate,
)
from gravidec.quantities import NATURAL, planck_length

mass = st.floats(min_value=1e-3, max_value=1e31)
dist = st.floats(min_value=1e-3, max_value=1e13)


def test_moon_frequency(moon_orbit):
    f = 2 * moon_orbit.Omega / (2 * math.pi)
    assert f == pytest.approx(0.85e-6, rel=0.01)
    assert f"{f:.0e}" == "8e-07"


def test_equal_mass_reduced_mass():
    o = orbit_from_masses_separation(3.0, 3.0, 10.0)
    assert o.m == 1.5 and o.M == 6.0


def test_unit_kepler():
    o = orbit_from_masses_separation(0.5, 0.5, 1.0, constants=NATURAL)
    assert o.Omega == 1.0


@given(mass, mass, dist)
def test_kepler_invariants(m_a, m_b, rho):
    o = orbit_from_masses_separation(m_a, m_b, rho)
    assert abs(o.kepler_residual()) < 1e-12
    assert o.m == pytest.approx(m_a * m_b / (m_a + m_b), rel=1e-12)
    assert o.a == pytest.approx(rho * o.Omega**2, rel=1e-12)
    back = orbit_from_masses_frequency(m_a, m_b, o.Omega)
    assert back.rho == pytest.approx(rho, rel=1e-12)
    assert orbit_from_masses_separation(m_a, m_b, back.rho).Omega == pytest.approx(o.Omega, rel=1e-12)


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
def test_rejects_non_positive(args):
    with pytest.raises(ValueError):
        orbit_from_masses_separation(*args)


def test_position(moon_orbit):
    o = moon_orbit
    x1, x2 = position(o, 0.0)
    assert (x1, x2) == (o.rho, 0.0)
    x1, x2 = position(o, math.pi / (2 * o.Omega))
    assert x1 == pytest.approx(0.0, abs=1e-8 * o.rho) and x2 == pytest.approx(o.rho, rel=1e-15)
    t = np.linspace(0, 10 * o.period, 1001)
    x1, x2 = position(o, t)
    assert np.allclose(np.hypot(x1, x2), o.rho, rtol=1e-12, atol=0)


def test_quadrupole_on_axis():
    o = orbit_from_masses_separation(2.0, 2.0, 3.0, constants=NATURAL)
    Q = quadrupole(o, 0.0).Q
    mr2 = o.m * o.rho**2
    assert np.allclose(Q, np.diag([2 * mr2 / 3, -mr2 / 3, -mr2 / 3]), rtol=1e-14)


def test_quadrupole_traceless_symmetric(moon_orbit):
    t = np.linspace(0, 3 * moon_orbit.period, 97)
    Q = quadrupole(moon_orbit, t).Q
    scale = np.abs(Q).max()
    assert np.all(np.abs(np.trace(Q, axis1=-2, axis2=-1)) < 1e-14 * scale)
    assert np.array_equal(Q, np.swapaxes(Q, -1, -2))
    assert np.allclose(Q[:, 2, 2], -moon_orbit.m * moon_orbit.rho**2 / 3, rtol=1e-12)


def test_quadrupole_oscillates_at_twice_orbital_frequency():
    o = orbit_from_masses_separation(1.0, 1.0, 1.0, constants=NATURAL)
    n_per, periods = 64, 8
    t = np.arange(n_per * periods) * o.period / n_per
    q12 = quadrupole(o, t).Q[:, 0, 1]
    power = np.abs(np.fft.fft(q12)) ** 2
    k = np.fft.fftfreq(t.size, d=t[1] - t[0]) * 2 * math.pi
    at_2omega = np.isclose(np.abs(k), 2 * o.Omega, rtol=1e-9)
    assert power[at_2omega].sum() / power.sum() > 0.9999


def test_tidal_coupling_averages_out():
    o = orbit_from_masses_separation(1.0, 1.0, 1.0, constants=NATURAL)
    t = np.arange(256) * o.period / 256
    Q = quadrupole(o, t).Q
    hddot = np.zeros((3, 3))
    hddot[0, 1] = hddot[1, 0] = 1.0
    rate = tidal_action_rate(hddot, Q)
    assert abs(rate.mean()) < 1e-14 * np.abs(rate).max()


def test_tidal_acceleration():
    hddot = np.diag([2.0, -2.0, 0.0])
    assert np.allclose(tidal_acceleration(hddot, np.array([1.0, 1.0, 0.0])), [1.0, -1.0, 0.0])


def test_projected_force_plus_polarisation():
    # F = (m rho / 2)(hx'' cos 2psi - h+'' sin 2psi)
    o = orbit_from_masses_separation(1.0, 3.0, 2.0, constants=NATURAL)
    t = np.linspace(0, o.period, 17)
    hplus = np.diag([1.0, -1.0, 0.0])
    psi = o.Omega * t
    F = projected_force(o, np.broadcast_to(hplus, t.shape + (3, 3)), t)
    assert np.allclose(F, -0.5 * o.m * o.rho * np.sin(2 * psi), atol=1e-14)


def test_separation_distance(moon_orbit):
    assert separation_distance(moon_orbit, 0.0) == 0.0
    dtheta = planck_length() / moon_orbit.rho
    assert dtheta == pytest.approx(4.2e-44, rel=0.01)
    assert separation_distance(moon_orbit, dtheta) == pytest.approx(planck_length(), rel=1e-15)
    assert separation_distance(moon_orbit, 2e-3) == 2 * separation_distance(moon_orbit, 1e-3)


def test_inertial_orbit_allowed():
    o = TwoBodyOrbit(1.0, 1.0, 1.0, 0.0)
    assert o.a == 0.0
