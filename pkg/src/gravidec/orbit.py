"""Circular two-body orbits in the x1-x2 plane.

The relative coordinate moves on x = rho (cos(Omega t + theta), sin(Omega t + theta), 0).
Everything is closed form; nothing is integrated numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quantities import CODATA_2018, PhysicalConstants


@dataclass(frozen=True)
class TwoBodyOrbit:
    """Circular orbit of two point masses.

    Orbits built with :func:`orbit_from_masses_separation` satisfy Kepler's
    law. Direct construction accepts any ``Omega >= 0`` so that inertial
    (``Omega = 0``) reference motions can be represented.
    """

    m_a: float
    m_b: float
    rho: float
    Omega: float
    theta: float = 0.0
    constants: PhysicalConstants = field(default=CODATA_2018, repr=False)

    def __post_init__(self):
        for name in ("m_a", "m_b", "rho"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.Omega) and self.Omega >= 0):
            raise ValueError(f"Omega must be finite and >= 0, got {self.Omega!r}")

    @property
    def M(self) -> float:
        return self.m_a + self.m_b

    @property
    def m(self) -> float:
        """Reduced mass."""
        return self.m_a * self.m_b / (self.m_a + self.m_b)

    @property
    def a(self) -> float:
        """Centripetal acceleration rho * Omega**2."""
        return self.rho * self.Omega**2

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.Omega

    def kepler_residual(self) -> float:
        """Relative violation of rho^3 Omega^2 = G M."""
        gm = self.constants.G * self.M
        return (self.rho**3 * self.Omega**2 - gm) / gm


def orbit_from_masses_separation(m_a, m_b, rho, theta=0.0, constants=CODATA_2018) -> TwoBodyOrbit:
    for name, value in (("m_a", m_a), ("m_b", m_b), ("rho", rho)):
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value!r}")
    omega = math.sqrt(constants.G * (m_a + m_b) / rho**3)
    return TwoBodyOrbit(m_a, m_b, rho, omega, theta, constants)


def orbit_from_masses_frequency(m_a, m_b, Omega, theta=0.0, constants=CODATA_2018) -> TwoBodyOrbit:
    if not Omega > 0:
        raise ValueError(f"Omega must be positive, got {Omega!r}")
    rho = (constants.G * (m_a + m_b) / Omega**2) ** (1.0 / 3.0)
    return TwoBodyOrbit(m_a, m_b, rho, Omega, theta, constants)


def phase(orbit: TwoBodyOrbit, t):
    return orbit.Omega * np.asarray(t, dtype=float) + orbit.theta


def position(orbit: TwoBodyOrbit, t):
    """Relative position (x1, x2) at time(s) ``t``."""
    psi = phase(orbit, t)
    return orbit.rho * np.cos(psi), orbit.rho * np.sin(psi)


def velocity(orbit: TwoBodyOrbit, t):
    psi = phase(orbit, t)
    v = orbit.rho * orbit.Omega
    return -v * np.sin(psi), v * np.cos(psi)


@dataclass(frozen=True)
class QuadrupoleState:
    Q: np.ndarray  # (..., 3, 3) kg m^2
    t: np.ndarray


def quadrupole(orbit: TwoBodyOrbit, t) -> QuadrupoleState:
    """Traceless quadrupole m (x_i x_j - delta_ij |x|^2 / 3); broadcasts over ``t``."""
    t = np.asarray(t, dtype=float)
    x1, x2 = position(orbit, t)
    x = np.stack([x1, x2, np.zeros_like(x1)], axis=-1)
    outer = x[..., :, None] * x[..., None, :]
    r2 = np.einsum("...k,...k->...", x, x)
    Q = orbit.m * (outer - np.eye(3) * r2[..., None, None] / 3.0)
    return QuadrupoleState(Q=Q, t=t)


def separation_distance(orbit: TwoBodyOrbit, delta_theta: float) -> float:
    """Arc distance rho * delta_theta between two motions on the same orbit."""
    return orbit.rho * delta_theta


def tidal_acceleration(hddot_ij, x):
    """Geodesic deviation x_i'' = -R_i0j0 x_j = (1/2) h''_ij x_j in the TT gauge."""
    return 0.5 * np.einsum("...ij,...j->...i", hddot_ij, x)


def tidal_action_rate(hddot_ij, Q):
    """Rate of change of the action, (1/4) h''_ij Q_ij."""
    return 0.25 * np.einsum("...ij,...ij->...", hddot_ij, Q)


def projected_force(orbit: TwoBodyOrbit, hddot_ij, t):
    """Relative tidal force projected on the direction of motion.

    F = (1/2) h''_ij m x_i x'_j / (rho Omega), with ``hddot_ij`` of shape
    (..., 3, 3) broadcast against ``t``. This tensor form is kept as an
    independent check of the circular-polarization force used by the
    simulator.
    """
    x1, x2 = position(orbit, t)
    v1, v2 = velocity(orbit, t)
    zero = np.zeros_like(x1)
    x = np.stack([x1, x2, zero], axis=-1)
    v = np.stack([v1, v2, zero], axis=-1) / (orbit.rho * orbit.Omega)
    return 0.5 * orbit.m * np.einsum("...ij,...i,...j->...", hddot_ij, x, v)
