"""Closed-form damping, diffusion and decoherence rates.

Gravitational channel (orbit of reduced mass m, acceleration a, background
level C_hh at twice the orbital frequency):

    Gamma_gr  = 32 G m a^2 / (5 c^5)
    D_gr      = 2 m^2 a^2 C_hh[2 Omega]        = m Gamma_gr k_B T_gr
    Lambda_gr = D_gr / hbar^2

Electromagnetic channel (perfectly reflecting sphere of radius r in a
photon bath at T_em):

    Gamma_em  = 4 pi^3 hbar r^2 / (45 m) * (k_B T_em / (hbar c))^4
    D_em      = m Gamma_em k_B T_em
    Lambda_em = D_em / hbar^2

The coherence between two trajectories a distance dx apart decays as
exp(-Lambda dx^2 t); :func:`decoherence_time` returns the time at which the
exponent reaches one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .background import GwSpectrum, PowerLaw, chh_to_temperature, graviton_number
from .orbit import TwoBodyOrbit, orbit_from_masses_separation
from .quantities import CODATA_2018, PhysicalConstants, ScenarioPreset, planck_length, planck_mass


class ThermalWavelengthWarning(UserWarning):
    """Sphere radius not large compared with the thermal photon wavelength."""


def _require(condition, message):
    if not condition:
        raise ValueError(message)


def grav_damping_rate(m, a, constants: PhysicalConstants = CODATA_2018):
    _require(m > 0, f"mass must be positive, got {m!r}")
    _require(a >= 0, f"acceleration must be >= 0, got {a!r}")
    return 32.0 * constants.G * m * a**2 / (5.0 * constants.c**5)


def grav_diffusion(m, a, chh_at_2omega, constants: PhysicalConstants = CODATA_2018):
    """Momentum diffusion coefficient, half the zero-frequency force spectrum."""
    _require(m > 0, f"mass must be positive, got {m!r}")
    _require(a >= 0, f"acceleration must be >= 0, got {a!r}")
    _require(chh_at_2omega >= 0, f"spectrum level must be >= 0, got {chh_at_2omega!r}")
    return 2.0 * m**2 * a**2 * chh_at_2omega


def thermal_wavelength(T, constants: PhysicalConstants = CODATA_2018):
    return constants.hbar * constants.c / (constants.k_B * T)


def em_damping_rate(m, r, T_em, constants: PhysicalConstants = CODATA_2018):
    _require(m > 0, f"mass must be positive, got {m!r}")
    _require(r > 0, f"radius must be positive, got {r!r}")
    _require(T_em > 0, f"temperature must be positive, got {T_em!r}")
    wavelength = thermal_wavelength(T_em, constants)
    if r < 10.0 * wavelength:
        warnings.warn(
            f"sphere radius {r:g} m is below 10 thermal wavelengths ({wavelength:g} m at {T_em:g} K); "
            "the geometric-optics damping rate is not reliable here",
            ThermalWavelengthWarning,
            stacklevel=2,
        )
    kT_over_hbar_c = 1.0 / wavelength
    return 4.0 * math.pi**3 * constants.hbar * r**2 / (45.0 * m) * kT_over_hbar_c**4


def einstein_diffusion(m, Gamma, T, constants: PhysicalConstants = CODATA_2018):
    """D = m Gamma k_B T."""
    return m * Gamma * constants.k_B * T


def decoherence_rate(D, constants: PhysicalConstants = CODATA_2018):
    _require(D >= 0, f"diffusion coefficient must be >= 0, got {D!r}")
    return D / constants.hbar**2


def decoherence_time(Lambda, delta_x):
    _require(Lambda > 0, f"decoherence rate must be positive, got {Lambda!r}")
    _require(delta_x > 0, f"separation must be positive, got {delta_x!r}")
    return 1.0 / (Lambda * delta_x**2)


@dataclass(frozen=True)
class GravChannel:
    Gamma_gr: float
    D_gr: float
    Lambda_gr: float
    T_gr: float


@dataclass(frozen=True)
class EmChannel:
    Gamma_em: float
    D_em: float
    Lambda_em: float
    T_em: float
    r: float


def grav_channel(m, a, chh_at_2omega, constants: PhysicalConstants = CODATA_2018) -> GravChannel:
    D = grav_diffusion(m, a, chh_at_2omega, constants)
    return GravChannel(
        Gamma_gr=grav_damping_rate(m, a, constants),
        D_gr=D,
        Lambda_gr=decoherence_rate(D, constants),
        T_gr=chh_to_temperature(chh_at_2omega, constants),
    )


def em_channel(m, r, T_em, constants: PhysicalConstants = CODATA_2018) -> EmChannel:
    Gamma = em_damping_rate(m, r, T_em, constants)
    D = einstein_diffusion(m, Gamma, T_em, constants)
    return EmChannel(Gamma_em=Gamma, D_em=D, Lambda_em=decoherence_rate(D, constants), T_em=T_em, r=r)


def ratio_direct(grav: GravChannel, em: EmChannel) -> float:
    """Lambda_gr / Lambda_em as (Gamma_gr / Gamma_em) (T_gr / T_em)."""
    if em.Gamma_em == 0 or em.T_em == 0:
        raise ZeroDivisionError("electromagnetic channel has zero damping or temperature")
    return (grav.Gamma_gr / em.Gamma_em) * (grav.T_gr / em.T_em)


def ratio_dimensionless(m, rho, r, Omega, T_em, T_gr, constants: PhysicalConstants = CODATA_2018) -> float:
    """Lambda_gr / Lambda_em as a product of dimensionless factors.

    (72 / pi^3) (m / m_P)^2 (rho / r)^2 (hbar Omega / k_B T_em)^4 (T_gr / T_em)
    """
    for name, value in (("m", m), ("rho", rho), ("r", r), ("T_em", T_em)):
        _require(value > 0, f"{name} must be positive, got {value!r}")
    _require(Omega >= 0, f"Omega must be >= 0, got {Omega!r}")
    _require(T_gr >= 0, f"T_gr must be >= 0, got {T_gr!r}")
    mass_factor = (m / planck_mass(constants)) ** 2
    geometry = (rho / r) ** 2
    photon_number = (constants.hbar * Omega / (constants.k_B * T_em)) ** 4
    return 72.0 / math.pi**3 * mass_factor * geometry * photon_number * (T_gr / T_em)


# Literature multipliers relative to Gamma_gr for the Moon; quoted, not computed.
FOOTNOTES = (
    "solar-photon damping of the Moon exceeds Gamma_gr by more than 1e10 (literature multiplier, not computed)",
    "tidal damping of the Moon exceeds Gamma_gr by more than 1e16 (literature multiplier, not computed)",
)

REFERENCE_SEPARATIONS = {
    "planck_length": planck_length(CODATA_2018),
    "1fm": 1e-15,
    "1angstrom": 1e-10,
}


@dataclass(frozen=True)
class DecoherenceReport:
    name: str
    m: float
    rho: float
    Omega: float
    a: float
    r: float
    chh_at_2omega: float
    grav: GravChannel
    em: EmChannel
    n_gr: float | None
    ratio_direct: float
    ratio_dimensionless: float
    constants: PhysicalConstants = field(default=CODATA_2018, repr=False)

    def t_dec_at(self, delta_x: float) -> float:
        """Gravitational decoherence time at separation ``delta_x``; inf for an inertial motion."""
        if self.grav.Lambda_gr == 0:
            return math.inf
        return decoherence_time(self.grav.Lambda_gr, delta_x)

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "m": self.m,
            "rho": self.rho,
            "Omega": self.Omega,
            "a": self.a,
            "r": self.r,
            "chh_at_2omega": self.chh_at_2omega,
            "f_2omega": 2.0 * self.Omega / (2.0 * math.pi),
        }
        out.update(asdict(self.grav))
        out.update({k: v for k, v in asdict(self.em).items() if k != "r"})
        out["n_gr"] = self.n_gr
        out["ratio_direct"] = self.ratio_direct
        out["ratio_dimensionless"] = self.ratio_dimensionless
        for label, dx in REFERENCE_SEPARATIONS.items():
            out[f"t_dec_{label}"] = self.t_dec_at(dx)
        return out


def build_report(name, m, rho, Omega, r, T_em, chh_at_2omega, constants=CODATA_2018) -> DecoherenceReport:
    """Evaluate both channels for a circular orbit with the given kinematics.

    ``Omega`` need not obey Kepler's law here; ``a = rho Omega^2`` is always
    used, so ``Omega = 0`` gives the inertial null.
    """
    a = rho * Omega**2
    grav = grav_channel(m, a, chh_at_2omega, constants)
    em = em_channel(m, r, T_em, constants)
    n_gr = graviton_number(chh_at_2omega, 2.0 * Omega, constants) if Omega > 0 else None
    return DecoherenceReport(
        name=name,
        m=m,
        rho=rho,
        Omega=Omega,
        a=a,
        r=r,
        chh_at_2omega=chh_at_2omega,
        grav=grav,
        em=em,
        n_gr=n_gr,
        ratio_direct=ratio_direct(grav, em),
        ratio_dimensionless=ratio_dimensionless(m, rho, r, Omega, T_em, grav.T_gr, constants),
        constants=constants,
    )


def report_for_orbit(orbit: TwoBodyOrbit, r, T_em, chh_at_2omega, name="") -> DecoherenceReport:
    return build_report(name, orbit.m, orbit.rho, orbit.Omega, r, T_em, chh_at_2omega, orbit.constants)


def report_for_preset(preset: ScenarioPreset, constants=CODATA_2018) -> DecoherenceReport:
    orbit = orbit_from_masses_separation(preset.m_a, preset.m_b, preset.rho, constants=constants)
    return report_for_orbit(orbit, preset.r, preset.T_em, preset.chh_at_2omega, preset.name)


# ---------------------------------------------------------------------------
# Crossover mass for two touching spheres


@dataclass(frozen=True)
class TouchingSpheres:
    """Two equal spheres of uniform density in contact, orbiting each other."""

    m_total: float
    density: float
    constants: PhysicalConstants = field(default=CODATA_2018, repr=False)

    @property
    def radius(self) -> float:
        return (3.0 * (self.m_total / 2.0) / (4.0 * math.pi * self.density)) ** (1.0 / 3.0)

    @property
    def rho(self) -> float:
        return 2.0 * self.radius

    @property
    def m(self) -> float:
        return self.m_total / 4.0

    @property
    def Omega(self) -> float:
        return math.sqrt(self.constants.G * self.m_total / self.rho**3)


def _background_level(background, omega):
    if isinstance(background, (int, float)):
        return float(background)
    return float(background.evaluate(omega))


def touching_spheres_ratio(m_total, density, T_em, background, constants=CODATA_2018) -> float:
    system = TouchingSpheres(m_total, density, constants)
    chh = _background_level(background, 2.0 * system.Omega)
    T_gr = chh_to_temperature(chh, constants)
    return ratio_dimensionless(system.m, system.rho, system.radius, system.Omega, T_em, T_gr, constants)


class NoCrossoverError(ValueError):
    pass


def crossover_mass(
    density,
    T_em,
    background: GwSpectrum | float,
    constants: PhysicalConstants = CODATA_2018,
    bracket=(1e-3, 1e9),
    rtol=1e-8,
    monotonicity_points=257,
) -> float:
    """Total mass at which gravitational and photon decoherence rates are equal.

    The system is two touching equal spheres of the given density.
    ``background`` is either a spectrum evaluated at the system's 2 Omega or
    a constant level in 1/Hz. Bisection runs on log10 of the mass after
    checking that the ratio is monotone across the bracket.
    """
    _require(density > 0, f"density must be positive, got {density!r}")
    lo, hi = math.log10(bracket[0]), math.log10(bracket[1])

    def log_ratio(log_m):
        ratio = touching_spheres_ratio(10.0**log_m, density, T_em, background, constants)
        return math.log(ratio) if ratio > 0 else -math.inf

    f_lo, f_hi = log_ratio(lo), log_ratio(hi)
    if not (f_lo < 0 < f_hi or f_hi < 0 < f_lo):
        raise NoCrossoverError(
            f"ratio does not cross 1 in [{bracket[0]:g}, {bracket[1]:g}] kg: "
            f"ratio({bracket[0]:g}) = {math.exp(f_lo):.3e}, ratio({bracket[1]:g}) = {math.exp(f_hi):.3e}"
        )
    scan = np.array([log_ratio(x) for x in np.linspace(lo, hi, monotonicity_points)])
    steps = np.diff(scan)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise NoCrossoverError("ratio is not monotone in mass across the bracket; root is not unique")

    increasing = f_hi > f_lo
    tol = math.log10(1.0 + rtol)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (log_ratio(mid) < 0) == increasing:
            lo = mid
        else:
            hi = mid
    return 10.0 ** (0.5 * (lo + hi))


def flat_background(level: float) -> PowerLaw:
    """A background with the same level at every frequency."""
    return PowerLaw(level, 1.0, 0.0)
