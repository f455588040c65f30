"""Stochastic gravitational-wave background spectra.

A spectrum C_hh[omega] [1/Hz] is two-sided and even in omega; the models
below are parametrised on |omega| only. Conversions to an effective
temperature and a graviton occupation number use

    C_hh = (16 G / 5 c^5) k_B T_gr = (16 G / 5 c^5) (1/2 + n_gr) hbar omega.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .quantities import CODATA_2018, PhysicalConstants


class DomainError(ValueError):
    """Frequency outside the range where a spectrum model is defined."""


class SubVacuumError(ValueError):
    """Spectrum level below the zero-point (vacuum) contribution."""


class SpectrumFileError(ValueError):
    pass


def _as_abs(omega):
    w = np.abs(np.asarray(omega, dtype=float))
    if np.any(~np.isfinite(w)):
        raise DomainError("non-finite frequency")
    return w


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


@dataclass(frozen=True)
class FlatBand:
    """Constant level on omega_min <= |omega| <= omega_max."""

    level: float
    omega_min: float
    omega_max: float

    def __post_init__(self):
        if not self.level >= 0:
            raise ValueError(f"level must be >= 0, got {self.level!r}")
        if not 0 <= self.omega_min < self.omega_max:
            raise ValueError(f"need 0 <= omega_min < omega_max, got {self.omega_min!r}, {self.omega_max!r}")

    def support(self):
        return self.omega_min, self.omega_max

    def evaluate(self, omega):
        w = _as_abs(omega)
        if np.any((w < self.omega_min) | (w > self.omega_max)):
            raise DomainError(f"|omega| outside flat band [{self.omega_min:g}, {self.omega_max:g}] rad/s")
        return _scalar_or_array(np.full(w.shape, self.level), omega)

    def scaled(self, time_unit):
        return FlatBand(self.level / time_unit, self.omega_min * time_unit, self.omega_max * time_unit)


@dataclass(frozen=True)
class PowerLaw:
    """level_at_ref * (|omega| / omega_ref) ** exponent on 0 < |omega| < inf.

    With ``exponent = 0`` this is a flat spectrum defined at every frequency.
    """

    level_at_ref: float
    omega_ref: float
    exponent: float

    def __post_init__(self):
        if not self.level_at_ref >= 0:
            raise ValueError(f"level_at_ref must be >= 0, got {self.level_at_ref!r}")
        if not self.omega_ref > 0:
            raise ValueError(f"omega_ref must be > 0, got {self.omega_ref!r}")

    def support(self):
        return 0.0, math.inf

    def evaluate(self, omega):
        w = _as_abs(omega)
        if self.exponent < 0 and np.any(w == 0):
            raise DomainError("power law with negative exponent is undefined at omega = 0")
        return _scalar_or_array(self.level_at_ref * (w / self.omega_ref) ** self.exponent, omega)

    def scaled(self, time_unit):
        return PowerLaw(self.level_at_ref / time_unit, self.omega_ref * time_unit, self.exponent)


@dataclass(frozen=True)
class Tabulated:
    """Log-log linear interpolation between knots; no extrapolation.

    Segments touching a zero ordinate fall back to linear interpolation,
    which keeps the interpolant inside the neighbouring ordinates.
    """

    omega: np.ndarray = field(repr=False)
    chh: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.omega, dtype=float)
        c = np.array(self.chh, dtype=float)
        if w.ndim != 1 or w.shape != c.shape or w.size < 1:
            raise ValueError("omega and chh must be equal-length, non-empty 1-D sequences")
        if np.any(~np.isfinite(w)) or np.any(~np.isfinite(c)):
            raise ValueError("table contains non-finite values")
        if w[0] <= 0:
            raise ValueError(f"row 0: omega must be > 0, got {w[0]!r}")
        bad = np.flatnonzero(np.diff(w) <= 0)
        if bad.size:
            raise ValueError(f"row {bad[0] + 1}: omega not strictly increasing")
        neg = np.flatnonzero(c < 0)
        if neg.size:
            raise ValueError(f"row {neg[0]}: negative spectrum value {c[neg[0]]!r}")
        w.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "chh", c)

    def __len__(self):
        return self.omega.size

    def support(self):
        return float(self.omega[0]), float(self.omega[-1])

    def evaluate(self, omega):
        w = _as_abs(omega)
        lo, hi = self.support()
        if np.any((w < lo) | (w > hi)):
            raise DomainError(f"|omega| outside tabulated range [{lo:g}, {hi:g}] rad/s")
        flat = np.atleast_1d(w).ravel()
        out = np.empty_like(flat)
        k = np.searchsorted(self.omega, flat)
        at_knot = (k < self.omega.size) & (self.omega[np.minimum(k, self.omega.size - 1)] == flat)
        out[at_knot] = self.chh[k[at_knot]]
        rest = ~at_knot
        if np.any(rest):
            i1 = k[rest]
            i0 = i1 - 1
            w0, w1 = self.omega[i0], self.omega[i1]
            c0, c1 = self.chh[i0], self.chh[i1]
            x = flat[rest]
            positive = (c0 > 0) & (c1 > 0)
            with np.errstate(divide="ignore", invalid="ignore"):
                frac_log = np.log(x / w0) / np.log(w1 / w0)
                loglog = np.exp(np.log(c0) + frac_log * np.log(c1 / c0))
            linear = c0 + (x - w0) / (w1 - w0) * (c1 - c0)
            out[rest] = np.where(positive, loglog, linear)
        return _scalar_or_array(out.reshape(w.shape), omega)

    def scaled(self, time_unit):
        return Tabulated(self.omega * time_unit, self.chh / time_unit)


GwSpectrum = FlatBand | PowerLaw | Tabulated


def evaluate(spectrum: GwSpectrum, omega):
    return spectrum.evaluate(omega)


def flat_band_around(level: float, center: float, half_width: float) -> FlatBand:
    return FlatBand(level, center - half_width, center + half_width)


# ---------------------------------------------------------------------------
# Conversions


def coupling(constants: PhysicalConstants = CODATA_2018) -> float:
    """16 G / (5 c^5), the factor between C_hh and an energy per mode."""
    return 16.0 * constants.G / (5.0 * constants.c**5)


def chh_to_temperature(chh, constants: PhysicalConstants = CODATA_2018):
    if np.any(np.asarray(chh) < 0):
        raise ValueError("spectrum level must be >= 0")
    return chh / (coupling(constants) * constants.k_B)


def temperature_to_chh(T_gr, constants: PhysicalConstants = CODATA_2018):
    if np.any(np.asarray(T_gr) < 0):
        raise ValueError("temperature must be >= 0")
    return coupling(constants) * constants.k_B * T_gr


def vacuum_chh(omega: float, constants: PhysicalConstants = CODATA_2018) -> float:
    return coupling(constants) * 0.5 * constants.hbar * omega


def graviton_number(chh: float, omega: float, constants: PhysicalConstants = CODATA_2018) -> float:
    """Occupation number per mode, chh / (coupling hbar omega) - 1/2."""
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega!r}")
    quantum = coupling(constants) * constants.hbar * omega
    n = chh / quantum - 0.5
    if n < 0:
        if n > -1e-12:
            return 0.0
        raise SubVacuumError(f"chh = {chh:g} /Hz is below the vacuum level {0.5 * quantum:g} /Hz at omega = {omega:g}")
    return n


@dataclass(frozen=True)
class BackgroundThermodynamics:
    T_gr: float
    n_gr: float
    omega: float


def thermodynamics(chh: float, omega: float, constants: PhysicalConstants = CODATA_2018) -> BackgroundThermodynamics:
    return BackgroundThermodynamics(
        T_gr=chh_to_temperature(chh, constants),
        n_gr=graviton_number(chh, omega, constants),
        omega=omega,
    )


# ---------------------------------------------------------------------------
# Tabulated spectrum files

_ROW = re.compile(r"^\(?\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)?$")


def parse_tabulated_spectrum(text: str, source: str = "<string>") -> Tabulated:
    """Parse ``omega, chh`` records, one per line. ``#`` starts a comment line.

    Parenthesised records such as ``(6.3e-6, 1e-34)`` are accepted too.
    """
    omegas, values, lines = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _ROW.match(line)
        if match is None:
            raise SpectrumFileError(f"{source}:{lineno}: expected 'omega, chh', got {raw!r}")
        try:
            w, c = float(match.group(1)), float(match.group(2))
        except ValueError:
            raise SpectrumFileError(f"{source}:{lineno}: not a number in {raw!r}") from None
        omegas.append(w)
        values.append(c)
        lines.append(lineno)
    if not omegas:
        raise SpectrumFileError(f"{source}: no data rows")
    for i, (w, c) in enumerate(zip(omegas, values)):
        if not (math.isfinite(w) and w > 0):
            raise SpectrumFileError(f"{source}:{lines[i]}: omega must be finite and > 0")
        if not (math.isfinite(c) and c >= 0):
            raise SpectrumFileError(f"{source}:{lines[i]}: chh must be finite and >= 0")
        if i and w <= omegas[i - 1]:
            raise SpectrumFileError(f"{source}:{lines[i]}: row {i} not strictly increasing in omega")
    return Tabulated(np.array(omegas), np.array(values))


def load_tabulated_spectrum(path) -> Tabulated:
    with open(path, encoding="utf-8") as fh:
        return parse_tabulated_spectrum(fh.read(), str(path))
