"""Monte Carlo check of the white-noise diffusion and dephasing laws.

Each realisation draws the circular polarisation h(t) of the background,
forms the projected force on the unperturbed circular orbit

    F(t) = (m rho / sqrt 2) Re[h''(t) exp(2 i (Omega t + theta))],

integrates the momentum kick p_t, and records the action difference
dS_t = p_t dx between two neighbouring motions. Ensemble averages of p_t^2
and exp(i dS_t / hbar) are compared with 2 D t and exp(-Lambda dx^2 t).

Internally the run uses units with hbar = Omega = rho = 1 (mass unit
hbar / (rho^2 Omega)); results are mapped back to SI.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .background import GwSpectrum, flat_band_around
from .noise import NoiseRealization, SamplingGrid, second_derivative, synthesize
from .orbit import TwoBodyOrbit

MIN_CORRELATION_TIMES = 50


class InsufficientDurationError(ValueError):
    pass


@dataclass(frozen=True)
class UnitScale:
    """Simulator units expressed in SI."""

    mass: float
    length: float
    time: float

    @classmethod
    def for_orbit(cls, orbit: TwoBodyOrbit) -> "UnitScale":
        time = 1.0 / orbit.Omega if orbit.Omega > 0 else 1.0
        length = orbit.rho
        return cls(mass=orbit.constants.hbar * time / length**2, length=length, time=time)

    @property
    def momentum(self) -> float:
        return self.mass * self.length / self.time

    @property
    def force(self) -> float:
        return self.mass * self.length / self.time**2


@dataclass(frozen=True)
class SimConfig:
    orbit: TwoBodyOrbit
    spectrum: GwSpectrum
    grid: SamplingGrid
    ensemble_size: int
    delta_x: float | None = None  # None: chosen so that Lambda dx^2 T = 3
    seed: int = 0
    band: tuple[float, float] | None = None
    checkpoints: int = 64
    unit_scale: UnitScale = field(init=False)

    def __post_init__(self):
        if self.ensemble_size < 2:
            raise ValueError(f"ensemble_size must be >= 2, got {self.ensemble_size!r}")
        if not self.grid.dt * 2.0 * self.orbit.Omega < math.pi / 2:
            raise ValueError(
                f"dt = {self.grid.dt:g} s does not resolve the force oscillation at 2 Omega "
                f"(need dt * 2 Omega < pi/2, got {self.grid.dt * 2 * self.orbit.Omega:.3g})"
            )
        if self.delta_x is not None and not self.delta_x >= 0:
            raise ValueError(f"delta_x must be >= 0, got {self.delta_x!r}")
        if not 4 <= self.checkpoints <= self.grid.n // 2:
            raise ValueError(f"checkpoints must lie in [4, n/2], got {self.checkpoints!r}")
        object.__setattr__(self, "unit_scale", UnitScale.for_orbit(self.orbit))

    def synthesized_band(self) -> tuple[float, float]:
        lo, hi = self.spectrum.support()
        if self.band is not None:
            lo, hi = max(lo, self.band[0]), min(hi, self.band[1])
        return lo, min(hi, self.grid.nyquist)

    @property
    def correlation_time(self) -> float:
        lo, hi = self.synthesized_band()
        return 2.0 * math.pi / (hi - lo)


def flat_band_config(
    orbit: TwoBodyOrbit,
    level: float,
    ensemble_size: int = 1000,
    seed: int = 0,
    periods: int = 1024,
    samples_per_period: int = 16,
    half_width_bins: int = 32,
    delta_x: float | None = None,
) -> SimConfig:
    """Flat spectrum on a band centred on 2 Omega, sized in frequency bins.

    The duration spans ``2 * half_width_bins`` correlation times.
    """
    grid = SamplingGrid(periods * samples_per_period, orbit.period / samples_per_period)
    spectrum = flat_band_around(level, 2.0 * orbit.Omega, half_width_bins * grid.d_omega)
    return SimConfig(orbit, spectrum, grid, ensemble_size, delta_x=delta_x, seed=seed)


def force_series(orbit: TwoBodyOrbit, h: NoiseRealization, grid: SamplingGrid | None = None) -> np.ndarray:
    """Projected differential force along the mean motion, real-valued."""
    if grid is not None and h.grid != grid:
        raise ValueError(f"realisation grid {h.grid} does not match {grid}")
    if orbit.a == 0:
        return np.zeros(h.grid.n)
    hddot = second_derivative(h).samples
    psi = 2.0 * (orbit.Omega * h.grid.times() + orbit.theta)
    return orbit.m * orbit.rho / math.sqrt(2.0) * (hddot * np.exp(1j * psi)).real


def integrate_momentum(force, dt) -> np.ndarray:
    """Cumulative trapezoid, starting at p = 0."""
    if isinstance(dt, SamplingGrid):
        dt = dt.dt
    force = np.asarray(force, dtype=float)
    p = np.empty_like(force)
    p[0] = 0.0
    np.cumsum(0.5 * (force[1:] + force[:-1]) * dt, out=p[1:])
    return p


def cff_zero_analytic(orbit: TwoBodyOrbit, spectrum: GwSpectrum) -> float:
    """Zero-frequency force spectrum 4 m^2 a^2 C_hh[2 Omega] = 2 D."""
    if orbit.a == 0:
        return 0.0
    return 4.0 * orbit.m**2 * orbit.a**2 * float(spectrum.evaluate(2.0 * orbit.Omega))


def checkpoint_indices(n: int, count: int) -> np.ndarray:
    """``count`` distinct, roughly log-spaced sample indices ending at n - 1."""
    last = n - 1
    first = max(1, last // 1024)
    if count > last - first + 1:
        raise ValueError(f"cannot place {count} distinct checkpoints on {n} samples")
    idx = np.unique(np.round(np.geomspace(first, last, count)).astype(int))
    # fill any collisions from the dense low end upward
    while idx.size < count:
        missing = np.setdiff1d(np.arange(first, last + 1), idx)[: count - idx.size]
        idx = np.union1d(idx, missing)
    return idx


def _jackknife_se(leave_one_out: np.ndarray) -> np.ndarray:
    n = leave_one_out.shape[0]
    dev = leave_one_out - leave_one_out.mean(axis=0)
    return np.sqrt((n - 1) / n * np.sum(dev**2, axis=0))


@dataclass(frozen=True)
class EnsembleStatistics:
    times: np.ndarray  # s
    p_var: np.ndarray  # kg^2 m^2 s^-2
    p_var_stderr: np.ndarray
    dephasing: np.ndarray  # complex
    dephasing_stderr: np.ndarray  # of |dephasing|
    gaussian_dephasing: np.ndarray  # exp(-<dS^2> / 2 hbar^2) from the same ensemble
    gaussian_gap_stderr: np.ndarray  # of |dephasing| - gaussian_dephasing
    D_fit: float
    D_fit_stderr: float
    r_squared: float
    D_analytic: float
    Lambda_analytic: float
    delta_x: float
    ensemble_size: int

    def analytic_2Dt(self) -> np.ndarray:
        return 2.0 * self.D_analytic * self.times

    def analytic_dephasing(self) -> np.ndarray:
        return np.exp(-self.Lambda_analytic * self.delta_x**2 * self.times)

    @property
    def diffusion_ratio(self) -> float:
        return self.D_fit / self.D_analytic if self.D_analytic > 0 else math.nan

    def dephasing_deviation(self, lo=0.1, hi=0.9) -> float:
        """Largest relative deviation of |dephasing| from the analytic decay where the latter is in [lo, hi]."""
        predicted = self.analytic_dephasing()
        sel = (predicted >= lo) & (predicted <= hi)
        if not np.any(sel):
            return math.nan
        return float(np.max(np.abs(np.abs(self.dephasing[sel]) - predicted[sel]) / predicted[sel]))

    def gaussian_identity_sigmas(self) -> np.ndarray:
        """|dephasing| - exp(-<dS^2>/2hbar^2) in units of its jackknife error (0 where the error vanishes)."""
        gap = np.abs(self.dephasing) - self.gaussian_dephasing
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(self.gaussian_gap_stderr > 0, gap / self.gaussian_gap_stderr, 0.0)
        return np.where(gap == 0, 0.0, z)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["t", "p_var", "p_var_stderr", "dephasing_re", "dephasing_im", "dephasing_stderr",
             "analytic_2Dt", "analytic_dephasing"]
        )
        cols = (self.times, self.p_var, self.p_var_stderr, self.dephasing.real, self.dephasing.imag,
                self.dephasing_stderr, self.analytic_2Dt(), self.analytic_dephasing())
        for row in zip(*cols):
            writer.writerow([f"{v:.16e}" for v in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text


def _scaled_orbit(orbit: TwoBodyOrbit, scale: UnitScale) -> TwoBodyOrbit:
    return TwoBodyOrbit(
        orbit.m_a / scale.mass,
        orbit.m_b / scale.mass,
        orbit.rho / scale.length,
        orbit.Omega * scale.time,
        orbit.theta,
        orbit.constants,
    )


def sample_momenta(config: SimConfig, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Momentum kicks at the checkpoints for every realisation, in simulator units.

    Returns ``(checkpoint_times_scaled, P)`` with ``P[i]`` the i-th
    realisation; row order is the realisation index whatever ``workers`` is.
    """
    scale = config.unit_scale
    grid = config.grid.scaled(scale.time)
    spectrum = config.spectrum.scaled(scale.time)
    band = None if config.band is None else (config.band[0] * scale.time, config.band[1] * scale.time)
    orbit = _scaled_orbit(config.orbit, scale)
    idx = checkpoint_indices(grid.n, config.checkpoints)

    def one(i):
        h = synthesize(spectrum, grid, (config.seed, i), band)
        return integrate_momentum(force_series(orbit, h, grid), grid.dt)[idx]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(config.ensemble_size)))
    else:
        rows = [one(i) for i in range(config.ensemble_size)]
    return idx * grid.dt, np.array(rows)


def run_ensemble(config: SimConfig, workers: int = 1) -> EnsembleStatistics:
    if config.grid.duration < MIN_CORRELATION_TIMES * config.correlation_time:
        raise InsufficientDurationError(
            f"duration {config.grid.duration:g} s covers only "
            f"{config.grid.duration / config.correlation_time:.1f} correlation times of the synthesized band "
            f"(need >= {MIN_CORRELATION_TIMES}); lengthen the run or widen the band"
        )
    scale = config.unit_scale
    hbar = config.orbit.constants.hbar
    D_analytic = 0.5 * cff_zero_analytic(config.orbit, config.spectrum)
    Lambda = D_analytic / hbar**2
    if config.delta_x is not None:
        delta_x = config.delta_x
    elif Lambda > 0:
        delta_x = math.sqrt(3.0 / (Lambda * config.grid.duration))
    else:
        delta_x = 0.0

    t_s, P = sample_momenta(config, workers)
    n = P.shape[0]
    phase = P * (delta_x / scale.length)  # dS / hbar with hbar = 1

    p2 = P**2
    p2_sum = p2.sum(axis=0)
    p_var = p2_sum / n
    p_var_loo = (p2_sum - p2) / (n - 1)

    z = np.exp(1j * phase)
    z_sum = z.sum(axis=0)
    z_mean = z_sum / n
    z_loo = (z_sum - z) / (n - 1)

    dx_s2 = (delta_x / scale.length) ** 2
    gauss = np.exp(-0.5 * dx_s2 * p_var)
    gap_loo = np.abs(z_loo) - np.exp(-0.5 * dx_s2 * p_var_loo)

    half = t_s.size // 2
    tw = t_s[half:]
    weights = (tw - tw.mean()) / np.sum((tw - tw.mean()) ** 2)
    slope = weights @ p_var[half:]
    slope_loo = p_var_loo[:, half:] @ weights
    fit = p_var[half:].mean() + slope * (tw - tw.mean())
    ss_tot = np.sum((p_var[half:] - p_var[half:].mean()) ** 2)
    r_squared = 1.0 - np.sum((p_var[half:] - fit) ** 2) / ss_tot if ss_tot > 0 else math.nan

    p_unit2 = scale.momentum**2
    d_unit = p_unit2 / scale.time
    return EnsembleStatistics(
        times=t_s * scale.time,
        p_var=p_var * p_unit2,
        p_var_stderr=_jackknife_se(p_var_loo) * p_unit2,
        dephasing=z_mean,
        dephasing_stderr=_jackknife_se(np.abs(z_loo)),
        gaussian_dephasing=gauss,
        gaussian_gap_stderr=_jackknife_se(gap_loo),
        D_fit=0.5 * slope * d_unit,
        D_fit_stderr=0.5 * float(_jackknife_se(slope_loo)) * d_unit,
        r_squared=float(r_squared),
        D_analytic=D_analytic,
        Lambda_analytic=Lambda,
        delta_x=delta_x,
        ensemble_size=n,
    )
