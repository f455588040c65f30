"""Stationary Gaussian noise with a prescribed two-sided spectrum.

Conventions (all normalisations live here)
------------------------------------------
Continuous transform and spectrum::

    X[omega] = integral dt x(t) exp(+i omega t)
    S[omega] = integral dtau <x(tau) x(0)> exp(+i omega tau)
    <|x|^2>  = (1 / 2 pi) integral d omega S[omega]

On a grid of ``n`` samples spaced ``dt`` (duration ``T = n dt``) the bin
frequencies are ``omega_k = 2 pi k / T`` (signed, numpy ``fftfreq`` order)
and the discrete analogue of ``X`` is ``X_k = dt sum_j x_j exp(+i omega_k t_j)``,
i.e. ``dt * n * ifft(x)``. The periodogram ``|X_k|^2 / T`` is an unbiased
estimate of ``S[omega_k]`` for a periodic process and
``sum_k S_k / T`` equals the mean square of the series (Parseval).

A component synthesised with ``E|X_k|^2 = T S[omega_k]`` therefore has
variance ``(1/T) sum_k S[omega_k]``, the Riemann sum of the continuous
normalisation integral.

The circular polarisation is ``h = (h_A - i h_B) / sqrt(2)`` with ``h_A``,
``h_B`` independent real processes of spectrum ``C_hh``; ``h`` has the same
spectrum ``C_hh`` and vanishing pseudo-covariance ``<h h>``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .background import GwSpectrum


class GridResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class SamplingGrid:
    n: int
    dt: float

    def __post_init__(self):
        if self.n < 16 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 16, got {self.n!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")

    @property
    def duration(self) -> float:
        return self.n * self.dt

    @property
    def nyquist(self) -> float:
        """Nyquist angular frequency pi / dt."""
        return math.pi / self.dt

    @property
    def d_omega(self) -> float:
        return 2.0 * math.pi / self.duration

    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.dt

    def omega(self) -> np.ndarray:
        """Signed bin frequencies in fft order."""
        return 2.0 * math.pi * np.fft.fftfreq(self.n, d=self.dt)

    def scaled(self, time_unit: float) -> "SamplingGrid":
        return SamplingGrid(self.n, self.dt / time_unit)


@dataclass(frozen=True)
class NoiseRealization:
    samples: np.ndarray = field(repr=False)
    grid: SamplingGrid
    seed: object = None
    target: GwSpectrum | None = None

    def __post_init__(self):
        if np.shape(self.samples) != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {np.shape(self.samples)}")


def transform(x, dt):
    """Discrete ``X_k = dt sum_j x_j exp(+i omega_k t_j)``."""
    x = np.asarray(x)
    n = x.shape[-1]
    return dt * n * np.fft.ifft(x, axis=-1)


def inverse_transform(X, dt):
    X = np.asarray(X)
    return np.fft.fft(X, axis=-1) / (dt * X.shape[-1])


def rng_for(seed) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by ``seed``.

    ``seed`` may be an int or a tuple of ints; ``(seed, i)`` gives the i-th
    independent stream of an ensemble, whatever order streams are drawn in.
    """
    entropy = list(seed) if isinstance(seed, (tuple, list)) else seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def spectrum_on_grid(spectrum: GwSpectrum, grid: SamplingGrid, band=None) -> np.ndarray:
    """Spectrum at the non-negative rfft bins, zero outside its support.

    ``band = (lo, hi)`` further restricts the support (needed for spectra
    that extend to infinite frequency).
    """
    lo, hi = spectrum.support()
    if band is not None:
        lo, hi = max(lo, band[0]), min(hi, band[1])
        if not lo < hi:
            raise GridResolutionError(f"band {band} does not overlap the spectrum support")
    if hi > grid.nyquist:
        deficit = hi / grid.nyquist
        raise GridResolutionError(
            f"spectrum extends to {hi:g} rad/s but the Nyquist frequency is {grid.nyquist:g} rad/s "
            f"(short by a factor {deficit:.3g}); reduce dt or band-limit the spectrum"
        )
    w = np.arange(grid.n // 2 + 1) * grid.d_omega
    inside = (w >= lo) & (w <= hi)
    if lo == 0 and getattr(spectrum, "exponent", 0) < 0:
        inside &= w > 0
    if not np.any(inside):
        raise GridResolutionError(
            f"no frequency bin of spacing {grid.d_omega:g} rad/s falls inside [{lo:g}, {hi:g}] rad/s; "
            "increase the duration"
        )
    out = np.zeros_like(w)
    out[inside] = spectrum.evaluate(w[inside])
    return out


def _real_component(rng, psd, grid):
    # rfft layout: bins 0..n/2; DC and Nyquist bins are real
    n = grid.n
    amp = np.sqrt(grid.duration * psd)
    re = rng.standard_normal(psd.size)
    im = rng.standard_normal(psd.size)
    coeff = amp * (re + 1j * im) / math.sqrt(2.0)
    coeff[0] = amp[0] * re[0]
    coeff[-1] = amp[-1] * re[-1]
    # irfft(c) = (1/n) sum c_k e^{+2 pi i jk/n}; the sign choice only conjugates
    # the coefficients, which leaves their distribution unchanged.
    return np.fft.irfft(coeff, n=n) / grid.dt


def synthesize(spectrum: GwSpectrum, grid: SamplingGrid, seed, band=None) -> NoiseRealization:
    """Draw one realisation of the circular polarisation h(t).

    Deterministic in ``(spectrum, grid, seed, band)``. The random stream
    does not depend on the spectrum, so two spectra with the same seed give
    coherently related series.
    """
    psd = spectrum_on_grid(spectrum, grid, band)
    rng = rng_for(seed)
    h_a = _real_component(rng, psd, grid)
    h_b = _real_component(rng, psd, grid)
    return NoiseRealization((h_a - 1j * h_b) / math.sqrt(2.0), grid, seed, spectrum)


def second_derivative(realization: NoiseRealization) -> NoiseRealization:
    """Spectral second derivative: Fourier coefficients times -omega_k^2."""
    grid = realization.grid
    w = grid.omega()
    coeff = np.fft.fft(realization.samples)
    out = np.fft.ifft(-(w**2) * coeff)
    if not np.iscomplexobj(realization.samples):
        out = out.real
    return NoiseRealization(out, grid, realization.seed, None)


@dataclass(frozen=True)
class PsdEstimate:
    omega: np.ndarray  # ascending, two-sided
    psd: np.ndarray

    def band_average(self, lo, hi, two_sided=True):
        """Mean estimate over bins with lo <= |omega| <= hi (or lo <= omega <= hi)."""
        w = np.abs(self.omega) if two_sided else self.omega
        sel = (w >= lo) & (w <= hi)
        if not np.any(sel):
            raise ValueError(f"no estimate bins in [{lo:g}, {hi:g}]")
        return float(np.mean(self.psd[sel]))

    def variance(self):
        """Integral of the estimate over omega / 2 pi."""
        d_omega = self.omega[1] - self.omega[0]
        return float(np.sum(self.psd) * d_omega / (2.0 * math.pi))


def estimate_psd(series, dt, segment_count: int = 1) -> PsdEstimate:
    """Averaged periodogram of mean-removed, non-overlapping rectangular segments.

    ``series`` may be real or complex and may carry leading batch axes, in
    which case all segments of all rows are averaged. Any trailing samples
    that do not fill a whole segment are dropped.
    """
    if isinstance(dt, SamplingGrid):
        dt = dt.dt
    x = np.asarray(series)
    if segment_count < 1:
        raise ValueError(f"segment_count must be >= 1, got {segment_count!r}")
    length = x.shape[-1] // segment_count
    if length < 2:
        raise ValueError(f"{segment_count} segments do not fit in a series of {x.shape[-1]} samples")
    segs = x[..., : length * segment_count].reshape(-1, segment_count, length).reshape(-1, length)
    segs = segs - segs.mean(axis=-1, keepdims=True)
    X = transform(segs, dt)
    psd = np.mean(np.abs(X) ** 2, axis=0) / (length * dt)
    omega = 2.0 * math.pi * np.fft.fftfreq(length, d=dt)
    order = np.argsort(omega, kind="stable")
    return PsdEstimate(omega[order], psd[order])


def write_realization_csv(realization: NoiseRealization, path) -> None:
    """Dump ``t, re(h), im(h)`` as UTF-8 CSV."""
    t = realization.grid.times()
    h = np.asarray(realization.samples, dtype=complex)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "re_h", "im_h"])
        for row in zip(t, h.real, h.imag):
            writer.writerow([f"{v:.16e}" for v in row])


def excess_kurtosis(x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float).ravel()
    x = x - x.mean()
    m2 = np.mean(x**2)
    return float(np.mean(x**4) / m2**2 - 3.0)
