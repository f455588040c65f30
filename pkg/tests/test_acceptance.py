"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line (with output
capture disabled, so the line is visible under plain ``pytest -v``) and then
asserts. Tolerances are pinned as module constants next to each test.
Run just this file with ``pytest tests/test_acceptance.py -v``.
"""

import os
import time
import warnings

import numpy as np
import pytest

from gravidec.background import FlatBand, chh_to_temperature, graviton_number
from gravidec.cli import main
from gravidec.noise import SamplingGrid, estimate_psd, excess_kurtosis, synthesize
from gravidec.quantities import planck_length
from gravidec.rates import (
    crossover_mass,
    decoherence_time,
    einstein_diffusion,
    em_channel,
    grav_channel,
    grav_damping_rate,
    grav_diffusion,
    ratio_direct,
    ratio_dimensionless,
    report_for_preset,
)
from gravidec.simulation import MIN_CORRELATION_TIMES, flat_band_config, run_ensemble

CHH = 1e-34
MC_SEED = 2026
MC_ENSEMBLE = 1000


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return emit


@pytest.fixture(scope="module")
def moon_report(moon):
    return report_for_preset(moon)


@pytest.fixture(scope="module")
def mc(moon_orbit):
    config = flat_band_config(moon_orbit, CHH, ensemble_size=MC_ENSEMBLE, seed=MC_SEED)
    start = time.perf_counter()
    stats = run_ensemble(config, workers=os.cpu_count() or 1)
    return config, stats, time.perf_counter() - start


def test_criterion_01_effective_temperature(verdict):
    T = chh_to_temperature(CHH)
    ok = 5e40 <= T <= 2e41
    verdict(1, ok, f"T_gr(1e-34 /Hz) = {T:.4e} K, want [5e40, 2e41]")
    assert ok


def test_criterion_02_graviton_number(verdict, moon_orbit):
    n = graviton_number(CHH, 2 * moon_orbit.Omega)
    ok = 1e57 <= n <= 4e57
    verdict(2, ok, f"n_gr = {n:.4e}, want [1e57, 4e57]")
    assert ok


def test_criterion_03_grav_damping(verdict, moon_report):
    g = moon_report.grav.Gamma_gr
    ok = 5e-35 <= g <= 2e-34
    verdict(3, ok, f"Gamma_gr = {g:.4e} /s, want [5e-35, 2e-34]")
    assert ok


def test_criterion_04_em_damping(verdict, moon_report):
    g, ratio = moon_report.em.Gamma_em, moon_report.em.Gamma_em / moon_report.grav.Gamma_gr
    ok = 1e-32 <= g <= 4e-32 and 100 <= ratio <= 400
    verdict(4, ok, f"Gamma_em = {g:.4e} /s, want [1e-32, 4e-32]; Gamma_em/Gamma_gr = {ratio:.1f}, want [100, 400]")
    assert ok


def test_criterion_05_decoherence_rate(verdict, moon_report):
    lam = moon_report.grav.Lambda_gr
    ok = 2e74 <= lam <= 2e75
    verdict(5, ok, f"Lambda_gr = {lam:.4e} /s/m^2, want [2e74, 2e75]")
    assert ok


def test_criterion_06_planck_length_time(verdict, moon_report):
    t = decoherence_time(moon_report.grav.Lambda_gr, planck_length())
    ok = 1e-6 <= t <= 30e-6
    verdict(6, ok, f"t_dec(l_P) = {t * 1e6:.3f} us, want [1, 30] us")
    assert ok


def test_criterion_07_channel_ratio(verdict, moon_report):
    r = moon_report.ratio_direct
    ok = 1e37 <= r <= 1e39
    verdict(7, ok, f"Lambda_gr/Lambda_em = {r:.4e}, want [1e37, 1e39]")
    assert ok


def test_criterion_08_crossover_mass(verdict):
    m = crossover_mass(8000.0, 2.7, CHH)
    ok = 1e2 <= m <= 1e4
    verdict(8, ok, f"crossover total mass = {m:.4g} kg, want [1e2, 1e4] kg")
    assert ok


IDENTITY_SCENARIOS = 10_000
IDENTITY_RTOL = 1e-10
IDENTITY_SECONDS = 5.0


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def test_criterion_09_algebraic_identities(verdict):
    rng = np.random.default_rng(9)
    logu = lambda lo, hi: 10.0 ** rng.uniform(lo, hi, IDENTITY_SCENARIOS)
    m, rho, Omega = logu(-3, 30), logu(-2, 12), logu(-9, 2)
    r = rho * logu(-4, -0.4)
    T_em, chh = logu(-1, 4), logu(-45, -25)
    worst_einstein = worst_ratio = 0.0
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i in range(IDENTITY_SCENARIOS):
            a = rho[i] * Omega[i] ** 2
            T_gr = chh_to_temperature(chh[i])
            D = grav_diffusion(m[i], a, chh[i])
            closure = einstein_diffusion(m[i], grav_damping_rate(m[i], a), T_gr)
            worst_einstein = max(worst_einstein, _rel(D, closure))
            direct = ratio_direct(grav_channel(m[i], a, chh[i]), em_channel(m[i], r[i], T_em[i]))
            product = ratio_dimensionless(m[i], rho[i], r[i], Omega[i], T_em[i], T_gr)
            worst_ratio = max(worst_ratio, _rel(direct, product))
    elapsed = time.perf_counter() - start
    ok = worst_einstein <= IDENTITY_RTOL and worst_ratio <= IDENTITY_RTOL and elapsed < IDENTITY_SECONDS
    verdict(
        9,
        ok,
        f"{IDENTITY_SCENARIOS} scenarios in {elapsed:.2f} s; max rel dev Einstein {worst_einstein:.2e}, "
        f"ratio forms {worst_ratio:.2e}, want <= {IDENTITY_RTOL:g} in < {IDENTITY_SECONDS:g} s",
    )
    assert ok


D_RATIO_RANGE = (0.9, 1.1)
MC_SECONDS = 60.0


def test_criterion_10_monte_carlo_diffusion(verdict, mc):
    config, stats, elapsed = mc
    windows = config.grid.duration / config.correlation_time
    ratio = stats.diffusion_ratio
    ok = D_RATIO_RANGE[0] <= ratio <= D_RATIO_RANGE[1] and windows >= MIN_CORRELATION_TIMES and elapsed < MC_SECONDS
    verdict(
        10,
        ok,
        f"D_fit/D_analytic = {ratio:.4f} +/- {stats.D_fit_stderr / stats.D_analytic:.4f} "
        f"(N = {stats.ensemble_size}, {windows:.0f} correlation times, {elapsed:.1f} s), want [0.9, 1.1]",
    )
    assert ok


DEPHASING_RTOL = 0.05
GAUSSIAN_SIGMAS = 3.0


def test_criterion_11_monte_carlo_dephasing(verdict, mc):
    _, stats, _ = mc
    deviation = stats.dephasing_deviation(0.1, 0.9)
    sigmas = float(np.max(np.abs(stats.gaussian_identity_sigmas())))
    ok = deviation <= DEPHASING_RTOL and sigmas <= GAUSSIAN_SIGMAS
    verdict(
        11,
        ok,
        f"max rel dev |<exp(i dS)>| vs exp(-L dx^2 t) on [0.1, 0.9] = {deviation:.4f}, want <= {DEPHASING_RTOL}; "
        f"gaussian identity max = {sigmas:.2f} sigma, want <= {GAUSSIAN_SIGMAS}",
    )
    assert ok


PSD_RTOL = 0.05
KURTOSIS_ATOL = 0.1
NOISE_SAMPLES = 2**20
NOISE_SEGMENTS = 200


def test_criterion_12_noise_fidelity(verdict):
    level, lo, hi = 3.0, 0.4, 1.6
    grid = SamplingGrid(NOISE_SAMPLES, 1.0)
    h = synthesize(FlatBand(level, lo, hi), grid, 12)
    estimate = estimate_psd(h.samples, grid, NOISE_SEGMENTS)
    band = estimate.band_average(lo, hi)
    psd_err = abs(band / level - 1)
    pooled = np.concatenate([h.samples.real, h.samples.imag])
    kurt = excess_kurtosis(pooled)
    ok = psd_err <= PSD_RTOL and abs(kurt) <= KURTOSIS_ATOL
    verdict(
        12,
        ok,
        f"band average {band:.4f} vs {level} (rel err {psd_err:.4f}, want <= {PSD_RTOL}); "
        f"excess kurtosis {kurt:+.4f} over {pooled.size} samples, want |k| <= {KURTOSIS_ATOL}",
    )
    assert ok


DETERMINISM_RUNS = [
    ["rates", "--scenario", "moon", "--format", "json"],
    ["sweep", "--scenario", "lab_spheres", "--sweep", "m_total:1:1e6:13:log"],
    ["spectrum", "--omega", "1e-6", "--omega", "5.3e-6", "--format", "csv"],
    ["catalog", "--format", "csv"],
    ["simulate", "--set", "ensemble=64", "--set", "periods=256", "--set", "workers=4", "--seed", "13"],
]


def test_criterion_13_determinism(verdict, tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GRAVIDEC_CATALOG", raising=False)
    identical = []
    for k, argv in enumerate(DETERMINISM_RUNS):
        outputs = []
        for rep in range(2):
            path = tmp_path / f"run{k}_{rep}.out"
            main(argv + ["--output", str(path)])
            outputs.append(path.read_bytes())
        identical.append(outputs[0] == outputs[1] and len(outputs[0]) > 0)
    capsys.readouterr()
    ok = all(identical)
    names = ", ".join(f"{argv[0]}={'same' if same else 'DIFFER'}" for argv, same in zip(DETERMINISM_RUNS, identical))
    verdict(13, ok, f"repeat runs byte-identical: {names}")
    assert ok
