"""Monte Carlo check of the momentum diffusion and dephasing predictions.

Runs the Earth-Moon ensemble with a flat band around 2 Omega and prints,
per checkpoint inside the window where the predicted coherence lies in
[0.1, 0.9], the measured coherence, the prediction and the deviation in
units of the jackknife error. Several seeds can be compared to see how
large the relative deviation is from sampling noise alone.

    python scripts/mc_validation.py --ensemble 1000 --seeds 2026 2027 2028
"""

import argparse
import os
import time

import numpy as np

from gravidec.orbit import orbit_from_masses_separation
from gravidec.quantities import catalog_get
from gravidec.simulation import flat_band_config, run_ensemble


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ensemble", type=int, default=1000)
    parser.add_argument("--periods", type=int, default=1024)
    parser.add_argument("--seeds", type=int, nargs="+", default=[2026])
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--verbose", action="store_true", help="print every checkpoint in the window")
    args = parser.parse_args()

    moon = catalog_get("moon")
    orbit = orbit_from_masses_separation(moon.m_a, moon.m_b, moon.rho)
    for seed in args.seeds:
        config = flat_band_config(orbit, moon.chh_at_2omega, ensemble_size=args.ensemble, seed=seed, periods=args.periods)
        start = time.perf_counter()
        stats = run_ensemble(config, workers=args.workers)
        elapsed = time.perf_counter() - start

        predicted = stats.analytic_dephasing()
        measured = np.abs(stats.dephasing)
        window = (predicted >= 0.1) & (predicted <= 0.9)
        z = (measured - predicted) / stats.dephasing_stderr
        rel = np.abs(measured - predicted) / predicted
        print(
            f"seed {seed}: D_fit/D_an = {stats.diffusion_ratio:.4f} +/- {stats.D_fit_stderr / stats.D_analytic:.4f}, "
            f"R^2 = {stats.r_squared:.4f}, max rel dev = {rel[window].max():.3f}, "
            f"max |z| = {np.abs(z[window]).max():.2f}, "
            f"gaussian identity max = {np.abs(stats.gaussian_identity_sigmas()).max():.2f} sigma, {elapsed:.1f} s"
        )
        if args.verbose:
            for t, p, m, e in zip(stats.times[window], predicted[window], measured[window], stats.dephasing_stderr[window]):
                print(f"    t = {t:.4e} s  predicted {p:.4f}  measured {m:.4f} +/- {e:.4f}")


if __name__ == "__main__":
    main()
