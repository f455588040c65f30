"""Print both decoherence channels for the Earth-Moon system.

    python scripts/moon_report.py [--chh 1e-34] [--T-em 2.7]
"""

import argparse
import math
from dataclasses import replace

from gravidec.quantities import catalog_get, planck_length
from gravidec.rates import report_for_preset


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--chh", type=float, default=None, help="background level at 2 Omega [1/Hz]")
    parser.add_argument("--T-em", type=float, default=None, help="photon bath temperature [K]")
    args = parser.parse_args()

    preset = catalog_get("moon")
    if args.chh is not None:
        preset = replace(preset, chh_at_2omega=args.chh)
    if args.T_em is not None:
        preset = replace(preset, T_em=args.T_em)
    rep = report_for_preset(preset)

    print(f"reduced mass            {rep.m:.4e} kg")
    print(f"orbital frequency       {rep.Omega:.4e} rad/s  (2 Omega / 2 pi = {2 * rep.Omega / math.tau:.3e} Hz)")
    print(f"centripetal accel.      {rep.a:.4e} m/s^2")
    print(f"Gamma_gr                {rep.grav.Gamma_gr:.4e} 1/s")
    print(f"Gamma_em                {rep.em.Gamma_em:.4e} 1/s  ({rep.em.Gamma_em / rep.grav.Gamma_gr:.0f} x Gamma_gr)")
    print(f"T_gr                    {rep.grav.T_gr:.4e} K")
    print(f"n_gr                    {rep.n_gr:.4e}")
    print(f"Lambda_gr               {rep.grav.Lambda_gr:.4e} 1/(s m^2)")
    print(f"Lambda_em               {rep.em.Lambda_em:.4e} 1/(s m^2)")
    print(f"Lambda_gr / Lambda_em   {rep.ratio_direct:.4e}  (product form {rep.ratio_dimensionless:.4e})")
    print(f"t_dec at Planck length  {rep.t_dec_at(planck_length()) * 1e6:.3f} us")


if __name__ == "__main__":
    main()
