"""Crossover mass for touching spheres across densities, photon temperatures and background levels.

Writes CSV to stdout: density, T_em, chh, crossover mass [kg], sphere radius [m].
"""

import argparse
import csv
import itertools
import sys

from gravidec.rates import NoCrossoverError, TouchingSpheres, crossover_mass

DENSITIES = (2700.0, 8000.0, 11340.0, 19300.0)
TEMPERATURES = (0.1, 2.7, 300.0)
LEVELS = (1e-36, 1e-35, 1e-34, 1e-33)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bracket", nargs=2, type=float, default=(1e-6, 1e15), metavar=("LO", "HI"))
    args = parser.parse_args()

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["density", "T_em", "chh", "m_crossover", "radius"])
    for density, T_em, chh in itertools.product(DENSITIES, TEMPERATURES, LEVELS):
        try:
            m = crossover_mass(density, T_em, chh, bracket=tuple(args.bracket))
            radius = TouchingSpheres(m, density).radius
            writer.writerow([density, T_em, chh, f"{m:.6e}", f"{radius:.6e}"])
        except NoCrossoverError:
            writer.writerow([density, T_em, chh, "", ""])


if __name__ == "__main__":
    main()
