"""Physical constants, Planck-scale quantities and scenario presets.

Everything is SI. Constants are the CODATA 2018 recommended values; four of
them (c, hbar via h, k_B) are exact by definition of the SI, G carries its
measured uncertainty of 2.2e-5 relative.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass(frozen=True)
class PhysicalConstants:
    G: float = 6.67430e-11  # m^3 kg^-1 s^-2
    c: float = 299792458.0  # m/s, exact
    hbar: float = 1.054571817e-34  # J s, exact to the digits shown
    k_B: float = 1.380649e-23  # J/K, exact

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"constant {f.name} must be finite and > 0, got {value!r}")


CODATA_2018 = PhysicalConstants()
NATURAL = PhysicalConstants(G=1.0, c=1.0, hbar=1.0, k_B=1.0)


def planck_mass(constants: PhysicalConstants = CODATA_2018) -> float:
    """sqrt(hbar c / G), about 21.8 micrograms."""
    return math.sqrt(constants.hbar * constants.c / constants.G)


def planck_length(constants: PhysicalConstants = CODATA_2018) -> float:
    """sqrt(hbar G / c^3)."""
    return math.sqrt(constants.hbar * constants.G / constants.c**3)


def compton_length(m: float, constants: PhysicalConstants = CODATA_2018) -> float:
    """Reduced Compton wavelength hbar / (m c) of a mass ``m`` [kg]."""
    if not m > 0:
        raise ValueError(f"mass must be positive, got {m!r}")
    return constants.hbar / (m * constants.c)


# ---------------------------------------------------------------------------
# Scenario presets

PRESET_KEYS = ("m_a", "m_b", "rho", "r", "T_em", "chh_at_2omega")


@dataclass(frozen=True)
class ScenarioPreset:
    """Inputs for one two-body decoherence scenario.

    ``m_a``, ``m_b`` are the component masses [kg], ``rho`` the separation
    [m], ``r`` the radius of the scattering body [m], ``T_em`` the photon
    bath temperature [K] and ``chh_at_2omega`` the gravitational-wave
    background level at twice the orbital frequency [1/Hz].
    """

    name: str
    m_a: float
    m_b: float
    rho: float
    r: float
    T_em: float
    chh_at_2omega: float
    source: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValueError("scenario name must be non-empty")
        for key in PRESET_KEYS:
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"scenario {self.name!r}: {key} must be finite and > 0, got {value!r}")


def _touching_spheres(name: str, m_total: float, density: float, T_em: float, chh: float, source: str):
    r = (3.0 * (m_total / 2.0) / (4.0 * math.pi * density)) ** (1.0 / 3.0)
    return ScenarioPreset(name, m_total / 2.0, m_total / 2.0, 2.0 * r, r, T_em, chh, source)


# Earth and Moon: IAU 2015 nominal Earth mass, Moon/Earth mass ratio
# 0.0123000371, mean Earth-Moon distance, mean lunar radius.
_BUILTIN = (
    ScenarioPreset(
        "moon",
        m_a=5.972e24,
        m_b=7.346e22,
        rho=3.844e8,
        r=1.737e6,
        T_em=2.7,
        chh_at_2omega=1e-34,
        source="Earth-Moon; standard astronomical constants, CMB bath, galactic confusion background 1e-34 /Hz (literature spread 10^-34.5 to 10^-33)",
    ),
    _touching_spheres(
        "lab_spheres",
        m_total=1.0e3,
        density=8000.0,
        T_em=2.7,
        chh=1e-34,
        source="two touching steel spheres, 1 t total, same background level as the Moon",
    ),
)

BUILTIN_CATALOG = {p.name: p for p in _BUILTIN}

CATALOG_ENV = "GRAVIDEC_CATALOG"


class UnknownScenarioError(LookupError):
    pass


def load_catalog_file(path) -> dict[str, ScenarioPreset]:
    """Read presets from an INI-style ``key = value`` file, one section per scenario.

    Keys: m_a, m_b, rho, r, T_em, chh (alias of chh_at_2omega), source.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    presets = {}
    for section in parser.sections():
        items = dict(parser.items(section))
        if "chh" in items:
            items["chh_at_2omega"] = items.pop("chh")
        unknown = set(items) - set(PRESET_KEYS) - {"source"}
        if unknown:
            raise ValueError(f"{path}: [{section}] unknown keys {sorted(unknown)}")
        missing = [k for k in PRESET_KEYS if k not in items]
        if missing:
            raise ValueError(f"{path}: [{section}] missing keys {missing}")
        values = {k: float(items[k]) for k in PRESET_KEYS}
        presets[section] = ScenarioPreset(section, source=items.get("source", str(path)), **values)
    return presets


def catalog(extra_path=None) -> dict[str, ScenarioPreset]:
    """Built-in presets merged with an optional scenario file.

    When ``extra_path`` is None the ``GRAVIDEC_CATALOG`` environment
    variable is consulted. File entries may not shadow built-in names.
    """
    merged = dict(BUILTIN_CATALOG)
    if extra_path is None:
        extra_path = os.environ.get(CATALOG_ENV) or None
    if extra_path is not None:
        for name, preset in load_catalog_file(Path(extra_path)).items():
            if name in merged:
                raise ValueError(f"scenario {name!r} in {extra_path} duplicates an existing preset")
            merged[name] = preset
    return merged


def catalog_get(name: str, extra_path=None) -> ScenarioPreset:
    presets = catalog(extra_path)
    try:
        return presets[name]
    except KeyError:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(presets))}"
        ) from None
