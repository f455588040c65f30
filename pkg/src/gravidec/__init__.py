"""Decoherence of circular two-body orbits by a stochastic gravitational-wave background."""

from .background import (
    FlatBand,
    PowerLaw,
    Tabulated,
    chh_to_temperature,
    graviton_number,
    load_tabulated_spectrum,
    temperature_to_chh,
)
from .orbit import TwoBodyOrbit, orbit_from_masses_separation
from .quantities import CODATA_2018, PhysicalConstants, catalog_get, compton_length, planck_length, planck_mass
from .rates import (
    build_report,
    crossover_mass,
    decoherence_rate,
    decoherence_time,
    em_damping_rate,
    grav_damping_rate,
    grav_diffusion,
    ratio_dimensionless,
    report_for_preset,
)
from .simulation import SimConfig, flat_band_config, run_ensemble

__version__ = "0.1.0"
