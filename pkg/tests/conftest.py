import pytest

from gravidec.orbit import orbit_from_masses_separation
from gravidec.quantities import catalog_get


@pytest.fixture(scope="session")
def moon():
    return catalog_get("moon")


@pytest.fixture(scope="session")
def moon_orbit(moon):
    return orbit_from_masses_separation(moon.m_a, moon.m_b, moon.rho)
