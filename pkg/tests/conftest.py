import pytest

from pseudogas.core import GasSpec, thermal_wavelength

HELIUM_MASS = 6.6465e-27


@pytest.fixture
def helium_gas():
    """Spinless gas with eta = 0.01 exactly by construction (up to rounding)."""

    def make(eta=0.01, g_A=1, count=1e20, T=300.0, statistics="boltzmann"):
        lam = thermal_wavelength(HELIUM_MASS, T)
        return GasSpec(count, count * lam**3 / eta, T, HELIUM_MASS, g_A - 1, statistics)

    return make
