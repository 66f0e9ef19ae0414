"""Physical constants, gas descriptions and the reduced (dimensionless) state.

Everything downstream is a function of the reduced state alone; SI units are
only handled here.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import NonPositiveInput, SpinStatisticsMismatch


@dataclass(frozen=True)
class PhysicalConstants:
    """Exact SI-defined constants (2019 redefinition)."""

    planck_h: float = 6.62607015e-34
    boltzmann_kB: float = 1.380649e-23
    hbar: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "hbar", self.planck_h / (2.0 * math.pi))


CONSTANTS = PhysicalConstants()
PLANCK_H = CONSTANTS.planck_h
BOLTZMANN_KB = CONSTANTS.boltzmann_kB
HBAR = CONSTANTS.hbar


class Statistics(enum.Enum):
    BOSE = "bose"
    FERMI = "fermi"
    BOLTZMANN = "boltzmann"

    @property
    def sign(self) -> int:
        """+1 for Fermi, -1 for Bose, 0 for the classical reference."""
        return {"fermi": 1, "bose": -1, "boltzmann": 0}[self.value]

    @classmethod
    def parse(cls, value) -> "Statistics":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown statistics {value!r}") from None


def validate_spin_statistics(spin_two_sA: int, statistics: Statistics) -> bool:
    """Spin-statistics parity rule.

    Integer spin (even ``2 s_A``) is a boson, half-integer spin a fermion.
    The classical reference accepts any spin.
    """
    if statistics is Statistics.BOLTZMANN:
        return True
    if spin_two_sA % 2 == 0:
        return statistics is Statistics.BOSE
    return statistics is Statistics.FERMI


def pair_spin_degeneracies(g_A: int) -> tuple[int, int]:
    """Split the ``g_A**2`` two-spin states into exchange-(anti)symmetric sets.

    Returns ``(g_plus, g_minus)``: the symmetric subspace has dimension
    ``g_A (g_A + 1) / 2``, the antisymmetric one ``g_A (g_A - 1) / 2``.
    """
    if g_A < 1:
        raise NonPositiveInput(f"g_A must be >= 1, got {g_A}")
    return g_A * (g_A + 1) // 2, g_A * (g_A - 1) // 2


def thermal_wavelength(mass_m: float, temperature_T: float) -> float:
    """de Broglie thermal wavelength h / sqrt(2 pi m kB T), in metres."""
    return PLANCK_H / math.sqrt(2.0 * math.pi * mass_m * BOLTZMANN_KB * temperature_T)


def single_particle_partition(volume_V: float, mass_m: float, temperature_T: float) -> float:
    """Translational partition function V (2 pi m kB T)^{3/2} / h^3."""
    return volume_V * (2.0 * math.pi * mass_m * BOLTZMANN_KB * temperature_T) ** 1.5 / PLANCK_H**3


@dataclass(frozen=True)
class GasSpec:
    """Physical description of an ideal gas in SI units.

    ``count_N`` is real-valued on purpose: the equilibrium chemistry treats
    particle numbers as continuous.
    """

    count_N: float
    volume_V: float
    temperature_T: float
    mass_m: float
    spin_two_sA: int = 0
    statistics: Statistics = Statistics.BOLTZMANN

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        for name in ("count_N", "volume_V", "temperature_T", "mass_m"):
            value = getattr(self, name)
            if not value > 0 or not math.isfinite(value):
                raise NonPositiveInput(f"{name} must be positive and finite, got {value!r}")
        if int(self.spin_two_sA) != self.spin_two_sA or self.spin_two_sA < 0:
            raise NonPositiveInput(f"spin_two_sA must be a non-negative integer, got {self.spin_two_sA!r}")
        if not validate_spin_statistics(self.spin_two_sA, self.statistics):
            raise SpinStatisticsMismatch(
                f"2*s_A = {self.spin_two_sA} is incompatible with {self.statistics.value} statistics"
            )

    @property
    def g_A(self) -> int:
        return int(self.spin_two_sA) + 1

    @property
    def beta(self) -> float:
        return 1.0 / (BOLTZMANN_KB * self.temperature_T)


@dataclass(frozen=True)
class ReducedState:
    eta: float
    eta_sp: float
    g_A: int
    statistics: Statistics
    lambda_thermal: float = math.nan
    Z0: float = math.nan

    @classmethod
    def from_eta(cls, eta: float, g_A: int = 1, statistics=Statistics.BOLTZMANN) -> "ReducedState":
        """Dimensionless state without an underlying physical gas."""
        if eta < 0:
            raise NonPositiveInput(f"eta must be >= 0, got {eta}")
        if g_A < 1:
            raise NonPositiveInput(f"g_A must be >= 1, got {g_A}")
        return cls(eta=eta, eta_sp=eta / g_A, g_A=g_A, statistics=Statistics.parse(statistics))


def reduced_from_physical(spec: GasSpec) -> ReducedState:
    """Map a physical gas to its reduced state.

    ``eta = N / Z0 = N lambda^3 / V`` and ``eta_sp = eta / g_A``.
    """
    # GasSpec validates on construction; re-check in case of object.__setattr__ games.
    if not validate_spin_statistics(spec.spin_two_sA, spec.statistics):
        raise SpinStatisticsMismatch(f"2*s_A = {spec.spin_two_sA} incompatible with {spec.statistics.value}")
    Z0 = single_particle_partition(spec.volume_V, spec.mass_m, spec.temperature_T)
    eta = spec.count_N / Z0
    return ReducedState(
        eta=eta,
        eta_sp=eta / spec.g_A,
        g_A=spec.g_A,
        statistics=spec.statistics,
        lambda_thermal=thermal_wavelength(spec.mass_m, spec.temperature_T),
        Z0=Z0,
    )
