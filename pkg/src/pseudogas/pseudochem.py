"""Pseudo-molecule chemistry: free-energy minimisation for multioccupancy.

A pseudo-polymer ``A_j`` is ``j`` non-interacting particles sharing one
momentum, treated as a point particle of mass ``j m`` with zero binding
energy.  Minimising the Helmholtz free energy of the two-species mixture
``{A, A_j}`` at fixed ``T, V`` gives the equilibrium fraction
``x_j = N_j / N`` as the root of

    x = j^{3/2} eta^{j-1} (1 - j x)^j .

Pairs with a relative momentum ``2 dp`` carry the internal partition function
``g_A^2 exp(-beta dp^2 / m)``; at ``dp = 0`` exchange parity restricts the
spin degeneracy to ``g_-`` (fermions) or ``g_+`` (bosons).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BOLTZMANN_KB, HBAR, ReducedState, Statistics, pair_spin_degeneracies
from .errors import DomainError, NoConvergence, NonPositiveInput, OutOfSemiclassicalRange

ETA_MAX = 0.2
RESIDUAL_TOL = 1e-12
CONTINUUM_THRESHOLD = 1e-3
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class MixtureState:
    """Equilibrium composition of a monomer / ``j``-mer mixture."""

    polymer_order_j: int
    fraction_xj: float
    eta: float

    @property
    def residual(self) -> float:
        """Fixed-point residual ``x - j^{3/2} eta^{j-1} (1 - j x)^j``."""
        j, x = self.polymer_order_j, self.fraction_xj
        return x - _polymer_prefactor(self.eta, j) * (1.0 - j * x) ** j

    @property
    def monomer_fraction(self) -> float:
        return 1.0 - self.polymer_order_j * self.fraction_xj


@dataclass(frozen=True)
class PairSpinContext:
    """Spin bookkeeping for a pair of identical particles.

    The spin-statistics parity rule is deliberately not enforced here, so the
    pair algebra can be compared across statistics at equal ``g_A``.
    """

    g_A: int
    statistics: Statistics
    g_plus: int = -1
    g_minus: int = -1

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        if self.g_A < 1:
            raise NonPositiveInput(f"g_A must be >= 1, got {self.g_A}")
        g_plus, g_minus = pair_spin_degeneracies(self.g_A)
        if self.g_plus < 0:
            object.__setattr__(self, "g_plus", g_plus)
        if self.g_minus < 0:
            object.__setattr__(self, "g_minus", g_minus)
        if self.g_plus + self.g_minus != self.g_A**2:
            raise DomainError(f"g_plus + g_minus = {self.g_plus + self.g_minus} != g_A^2 = {self.g_A ** 2}")

    @property
    def coincident_degeneracy(self) -> int:
        """Spin states allowed when both particles share one momentum."""
        if self.statistics is Statistics.FERMI:
            return self.g_minus
        if self.statistics is Statistics.BOSE:
            return self.g_plus
        return self.g_A**2


@dataclass(frozen=True)
class MomentumSplit:
    """Half-difference ``dp`` of a pair's momenta, with ``beta`` and ``m``."""

    delta_p: float
    beta: float
    mass_m: float

    def __post_init__(self):
        if not self.delta_p >= 0:
            raise DomainError(f"delta_p must be >= 0, got {self.delta_p}")
        if not self.beta > 0 or not self.mass_m > 0:
            raise NonPositiveInput("beta and mass_m must be positive")

    @classmethod
    def from_reduced_energy(cls, value: float) -> "MomentumSplit":
        """Split with ``beta dp^2 / m`` equal to ``value`` (unit beta and mass)."""
        if value < 0:
            raise DomainError(f"reduced internal energy must be >= 0, got {value}")
        return cls(math.sqrt(value), 1.0, 1.0)

    @property
    def reduced_energy(self) -> float:
        return self.beta * self.delta_p**2 / self.mass_m

    @property
    def coincident(self) -> bool:
        return self.delta_p == 0.0


def free_energy_ideal(temperature_T: float, count: float, partition_Z: float) -> float:
    """Stirling-approximated ideal-gas free energy ``-kB T N ln(Z e / N)`` in joules."""
    if not (temperature_T > 0 and count > 0 and partition_Z > 0):
        raise NonPositiveInput(
            f"temperature, count and partition function must be positive: {temperature_T}, {count}, {partition_Z}"
        )
    return -BOLTZMANN_KB * temperature_T * count * (math.log(partition_Z / count) + 1.0)


def pair_partition_spin(ctx: PairSpinContext, split: MomentumSplit, Z0_2m: float) -> float:
    """Partition function of a pair: centre of mass times internal states.

    ``g_A^2 Z0(2m) exp(-beta dp^2/m)`` for ``dp != 0``; for coincident momenta
    only the parity-allowed spin states survive.
    """
    if split.coincident:
        return ctx.coincident_degeneracy * Z0_2m
    return ctx.g_A**2 * Z0_2m * math.exp(-split.reduced_energy)


def total_free_energy_dimer(
    x2: float,
    reduced: ReducedState,
    temperature_T: float,
    count_N: float,
    split: MomentumSplit | None = None,
) -> float:
    """Free energy of ``N x2`` pseudo-dimers plus ``N (1 - 2 x2)`` monomers.

    Monomers carry ``g_A Z0(m)``; pairs carry ``g_A^2 Z0(2m)``, or
    :func:`pair_partition_spin` when a momentum split is given.
    ``Z0(2m) = 2^{3/2} Z0(m)``.  ``reduced.Z0`` must be populated.
    """
    if not 0.0 <= x2 < 0.5:
        raise DomainError(f"dimer fraction must lie in [0, 1/2), got {x2}")
    if not reduced.Z0 > 0:
        raise DomainError("reduced state carries no single-particle partition function")
    Z_single = reduced.g_A * reduced.Z0
    Z0_2m = 2.0**1.5 * reduced.Z0
    if split is None:
        Z_pair = reduced.g_A**2 * Z0_2m
    else:
        Z_pair = pair_partition_spin(PairSpinContext(reduced.g_A, reduced.statistics), split, Z0_2m)
    n_pairs = count_N * x2
    F = free_energy_ideal(temperature_T, count_N * (1.0 - 2.0 * x2), Z_single)
    if n_pairs > 0:
        F += free_energy_ideal(temperature_T, n_pairs, Z_pair)
    return F


def _polymer_prefactor(eta, j):
    return j**1.5 * eta ** (j - 1)


def _check_eta(eta):
    if not eta >= 0 or not math.isfinite(eta):
        raise DomainError(f"eta must be non-negative, got {eta!r}")
    if eta >= ETA_MAX:
        raise OutOfSemiclassicalRange(f"eta = {eta} is outside the semi-classical guard eta < {ETA_MAX}")


def _solve_fixed_point(c, j):
    # root of x - c (1 - j x)^j on [0, 1/j); f is increasing
    lo, hi = 0.0, 1.0 / j - 1e-15
    x = min(c, 0.5 * hi)
    for _ in range(200):
        g = (1.0 - j * x) ** (j - 1)
        fx = x - c * g * (1.0 - j * x)
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        x_new = x - fx / (1.0 + c * j * j * g)
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 2 * _EPS * x or hi - lo <= 2 * _EPS * hi:
            return x_new
        x = x_new
    raise NoConvergence(f"polymer fixed point did not converge (c = {c}, j = {j})")


def solve_polymer_fraction(eta: float, j: int) -> MixtureState:
    """Equilibrium ``j``-mer fraction ``x_j = N_j / N`` at reduced density ``eta``."""
    if int(j) != j or j < 2:
        raise DomainError(f"polymer order must be an integer >= 2, got {j!r}")
    j = int(j)
    _check_eta(eta)
    c = _polymer_prefactor(eta, j) if eta > 0 else 0.0
    if c == 0.0:
        return MixtureState(j, 0.0, eta)
    state = MixtureState(j, _solve_fixed_point(c, j), eta)
    if abs(state.residual) > RESIDUAL_TOL:
        raise NoConvergence(f"residual {state.residual:.3e} for eta = {eta}, j = {j}")
    return state


def solve_dimer_fraction(eta: float) -> MixtureState:
    """Equilibrium pseudo-dimer fraction, closed form checked by iteration.

    ``x = a (1 - 2x)^2`` with ``a = 2^{3/2} eta`` is a quadratic whose root in
    ``[0, 1/2)`` is ``2a / (1 + 4a + sqrt(1 + 8a))`` (the rationalised form of
    the textbook root, free of cancellation as ``a -> 0``).
    """
    _check_eta(eta)
    if eta == 0.0:
        return MixtureState(2, 0.0, 0.0)
    a = 2.0**1.5 * eta
    x = 2.0 * a / (1.0 + 4.0 * a + math.sqrt(1.0 + 8.0 * a))
    x_iter = _solve_fixed_point(a, 2)
    if abs(x - x_iter) > 1e-10 * max(x, 1e-300) and abs(x - x_iter) > 1e-10:
        raise NoConvergence(f"closed form {x} and iteration {x_iter} disagree")
    state = MixtureState(2, x, eta)
    if abs(state.residual) > RESIDUAL_TOL:
        raise NoConvergence(f"dimer residual {state.residual:.3e} at eta = {eta}")
    return state


def eta_from_dimer_fraction(x2: float) -> float:
    """Exact inverse of the dimer law: ``eta = x2 / (2^{3/2} (1 - 2 x2)^2)``."""
    if not 0.0 <= x2 < 0.5:
        raise DomainError(f"dimer fraction must lie in [0, 1/2), got {x2}")
    return x2 / (2.0**1.5 * (1.0 - 2.0 * x2) ** 2)


def pair_fraction_at_dp(x2_at_zero_gap: float, split: MomentumSplit, ctx: PairSpinContext) -> float:
    """Concentration of pairs with momentum half-difference ``dp``.

    Spin independent, ``x2 exp(-beta dp^2/m)``, as long as ``dp != 0``.
    Exactly coincident momenta are suppressed by ``g_-/g_A^2`` (fermions) or
    ``g_+/g_A^2`` (bosons).
    """
    if not 0.0 <= x2_at_zero_gap < 0.5:
        raise DomainError(f"dimer fraction must lie in [0, 1/2), got {x2_at_zero_gap}")
    if split.coincident:
        return ctx.coincident_degeneracy / ctx.g_A**2 * x2_at_zero_gap
    return x2_at_zero_gap * math.exp(-split.reduced_energy)


def continuum_criterion(J: int, box_L: float, mass_m: float, temperature_T: float) -> float:
    """``(J hbar)^2 / (m L^2 kB T)``: reduced internal energy of a pair ``J`` levels apart.

    Implemented with ``hbar`` and without the factor 1/4 that
    ``2|dp| = J hbar / L`` would produce; it is an order-of-magnitude test.
    """
    if not (J >= 1 and box_L > 0 and mass_m > 0 and temperature_T > 0):
        raise NonPositiveInput(f"J, L, m and T must be positive: {J}, {box_L}, {mass_m}, {temperature_T}")
    return (J * HBAR) ** 2 / (mass_m * box_L**2 * BOLTZMANN_KB * temperature_T)


def within_continuum(J, box_L, mass_m, temperature_T, threshold=CONTINUUM_THRESHOLD) -> bool:
    """Whether two momenta ``J`` levels apart count as equal in the continuum limit."""
    return continuum_criterion(J, box_L, mass_m, temperature_T) < threshold
