"""Finite momentum lattices and exact / sampled multioccupancy statistics.

These are desk-scale oracles: a periodic box with ``(2 n_max + 1)^3``
momentum modes, the canonical partition function computed both by
brute-force enumeration of occupations and by the symmetrisation recursion,
and a seeded sampler of momentum coincidences between classical particles.
Only a single spin channel is modelled.
"""
from __future__ import annotations

import enum
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .core import BOLTZMANN_KB, HBAR, PLANCK_H, Statistics
from .errors import DomainError, EnumerationTooLarge, LatticeTooLarge, NonPositiveInput

N_MAX_LIMIT = 20
ENUMERATION_BUDGET = 5_000_000
MAX_CANONICAL_N = 12
SAMPLER_BLOCK = 4096
_CHUNK_ROWS = 1 << 16


class QuantizationConvention(enum.Enum):
    """Momentum unit of the box: ``p = (h/L) n`` or ``p = (hbar/L) n``."""

    H_OVER_L = "h_over_L"
    HBAR_OVER_L = "hbar_over_L"

    @classmethod
    def parse(cls, value) -> "QuantizationConvention":
        if isinstance(value, cls):
            return value
        key = str(value).strip()
        aliases = {"h": cls.H_OVER_L, "hbar": cls.HBAR_OVER_L}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown quantization convention {value!r}") from None

    @property
    def action(self) -> float:
        return PLANCK_H if self is QuantizationConvention.H_OVER_L else HBAR


@dataclass(frozen=True, eq=False)
class ModeLattice:
    """Discrete single-particle spectrum.

    ``energies`` are sorted ascending (J).  ``level_spacing`` is the energy of
    a unit mode ``p_unit^2 / 2m``; ``squared_index`` holds the integer
    ``|n|^2`` of every mode so that reduced energies are exact multiples.
    """

    box_L: float
    mass_m: float
    beta: float
    n_max: int
    quantization_convention: QuantizationConvention
    energies: np.ndarray
    level_spacing: float = math.nan
    squared_index: np.ndarray | None = field(default=None, repr=False)

    @property
    def mode_count(self) -> int:
        return int(self.energies.size)

    @property
    def reduced_energies(self) -> np.ndarray:
        """``beta * epsilon`` for each mode."""
        if self.squared_index is not None:
            return (self.beta * self.level_spacing) * self.squared_index
        return self.beta * self.energies

    def z1(self, k: int = 1) -> float:
        """Single-particle partition function at ``k beta`` (compensated sum)."""
        return math.fsum(np.exp(-k * self.reduced_energies))

    def occupation_probabilities(self) -> np.ndarray:
        w = np.exp(-self.reduced_energies)
        return w / math.fsum(w)

    def continuum_partition(self) -> float:
        """Closed-form ``V (2 pi m kB T)^{3/2} / h^3`` for the same box."""
        return self.box_L**3 * (2.0 * math.pi * self.mass_m / self.beta) ** 1.5 / PLANCK_H**3

    def eta_effective(self, count_N: int) -> float:
        return count_N / self.z1()


def build_lattice(
    box_L: float,
    mass_m: float,
    temperature_T: float,
    n_max: int,
    convention=QuantizationConvention.H_OVER_L,
) -> ModeLattice:
    """All integer vectors ``n`` in ``[-n_max, n_max]^3`` with ``eps = p^2 / 2m``."""
    convention = QuantizationConvention.parse(convention)
    if not (box_L > 0 and mass_m > 0 and temperature_T > 0):
        raise NonPositiveInput(f"L, m and T must be positive: {box_L}, {mass_m}, {temperature_T}")
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    if n_max > N_MAX_LIMIT:
        raise LatticeTooLarge(f"n_max = {n_max} exceeds the guard {N_MAX_LIMIT}")
    n_max = int(n_max)
    axis = np.arange(-n_max, n_max + 1)
    n2 = (axis[:, None, None] ** 2 + axis[None, :, None] ** 2 + axis[None, None, :] ** 2).ravel()
    n2 = np.sort(n2, kind="stable")
    spacing = (convention.action / box_L) ** 2 / (2.0 * mass_m)
    energies = spacing * n2
    energies.setflags(write=False)
    n2.setflags(write=False)
    return ModeLattice(
        box_L=box_L,
        mass_m=mass_m,
        beta=1.0 / (BOLTZMANN_KB * temperature_T),
        n_max=n_max,
        quantization_convention=convention,
        energies=energies,
        level_spacing=spacing,
        squared_index=n2,
    )


def lattice_from_reduced_spacing(spacing: float, n_max: int) -> ModeLattice:
    """Lattice in reduced units: unit box and mass, ``beta h^2 / (2 m L^2) = spacing``.

    ``spacing = 0`` gives the infinite-temperature limit where every mode is
    equally likely.
    """
    if spacing < 0:
        raise DomainError(f"spacing must be >= 0, got {spacing}")
    if n_max > N_MAX_LIMIT:
        raise LatticeTooLarge(f"n_max = {n_max} exceeds the guard {N_MAX_LIMIT}")
    base = build_lattice(1.0, 1.0, 1.0, n_max)
    beta = spacing / base.level_spacing
    return ModeLattice(
        box_L=1.0,
        mass_m=1.0,
        beta=beta,
        n_max=base.n_max,
        quantization_convention=base.quantization_convention,
        energies=base.energies,
        level_spacing=base.level_spacing,
        squared_index=base.squared_index,
    )


@dataclass(frozen=True)
class CanonicalResult:
    """Canonical ensemble of ``N`` particles on a lattice.

    ``multiplet_fractions[j]`` is the expected fraction of particles sitting
    in modes occupied ``>= j`` times; ``occupancy_distribution[j]`` the
    fraction in modes occupied exactly ``j`` times.  The recursion fills
    neither (empty maps).
    """

    particle_count_N: int
    statistics: Statistics
    Z_N: float
    multiplet_fractions: dict[int, float] = field(default_factory=dict)
    occupancy_distribution: dict[int, float] = field(default_factory=dict)


def canonical_partition_recursion(lattice: ModeLattice, N: int, statistics: Statistics) -> CanonicalResult:
    """``Z_N = (1/N) sum_k (+-1)^(k+1) z1(k beta) Z_{N-k}``, ``Z_0 = 1``.

    ``+`` for bosons, alternating for fermions; the classical reference
    returns ``z1^N / N!``.
    """
    statistics = Statistics.parse(statistics)
    if int(N) != N or not 1 <= N <= MAX_CANONICAL_N:
        raise DomainError(f"N must be an integer in [1, {MAX_CANONICAL_N}], got {N!r}")
    N = int(N)
    if statistics is Statistics.BOLTZMANN:
        return CanonicalResult(N, statistics, lattice.z1() ** N / math.factorial(N))
    zs = [lattice.z1(k) for k in range(1, N + 1)]
    sign = 1 if statistics is Statistics.BOSE else -1
    Z = [1.0]
    for n in range(1, N + 1):
        Z.append(math.fsum(sign ** (k + 1) * zs[k - 1] * Z[n - k] for k in range(1, n + 1)) / n)
    return CanonicalResult(N, statistics, Z[N])


def _configuration_count(M, N, statistics):
    if statistics is Statistics.BOSE:
        return math.comb(M + N - 1, N)
    if statistics is Statistics.FERMI:
        return math.comb(M, N)
    return M**N


def enumerate_exact(
    lattice: ModeLattice, N: int, statistics: Statistics, budget: int = ENUMERATION_BUDGET
) -> CanonicalResult:
    """Brute-force canonical sum over every occupation configuration.

    Bosons: multisets of ``N`` modes; fermions: ``N``-subsets; classical
    reference: ordered ``N``-tuples weighted ``1/N!``.  Per-configuration
    terms are merged with an exactly rounded sum, so the result does not
    depend on the chunking.
    """
    statistics = Statistics.parse(statistics)
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    M = lattice.mode_count
    count = _configuration_count(M, N, statistics)
    if count > budget:
        raise EnumerationTooLarge(f"{count} configurations exceed the budget {budget}")
    if count == 0:
        # more fermions than modes
        return CanonicalResult(N, statistics, 0.0)
    if statistics is Statistics.BOSE:
        configs = itertools.combinations_with_replacement(range(M), N)
    elif statistics is Statistics.FERMI:
        configs = itertools.combinations(range(M), N)
    else:
        configs = itertools.product(range(M), repeat=N)
    flat = itertools.chain.from_iterable(configs)
    reduced = lattice.reduced_energies

    weights_parts = []
    # per occupancy k: weight * (number of particles in exactly-k modes)
    occupancy_parts = {k: [] for k in range(1, N + 1)}
    remaining = count
    while remaining:
        rows = min(remaining, _CHUNK_ROWS)
        idx = np.fromiter(itertools.islice(flat, rows * N), dtype=np.int64, count=rows * N).reshape(rows, N)
        remaining -= rows
        w = np.exp(-reduced[idx].sum(axis=1))
        weights_parts.append(w)
        occ = (idx[:, :, None] == idx[:, None, :]).sum(axis=2)
        for k in range(1, N + 1):
            occupancy_parts[k].append(w * (occ == k).sum(axis=1))
    Z = math.fsum(itertools.chain.from_iterable(weights_parts))
    distribution = {}
    for k in range(1, N + 1):
        distribution[k] = math.fsum(itertools.chain.from_iterable(occupancy_parts[k])) / (N * Z)
    multiplets = {}
    for j in range(1, N + 1):
        multiplets[j] = math.fsum(distribution[k] for k in range(j, N + 1))
    if statistics is Statistics.BOLTZMANN:
        Z /= math.factorial(N)
    return CanonicalResult(N, statistics, Z, multiplets, distribution)


@dataclass(frozen=True)
class SampleStats:
    """Seeded estimate of the fraction of particles in ``>= multiplicity`` modes."""

    trials: int
    pair_fraction_mean: float
    pair_fraction_stderr: float
    seed: int
    multiplicity: int = 2


def _worker_count(workers):
    if workers is None:
        try:
            workers = int(os.environ.get("PSEUDOGAS_THREADS", "1"))
        except ValueError:
            workers = 1
    return max(1, workers)


def _sample_block(cdf, N, seed, block, size, multiplicity):
    # one Philox stream per (seed, block); the block layout is fixed so the
    # outcome does not depend on how blocks are spread over workers
    rng = np.random.Generator(np.random.Philox(key=seed + (block << 64)))
    u = rng.random((size, N))
    draws = np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)
    draws.sort(axis=1)
    new_run = np.ones((size, N), dtype=bool)
    new_run[:, 1:] = draws[:, 1:] != draws[:, :-1]
    run_id = np.cumsum(new_run, axis=1) - 1
    keys = (np.arange(size)[:, None] * N + run_id).ravel()
    run_len = np.bincount(keys, minlength=size * N)
    occupancy = run_len[keys].reshape(size, N)
    return (occupancy >= multiplicity).sum(axis=1) / N


def sample_boltzmann_coincidences(
    lattice: ModeLattice,
    N: int,
    trials: int,
    seed: int,
    multiplicity: int = 2,
    workers: int | None = None,
) -> SampleStats:
    """Draw ``N`` independent classical particles per trial and count coincidences.

    Each particle lands in mode ``k`` with probability ``exp(-beta eps_k) / z1``.
    The per-trial statistic is the fraction of particles sharing their mode
    with at least ``multiplicity - 1`` others.  Trials are split into fixed
    blocks of ``SAMPLER_BLOCK``, each with its own counter-based stream keyed
    by ``(seed, block)``; ``workers`` (default ``$PSEUDOGAS_THREADS``) only
    changes the wall time.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    if int(trials) != trials or trials < 100:
        raise DomainError(f"trials must be an integer >= 100, got {trials!r}")
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    if multiplicity < 2:
        raise DomainError(f"multiplicity must be >= 2, got {multiplicity}")
    N, trials, seed = int(N), int(trials), int(seed)
    cdf = np.cumsum(lattice.occupation_probabilities())
    cdf /= cdf[-1]
    n_blocks = -(-trials // SAMPLER_BLOCK)
    sizes = [min(SAMPLER_BLOCK, trials - b * SAMPLER_BLOCK) for b in range(n_blocks)]

    def run(b):
        return _sample_block(cdf, N, seed, b, sizes[b], multiplicity)

    n_workers = _worker_count(workers)
    if n_workers == 1:
        parts = [run(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    values = np.concatenate(parts)
    mean = math.fsum(values) / trials
    var = math.fsum((values - mean) ** 2) / (trials - 1)
    return SampleStats(trials, mean, math.sqrt(var / trials), seed, multiplicity)


def coincidence_expectation(lattice: ModeLattice, N: int, multiplicity: int = 2) -> float:
    """Exact mean of the sampler statistic.

    A tagged particle in mode ``k`` has ``Binomial(N-1, p_k)`` companions, so
    the expectation is ``sum_k p_k P[Bin(N-1, p_k) >= multiplicity - 1]``.
    """
    p = lattice.occupation_probabilities()
    tail = sps.binom.sf(multiplicity - 2, N - 1, p)
    return math.fsum(p * tail)


def coincidence_expectation_sparse(lattice: ModeLattice, N: int) -> float:
    """Leading-order pair fraction ``(N-1) z1(2 beta) / z1(beta)^2``; exact for ``N = 2``."""
    return (N - 1) * lattice.z1(2) / lattice.z1() ** 2


@dataclass(frozen=True)
class ScalingReport:
    """Rows of ``(eta_effective, fraction_j)``, one per lattice."""

    multiplicity: int
    eta_effective: np.ndarray
    fraction: np.ndarray
    stderr: np.ndarray

    def slope(self) -> float:
        return fit_loglog_slope(self.eta_effective, self.fraction)

    def rows(self):
        return list(zip(self.eta_effective.tolist(), self.fraction.tolist()))


def fit_loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def multiplet_scaling_report(
    lattices,
    N: int,
    statistics: Statistics,
    j: int = 2,
    method: str = "exact",
    trials: int = 100_000,
    seed: int = 0,
    workers: int | None = None,
) -> ScalingReport:
    """Fraction of particles in ``>= j``-occupied modes across a lattice family.

    ``method="exact"`` enumerates the canonical ensemble of ``statistics``;
    ``method="sample"`` runs the classical coincidence sampler (statistics
    must then be Boltzmann).
    """
    statistics = Statistics.parse(statistics)
    if method not in ("exact", "sample"):
        raise DomainError(f"method must be 'exact' or 'sample', got {method!r}")
    if method == "sample" and statistics is not Statistics.BOLTZMANN:
        raise DomainError("the coincidence sampler models classical (Boltzmann) particles only")
    if j < 2 or j > N:
        raise DomainError(f"multiplicity j must lie in [2, N], got {j}")
    etas, fracs, errs = [], [], []
    for lat in lattices:
        etas.append(lat.eta_effective(N))
        if method == "exact":
            fracs.append(enumerate_exact(lat, N, statistics).multiplet_fractions[j])
            errs.append(0.0)
        else:
            s = sample_boltzmann_coincidences(lat, N, trials, seed, multiplicity=j, workers=workers)
            fracs.append(s.pair_fraction_mean)
            errs.append(s.pair_fraction_stderr)
    return ScalingReport(j, np.array(etas), np.array(fracs), np.array(errs))
