import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudogas.core import BOLTZMANN_KB, ReducedState, Statistics, pair_spin_degeneracies, reduced_from_physical
from pseudogas.errors import DomainError, NonPositiveInput, OutOfSemiclassicalRange
from pseudogas.pseudochem import (
    MixtureState,
    MomentumSplit,
    PairSpinContext,
    continuum_criterion,
    eta_from_dimer_fraction,
    free_energy_ideal,
    pair_fraction_at_dp,
    pair_partition_spin,
    solve_dimer_fraction,
    solve_polymer_fraction,
    total_free_energy_dimer,
    within_continuum,
)

BOSE, FERMI = Statistics.BOSE, Statistics.FERMI

# mpmath findroot at 40 digits
X2_ETA_001 = 0.02547547609787481207066446
X3_ETA_001 = 5.172002868254943807201670e-4
CONTINUUM_HE = 4.039752660736546893961844e-22  # J=1, L=1 m, m=6.6465e-27 kg, T=300 K
F_IDEAL_EXAMPLE = -6.136505950902845123268761  # J


def bisect_fixed_point(c, j, iters=200):
    lo, hi = 0.0, 1.0 / j
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid - c * (1 - j * mid) ** j < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_free_energy_ideal_examples():
    T = 300.0
    assert free_energy_ideal(T, 5.0, 5.0) == pytest.approx(-BOLTZMANN_KB * T * 5.0, rel=1e-15)
    assert free_energy_ideal(T, 5.0 * math.e, 5.0) == pytest.approx(0.0, abs=1e-35)
    assert free_energy_ideal(T, 1e20, 1e26) == pytest.approx(F_IDEAL_EXAMPLE, rel=1e-13)
    with pytest.raises(NonPositiveInput):
        free_energy_ideal(T, 0.0, 1.0)


def test_dimer_free_energy_without_dimers(helium_gas):
    spec = helium_gas()
    red = reduced_from_physical(spec)
    F = total_free_energy_dimer(0.0, red, spec.temperature_T, spec.count_N)
    assert F == free_energy_ideal(spec.temperature_T, spec.count_N, red.Z0)


def test_dimer_free_energy_grid_minimum(helium_gas):
    spec = helium_gas(eta=0.01)
    red = reduced_from_physical(spec)
    grid = np.linspace(0.0, 0.5, 10_000, endpoint=False)
    F = np.array([total_free_energy_dimer(x, red, spec.temperature_T, spec.count_N) for x in grid])
    i = int(np.argmin(F))
    assert 0 < i < grid.size - 1
    x_star = solve_dimer_fraction(red.eta).fraction_xj
    assert abs(grid[i] - x_star) <= grid[1] - grid[0]


@pytest.mark.parametrize("g_A, stats", [(1, BOSE), (2, FERMI), (3, BOSE)])
def test_dimer_free_energy_stationary(helium_gas, g_A, stats):
    spec = helium_gas(eta=0.01, g_A=g_A, statistics=stats)
    red = reduced_from_physical(spec)
    x = solve_dimer_fraction(red.eta).fraction_xj
    d = 1e-6

    def F(v):
        return total_free_energy_dimer(v, red, spec.temperature_T, spec.count_N)

    assert F(x - d) > F(x) < F(x + d)
    assert abs(F(x + d) - F(x - d)) / (2 * d) <= 1e-6 * abs(F(x))


def test_dimer_free_energy_domain(helium_gas):
    spec = helium_gas()
    red = reduced_from_physical(spec)
    with pytest.raises(DomainError):
        total_free_energy_dimer(0.5, red, spec.temperature_T, spec.count_N)
    with pytest.raises(DomainError):
        total_free_energy_dimer(0.1, ReducedState.from_eta(0.01), 300.0, 1.0)


def test_dimer_examples():
    assert solve_dimer_fraction(0.0).fraction_xj == 0.0
    state = solve_dimer_fraction(0.01)
    assert state.fraction_xj == pytest.approx(X2_ETA_001, rel=1e-14)
    assert state.fraction_xj == pytest.approx(bisect_fixed_point(2**1.5 * 0.01, 2), rel=1e-13)
    leading = 2**1.5 * 0.01
    assert leading == pytest.approx(0.0282843, abs=5e-8)
    assert state.fraction_xj / leading == pytest.approx((1 - 2 * state.fraction_xj) ** 2, rel=1e-14)
    assert state.fraction_xj / leading == pytest.approx(0.9007, abs=5e-5)


def test_dimer_guard():
    with pytest.raises(OutOfSemiclassicalRange):
        solve_dimer_fraction(0.2)
    with pytest.raises(DomainError):
        solve_dimer_fraction(-1e-3)


def test_polymer_examples():
    for j in (2, 3, 5):
        assert solve_polymer_fraction(0.0, j).fraction_xj == 0.0
    x3 = solve_polymer_fraction(0.01, 3).fraction_xj
    assert x3 == pytest.approx(X3_ETA_001, rel=1e-13)
    assert x3 == pytest.approx(bisect_fixed_point(3**1.5 * 1e-4, 3), rel=1e-13)
    assert solve_polymer_fraction(0.01, 2).fraction_xj == pytest.approx(
        solve_dimer_fraction(0.01).fraction_xj, rel=1e-12, abs=0
    )


def test_polymer_order_validated():
    with pytest.raises(DomainError):
        solve_polymer_fraction(0.01, 1)
    with pytest.raises(DomainError):
        solve_polymer_fraction(0.01, 2.5)


def test_polymer_underflow_returns_zero():
    assert solve_polymer_fraction(1e-200, 5).fraction_xj == 0.0


@settings(max_examples=80)
@given(st.floats(1e-8, 0.199), st.integers(2, 8))
def test_polymer_fixed_point_residual(eta, j):
    state = solve_polymer_fraction(eta, j)
    assert 0 <= state.fraction_xj <= 1 / j
    assert abs(state.residual) <= 1e-12
    assert state.monomer_fraction >= 0


@pytest.mark.parametrize("j", [2, 3, 4, 5])
@pytest.mark.parametrize("eta", [1e-4, 1e-3])
def test_polymer_leading_order_bound(eta, j):
    x = solve_polymer_fraction(eta, j).fraction_xj
    assert abs(x / (j**1.5 * eta ** (j - 1)) - 1) <= 3 * j**2 * x


@pytest.mark.parametrize("j", [2, 3, 4, 5])
def test_polymer_power_law(j):
    etas = np.geomspace(1e-4, 1e-2, 21)
    xs = [solve_polymer_fraction(e, j).fraction_xj for e in etas]
    slope = np.polyfit(np.log(etas), np.log(xs), 1)[0]
    assert slope == pytest.approx(j - 1, abs=0.02)


def test_eta_from_dimer_examples():
    assert eta_from_dimer_fraction(0.0) == 0.0
    assert eta_from_dimer_fraction(X2_ETA_001) == pytest.approx(0.01, rel=1e-14)
    x = 1e-9
    assert eta_from_dimer_fraction(x) == pytest.approx(x / 2**1.5, rel=1e-8)
    with pytest.raises(DomainError):
        eta_from_dimer_fraction(0.5)


@settings(max_examples=100)
@given(st.floats(1e-8, 0.1))
def test_dimer_inverse_round_trip(eta):
    assert eta_from_dimer_fraction(solve_dimer_fraction(eta).fraction_xj) == pytest.approx(eta, rel=1e-12)


def test_pair_partition_examples():
    Z2 = 7.5
    assert pair_partition_spin(PairSpinContext(1, BOSE), MomentumSplit(0.0, 1.0, 1.0), Z2) == Z2
    assert pair_partition_spin(PairSpinContext(2, FERMI), MomentumSplit.from_reduced_energy(math.log(2)), Z2) == (
        pytest.approx(2 * Z2, rel=1e-15)
    )
    assert pair_partition_spin(PairSpinContext(2, FERMI), MomentumSplit(0.0, 1.0, 1.0), Z2) == Z2


def test_spin_context_validation():
    ctx = PairSpinContext(3, BOSE)
    assert (ctx.g_plus, ctx.g_minus) == pair_spin_degeneracies(3)
    assert PairSpinContext(2, BOSE).coincident_degeneracy == 3
    with pytest.raises(DomainError):
        PairSpinContext(2, FERMI, g_plus=3, g_minus=2)


def test_momentum_split():
    split = MomentumSplit(2.0, 0.5, 4.0)
    assert split.reduced_energy == 0.5
    with pytest.raises(DomainError):
        MomentumSplit(-1.0, 1.0, 1.0)


def test_pair_fraction_examples():
    x2 = 0.02
    half = MomentumSplit.from_reduced_energy(math.log(2))
    zero = MomentumSplit(0.0, 1.0, 1.0)
    assert pair_fraction_at_dp(x2, half, PairSpinContext(2, FERMI)) == pytest.approx(x2 / 2, rel=1e-15)
    gp, gm = pair_spin_degeneracies(2)
    assert pair_fraction_at_dp(x2, zero, PairSpinContext(2, FERMI)) == gm / 4 * x2 == x2 / 4
    assert pair_fraction_at_dp(x2, zero, PairSpinContext(2, Statistics.BOLTZMANN)) == x2
    assert pair_fraction_at_dp(x2, zero, PairSpinContext(1, BOSE)) == x2
    with pytest.raises(DomainError):
        pair_fraction_at_dp(0.6, half, PairSpinContext(1, BOSE))


@given(st.floats(1e-300, 50.0), st.integers(1, 10), st.floats(0.0, 0.49))
def test_pair_fraction_spin_independent_off_coincidence(reduced, g_A, x2):
    split = MomentumSplit.from_reduced_energy(reduced)
    assert split.delta_p > 0
    assert pair_fraction_at_dp(x2, split, PairSpinContext(g_A, BOSE)) == pair_fraction_at_dp(
        x2, split, PairSpinContext(g_A, FERMI)
    )


@pytest.mark.parametrize("g_A", [1, 2, 3, 4])
def test_coincident_suppression(g_A):
    gp, gm = pair_spin_degeneracies(g_A)
    zero = MomentumSplit(0.0, 1.0, 1.0)
    assert pair_fraction_at_dp(0.04, zero, PairSpinContext(g_A, FERMI)) == pytest.approx(gm / g_A**2 * 0.04)
    assert pair_fraction_at_dp(0.04, zero, PairSpinContext(g_A, BOSE)) == pytest.approx(gp / g_A**2 * 0.04)


def test_continuum_criterion_examples():
    m, T = 6.6465e-27, 300.0
    value = continuum_criterion(1, 1.0, m, T)
    assert value == pytest.approx(CONTINUUM_HE, rel=1e-13)
    assert continuum_criterion(1, 10.0, m, T) == pytest.approx(value / 100, rel=1e-14)
    assert continuum_criterion(3, 3.0, m, T) == pytest.approx(continuum_criterion(7, 7.0, m, T), rel=1e-14)
    assert within_continuum(1, 1.0, m, T)
    with pytest.raises(NonPositiveInput):
        continuum_criterion(0, 1.0, m, T)


def test_mixture_state_residual():
    state = MixtureState(2, X2_ETA_001, 0.01)
    assert abs(state.residual) < 1e-16
