import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

mpmath = pytest.importorskip("mpmath")

from pseudogas.core import Statistics
from pseudogas.errors import DomainError, NoConvergence, OutOfSemiclassicalRange
from pseudogas.statmech import (
    Fugacity,
    branch,
    occupancy_ratio_quadrature,
    polylog,
    pressure_first_order,
    pressure_ratio_exact,
    solve_fugacity,
    thermo_point,
)

BOSE, FERMI, CLASSICAL = Statistics.BOSE, Statistics.FERMI, Statistics.BOLTZMANN

# frozen from mpmath (mp.dps = 40)
LI32_HALF = 0.624837020819913853633819
ZETA32 = 2.612375348685488343348568
FERMI32_HALF = 0.4298873215805792677829218  # -Li_{3/2}(-0.5)
Z_BOSE_01 = 0.09652144360689528438123406
Z_FERMI_01 = 0.1035936642528053123673715
P_BOSE_1E3 = 0.9998232200045322503330087
P_FERMI_1E3 = 1.000176773395348102752310


def mp_branch(s, z, stats):
    with mpmath.workdps(30):
        if stats is BOSE:
            return float(mpmath.re(mpmath.polylog(s, z)))
        return float(-mpmath.re(mpmath.polylog(s, -z)))


def test_polylog_examples():
    assert polylog(1.5, 0.0, 1e-12) == 0.0
    assert polylog(1.5, 0.5, 1e-12) == pytest.approx(LI32_HALF, rel=1e-12)
    assert polylog(1.5, 1.0, 1e-10) == pytest.approx(ZETA32, rel=1e-10)
    assert polylog(1.5, 1.0, 1e-15) == pytest.approx(ZETA32, rel=1e-14)
    assert -polylog(1.5, -0.5, 1e-12) == pytest.approx(FERMI32_HALF, rel=1e-12)


@pytest.mark.parametrize("s", [0.5, 1.5, 2.5])
@pytest.mark.parametrize("z", [1e-6, 0.05, 0.3, 0.77, 0.95, 0.99, -0.2, -0.6, -0.99])
def test_polylog_against_mpmath(s, z):
    with mpmath.workdps(30):
        expected = float(mpmath.re(mpmath.polylog(s, z)))
    assert polylog(s, z, 1e-14) == pytest.approx(expected, rel=1e-12)


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog(1.5, 1.01)
    with pytest.raises(DomainError):
        polylog(0.5, 1.0)
    with pytest.raises(DomainError):
        polylog(1.5, 0.5, tolerance=1e-16)


def test_polylog_iteration_cap():
    with pytest.raises(NoConvergence):
        polylog(1.5, 1.0 - 1e-9, 1e-15)


def test_quadrature_boltzmann_limit():
    assert occupancy_ratio_quadrature(1e-8, BOSE) == pytest.approx(1e-8, rel=1e-7)


def test_quadrature_examples():
    assert occupancy_ratio_quadrature(0.5, BOSE) == pytest.approx(LI32_HALF, abs=1e-9)
    assert occupancy_ratio_quadrature(0.5, FERMI) == pytest.approx(FERMI32_HALF, abs=1e-9)


@pytest.mark.parametrize("stats", [BOSE, FERMI])
@pytest.mark.parametrize("z", [0.01, 0.1, 0.3, 0.5, 0.7, 0.9])
def test_quadrature_matches_series(z, stats):
    assert abs(occupancy_ratio_quadrature(z, stats) - branch(1.5, z, stats)) <= 1e-9


def test_quadrature_rejects_condensation_regime():
    with pytest.raises(DomainError):
        occupancy_ratio_quadrature(0.995, BOSE)


def test_fermi_branch_beyond_unit_fugacity():
    for z in (1.0, 2.0, 5.0):
        assert branch(1.5, z, FERMI) == pytest.approx(mp_branch(1.5, z, FERMI), rel=1e-11)


def test_solve_fugacity_examples():
    assert solve_fugacity(0.0, BOSE).z == 0.0
    assert solve_fugacity(0.0, FERMI).z == 0.0
    assert solve_fugacity(0.1, BOSE).z == pytest.approx(Z_BOSE_01, rel=1e-13)
    assert solve_fugacity(0.1, FERMI).z == pytest.approx(Z_FERMI_01, rel=1e-13)
    assert solve_fugacity(0.1, CLASSICAL).z == 0.1


def test_solve_fugacity_out_of_range():
    with pytest.raises(OutOfSemiclassicalRange):
        solve_fugacity(2.3, BOSE)
    with pytest.raises(DomainError):
        solve_fugacity(-1e-3, FERMI)


def test_fermi_bracket_growth():
    fug = solve_fugacity(3.0, FERMI)
    assert fug.z > 1.0
    assert branch(1.5, fug.z, FERMI) == pytest.approx(3.0, rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, 0.5), st.sampled_from([BOSE, FERMI]))
def test_fugacity_round_trip(eta_sp, stats):
    fug = solve_fugacity(eta_sp, stats)
    assert abs(fug.residual) <= 1e-14
    assert branch(1.5, fug.z, stats, 1e-15) == pytest.approx(eta_sp, rel=1e-12)


@pytest.mark.parametrize("stats", [BOSE, FERMI])
@pytest.mark.parametrize("eta_sp", [1e-5, 1e-4, 1e-3, 3e-3, 1e-2])
def test_small_fugacity_expansion(eta_sp, stats):
    z = solve_fugacity(eta_sp, stats).z
    assert abs(z - (eta_sp + stats.sign * eta_sp**2 / 2**1.5)) <= 5 * eta_sp**3


def test_fugacity_type():
    with pytest.raises(OutOfSemiclassicalRange):
        Fugacity(0.995, BOSE)
    assert float(Fugacity(0.3, FERMI)) == 0.3
    assert Fugacity(math.e, FERMI).chemical_potential(1 / 1.380649e-23) == pytest.approx(1.0)


def test_pressure_ratio_examples():
    for stats in (BOSE, FERMI, CLASSICAL):
        assert pressure_ratio_exact(0.0, stats) == 1.0
    zb = solve_fugacity(1e-3, BOSE).z
    zf = solve_fugacity(1e-3, FERMI).z
    assert pressure_ratio_exact(zb, BOSE) == pytest.approx(P_BOSE_1E3, rel=1e-14)
    assert pressure_ratio_exact(zf, FERMI) == pytest.approx(P_FERMI_1E3, rel=1e-14)
    assert pressure_ratio_exact(zb, BOSE) == pytest.approx(1 - 1e-3 / 2**2.5, abs=1e-6)
    assert pressure_ratio_exact(zf, FERMI) == pytest.approx(1 + 1e-3 / 2**2.5, abs=1e-6)


def test_pressure_first_order_examples():
    # mpmath: 1 + 0.01/(2^{5/2} 2) and 1 - 0.01/2^{5/2}
    assert pressure_first_order(0.01, 2, FERMI) == pytest.approx(1.000883883476483184, rel=1e-15)
    assert pressure_first_order(0.0, 1, BOSE) == 1.0
    assert pressure_first_order(0.01, 1, BOSE) == pytest.approx(0.998232233047033631, rel=1e-15)
    assert pressure_first_order(0.5, 3, CLASSICAL) == 1.0


@pytest.mark.parametrize("stats", [BOSE, FERMI])
def test_pressure_remainder_is_second_order(stats):
    etas = np.array([1e-4, 3e-4, 1e-3, 3e-3, 1e-2])
    r = [abs(pressure_ratio_exact(solve_fugacity(e, stats).z, stats) - pressure_first_order(e, 1, stats)) for e in etas]
    slope = np.polyfit(np.log(etas), np.log(r), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.1)


def test_pressure_monotonicity():
    zs = np.linspace(0.01, 0.9, 40)
    bose = [pressure_ratio_exact(z, BOSE) for z in zs]
    fermi = [pressure_ratio_exact(z, FERMI) for z in zs]
    assert all(b < 1 for b in bose) and np.all(np.diff(bose) < 0)
    assert all(f > 1 for f in fermi) and np.all(np.diff(fermi) > 0)


def test_thermo_point():
    tp = thermo_point(1e-3, FERMI)
    assert tp.pressure_ratio_first_order == pytest.approx(1 + 1e-3 / 2**2.5)
    assert tp.pressure_ratio_exact == pytest.approx(P_FERMI_1E3, rel=1e-14)
