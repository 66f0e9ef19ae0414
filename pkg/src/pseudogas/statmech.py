"""Ideal quantum-gas statistics in the semi-classical regime.

The number equation of an ideal Bose or Fermi gas, written with the
fugacity ``z = exp(beta mu)``, reads

    eta_sp = Li_{3/2}(z)          (bosons)
    eta_sp = -Li_{3/2}(-z)        (fermions)

and the equation of state is ``P V / (N kB T) = Li_{5/2} / Li_{3/2}`` on the
same branch.  Two independent routes evaluate the branch functions: a
truncated power series (:func:`polylog`) and adaptive quadrature of the
occupation integral (:func:`occupancy_ratio_quadrature`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core import BOLTZMANN_KB, Statistics
from .errors import DomainError, NoConvergence, OutOfSemiclassicalRange, QuadratureFailure

MAX_TERMS = 10_000_000
BOSE_Z_CAP = 0.99
SERIES_RTOL = 1e-12
QUAD_RTOL = 1e-10
ROOT_TOL = 1e-14
_EPS = np.finfo(float).eps


def _check_tolerance(tolerance):
    if not tolerance >= 1e-15:
        raise DomainError(f"tolerance must be >= 1e-15, got {tolerance!r}")


def _series_unit_interval(s, z, tolerance):
    # sum z^k / k^s for 0 < z < 1, stopped by the geometric tail bound
    chunks = []
    approx = 0.0
    k0, block = 1, 64
    while k0 <= MAX_TERMS:
        k = np.arange(k0, k0 + block, dtype=float)
        terms = np.power(z, k) / np.power(k, s)
        chunks.append(terms)
        approx += float(terms.sum())
        K = k0 + block - 1
        tail = z ** (K + 1) / ((K + 1) ** s * (1.0 - z))
        if tail <= tolerance * approx:
            return math.fsum(np.concatenate(chunks))
        k0 += block
        block = min(2 * block, 1 << 16)
    raise NoConvergence(f"polylog series for s={s}, z={z} exceeded {MAX_TERMS} terms")


def _zeta(s, tolerance):
    # direct sum up to K-1 plus an Euler-Maclaurin tail at K
    K = 16
    while K <= MAX_TERMS:
        head = math.fsum(np.power(np.arange(1, K, dtype=float), -s))
        rising = [s]
        for i in range(1, 7):
            rising.append(rising[-1] * (s + i))
        tail = (
            K ** (1.0 - s) / (s - 1.0)
            + 0.5 * K**-s
            + rising[0] * K ** (-s - 1) / 12.0
            - rising[2] * K ** (-s - 3) / 720.0
            + rising[4] * K ** (-s - 5) / 30240.0
        )
        total = head + tail
        remainder = rising[6] * K ** (-s - 7) / 1209600.0
        if remainder <= tolerance * total:
            return total
        K *= 2
    raise NoConvergence(f"zeta({s}) did not converge")


def polylog(order_s: float, z: float, tolerance: float = SERIES_RTOL) -> float:
    """Polylogarithm ``Li_s(z) = sum_k z^k / k^s`` for real ``z`` in [-1, 1].

    On ``0 < z < 1`` the series is truncated once the geometric tail bound
    ``z^(K+1) / ((K+1)^s (1-z))`` falls below ``tolerance`` times the partial
    sum.  ``z = 1`` (``s > 1``) sums directly with an Euler-Maclaurin tail.
    Negative arguments use ``Li_s(-x) = 2^(1-s) Li_s(x^2) - Li_s(x)``.
    """
    _check_tolerance(tolerance)
    if not order_s > 0:
        raise DomainError(f"order must be positive, got {order_s}")
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"polylog argument must lie in [-1, 1], got {z}")
    if z == 0.0:
        return 0.0
    if z < 0.0:
        x = -z
        if x == 1.0 and order_s <= 1.0:
            raise DomainError(f"Li_{order_s}(-1) is outside the supported domain")
        return 2.0 ** (1.0 - order_s) * polylog(order_s, x * x, tolerance) - polylog(order_s, x, tolerance)
    if z == 1.0:
        if order_s <= 1.0:
            raise DomainError(f"Li_{order_s}(1) diverges")
        return _zeta(order_s, tolerance)
    return _series_unit_interval(order_s, z, tolerance)


def occupation_integral(order_s: float, z: float, statistics: Statistics, rtol: float = QUAD_RTOL) -> float:
    """``(1/Gamma(s)) int_0^inf u^(s-1) / (exp(u)/z +- 1) du`` by adaptive quadrature.

    The substitution ``u = t^2`` removes the endpoint singularity of the
    ``sqrt(u)`` density of states.  ``+`` is Fermi, ``-`` Bose.
    """
    statistics = Statistics.parse(statistics)
    if z < 0:
        raise DomainError(f"fugacity must be non-negative, got {z}")
    if statistics is Statistics.BOSE and z >= 1.0:
        raise DomainError(f"Bose fugacity must be below 1, got {z}")
    if z == 0.0:
        return 0.0
    sign = statistics.sign
    power = 2.0 * order_s - 1.0
    norm = 2.0 / special.gamma(order_s)

    def integrand(t):
        w = z * math.exp(-t * t)
        return norm * t**power * w / (1.0 + sign * w)

    upper = math.sqrt(max(math.log(z), 0.0) + 80.0)
    out = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=rtol, limit=500, full_output=1)
    if len(out) > 3:
        raise QuadratureFailure(f"quadrature for s={order_s}, z={z}: {out[3]}")
    return out[0]


def occupancy_ratio_quadrature(z: float, statistics: Statistics) -> float:
    """Number-equation integral ``(2/sqrt(pi)) int sqrt(u) / (exp(u)/z +- 1) du``.

    Normalised so that it tends to ``z`` as ``z -> 0``; equals ``Li_{3/2}(z)``
    for bosons and ``-Li_{3/2}(-z)`` for fermions.
    """
    statistics = Statistics.parse(statistics)
    if statistics is Statistics.BOSE and z > BOSE_Z_CAP:
        raise DomainError(f"Bose fugacity {z} exceeds the semi-classical cap {BOSE_Z_CAP}")
    return occupation_integral(1.5, z, statistics)


def branch(order_s: float, z: float, statistics: Statistics, tolerance: float = SERIES_RTOL) -> float:
    """Statistics-appropriate polylog branch: ``Li_s(z)``, ``-Li_s(-z)`` or ``z``."""
    statistics = Statistics.parse(statistics)
    if z < 0:
        raise DomainError(f"fugacity must be non-negative, got {z}")
    if statistics is Statistics.BOLTZMANN:
        return z
    if statistics is Statistics.BOSE:
        return polylog(order_s, z, tolerance)
    if z < 1.0:
        return -polylog(order_s, -z, tolerance)
    # fermions beyond z = 1 leave the series' radius of convergence
    return occupation_integral(order_s, z, statistics, rtol=max(tolerance, 1e-13))


def density_branch(z: float, statistics: Statistics, tolerance: float = SERIES_RTOL) -> float:
    return branch(1.5, z, statistics, tolerance)


@dataclass(frozen=True)
class Fugacity:
    z: float
    statistics: Statistics = Statistics.BOLTZMANN
    residual: float = 0.0

    def __post_init__(self):
        if not self.z >= 0:
            raise DomainError(f"fugacity must be non-negative, got {self.z}")
        if self.statistics is Statistics.BOSE and self.z > BOSE_Z_CAP:
            raise OutOfSemiclassicalRange(f"Bose fugacity {self.z} above cap {BOSE_Z_CAP}")

    def __float__(self):
        return float(self.z)

    def chemical_potential(self, temperature_T: float) -> float:
        """``mu = kB T ln z`` in joules (``-inf`` for an empty gas)."""
        return BOLTZMANN_KB * temperature_T * math.log(self.z) if self.z > 0 else -math.inf


def _density_derivative(z, statistics):
    # d/dz branch_{3/2}(z) = branch_{1/2}(z) / z
    if z == 0.0:
        return 1.0
    if statistics is Statistics.FERMI and z >= 1.0:
        return occupation_integral(0.5, z, statistics, rtol=1e-8) / z
    return branch(0.5, z, statistics, 1e-8) / z


def solve_fugacity(eta_sp: float, statistics: Statistics, tolerance: float = ROOT_TOL) -> Fugacity:
    """Invert the number equation for the fugacity.

    Bisection-safeguarded Newton on ``[0, 0.99]`` for bosons, and on a
    bracket grown by doubling from ``[0, 1]`` for fermions.  Iterates to
    machine precision and then requires ``|residual| <= tolerance``.
    """
    statistics = Statistics.parse(statistics)
    if not tolerance >= 1e-14:
        raise DomainError(f"tolerance must be >= 1e-14, got {tolerance!r}")
    if not eta_sp >= 0 or not math.isfinite(eta_sp):
        raise DomainError(f"eta_sp must be non-negative, got {eta_sp!r}")
    if eta_sp == 0.0:
        return Fugacity(0.0, statistics)
    if statistics is Statistics.BOLTZMANN:
        return Fugacity(eta_sp, statistics)

    def f(x):
        return density_branch(x, statistics, 1e-15) - eta_sp

    lo, hi = 0.0, BOSE_Z_CAP if statistics is Statistics.BOSE else 1.0
    f_hi = f(hi)
    if statistics is Statistics.BOSE:
        if f_hi < 0:
            raise OutOfSemiclassicalRange(
                f"eta_sp = {eta_sp} needs a Bose fugacity above {BOSE_Z_CAP} (Li_3/2(0.99) = {f_hi + eta_sp:.6f})"
            )
    else:
        while f_hi < 0:
            lo, hi = hi, 2.0 * hi
            if hi > 2.0**40:
                raise NoConvergence(f"could not bracket the Fermi fugacity for eta_sp = {eta_sp}")
            f_hi = f(hi)
    if statistics is Statistics.FERMI and hi > 1.0:
        # quadrature-backed branch is only reliable to ~1e-13 relative
        tolerance = max(tolerance, 1e-12 * eta_sp)

    x = min(max(eta_sp + statistics.sign * eta_sp**2 / 2.0**1.5, lo), hi)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    fx = f(x)
    for _ in range(300):
        if fx == 0.0:
            break
        if fx < 0:
            lo = x
        else:
            hi = x
        step = fx / _density_derivative(x, statistics)
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 2 * _EPS * x or hi - lo <= 4 * _EPS * hi:
            x = x_new
            fx = f(x)
            break
        x = x_new
        fx = f(x)
    else:
        raise NoConvergence(f"fugacity solve did not converge for eta_sp = {eta_sp}")
    if abs(fx) > tolerance:
        raise NoConvergence(f"fugacity residual {fx:.3e} above tolerance {tolerance:.1e}")
    return Fugacity(x, statistics, fx)


def pressure_ratio_exact(z: float, statistics: Statistics) -> float:
    """Exact ``P V / (N kB T)`` at fugacity ``z`` (ratio of 5/2 and 3/2 branches)."""
    statistics = Statistics.parse(statistics)
    if z < 0:
        raise DomainError(f"fugacity must be non-negative, got {z}")
    if statistics is Statistics.BOSE and z > BOSE_Z_CAP:
        raise DomainError(f"Bose fugacity {z} exceeds the semi-classical cap {BOSE_Z_CAP}")
    if z == 0.0 or statistics is Statistics.BOLTZMANN:
        return 1.0
    return branch(2.5, z, statistics, 1e-15) / branch(1.5, z, statistics, 1e-15)


def pressure_first_order(eta: float, g_A: int, statistics: Statistics) -> float:
    """First-order virial estimate ``1 +- eta / (2^{5/2} g_A)``; + Fermi, - Bose."""
    statistics = Statistics.parse(statistics)
    if eta < 0:
        raise DomainError(f"eta must be non-negative, got {eta}")
    if g_A < 1:
        raise DomainError(f"g_A must be >= 1, got {g_A}")
    if statistics is Statistics.BOLTZMANN:
        return 1.0
    return 1.0 + statistics.sign * eta / (2.0**2.5 * g_A)


@dataclass(frozen=True)
class ThermoPoint:
    eta_sp: float
    z: Fugacity
    pressure_ratio_exact: float
    pressure_ratio_first_order: float


def thermo_point(eta_sp: float, statistics: Statistics) -> ThermoPoint:
    fug = solve_fugacity(eta_sp, statistics)
    return ThermoPoint(
        eta_sp=eta_sp,
        z=fug,
        pressure_ratio_exact=pressure_ratio_exact(fug.z, fug.statistics),
        pressure_ratio_first_order=pressure_first_order(eta_sp, 1, fug.statistics),
    )
