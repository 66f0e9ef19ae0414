"""
First quantum correction to the pressure
========================================

Solve the number equation for the fugacity, evaluate the exact equation of
state as a ratio of polylogarithms, and compare with the first-order law
P V / N kB T = 1 +- eta_sp / 2^{5/2}.  The remainder shrinks like eta_sp^2.
"""
import numpy as np

from pseudogas import Statistics, pressure_first_order, pressure_ratio_exact, solve_fugacity

etas = np.array([1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1])

for stats in (Statistics.BOSE, Statistics.FERMI):
    print(f"\n{stats.value}")
    print(f"{'eta_sp':>8} {'z':>12} {'exact':>14} {'1st order':>14} {'remainder':>11}")
    rem = []
    for e in etas:
        z = solve_fugacity(e, stats).z
        exact = pressure_ratio_exact(z, stats)
        first = pressure_first_order(e, 1, stats)
        rem.append(abs(exact - first))
        print(f"{e:8.0e} {z:12.6e} {exact:14.10f} {first:14.10f} {exact - first:11.3e}")
    slope = np.polyfit(np.log(etas[:5]), np.log(rem[:5]), 1)[0]
    print(f"log-log slope of the remainder: {slope:.3f}")
