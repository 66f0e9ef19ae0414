"""
Spin, exact coincidence, and the continuum limit
================================================

Pairs with different momenta are spin independent.  Only exactly coincident
momenta feel exchange parity, which keeps g_- (fermions) or g_+ (bosons) of
the g_A^2 spin states.  In a large box, neighbouring momenta are
indistinguishable at thermal resolution, so the suppression does not matter.
"""
import math

from pseudogas import (
    MomentumSplit,
    PairSpinContext,
    continuum_criterion,
    pair_fraction_at_dp,
    pair_spin_degeneracies,
    solve_dimer_fraction,
)

x2 = solve_dimer_fraction(0.01).fraction_xj
print(f"{'g_A':>4} {'g+':>4} {'g-':>4} {'fermi dp=0':>12} {'bose dp=0':>11} {'any dp>0':>10}")
tiny = MomentumSplit.from_reduced_energy(1e-9)
for g in range(1, 6):
    gp, gm = pair_spin_degeneracies(g)
    zero = MomentumSplit(0.0, 1.0, 1.0)
    f = pair_fraction_at_dp(x2, zero, PairSpinContext(g, "fermi")) / x2
    b = pair_fraction_at_dp(x2, zero, PairSpinContext(g, "bose")) / x2
    off = pair_fraction_at_dp(x2, tiny, PairSpinContext(g, "fermi")) / x2
    print(f"{g:4d} {gp:4d} {gm:4d} {f:12.4f} {b:11.4f} {off:10.6f}")

# %%
# beta dp^2 / m for momenta one level apart, helium at 300 K.
m, T = 6.6465e-27, 300.0
for L in (1e-9, 1e-8, 1e-6, 1e-3, 1.0):
    print(f"L = {L:7.0e} m: criterion {continuum_criterion(1, L, m, T):.3e}")
print("J proportional to L keeps it fixed:", continuum_criterion(10, 1e-8, m, T), continuum_criterion(1000, 1e-6, m, T))
