"""
How quantum is a room-temperature gas?
======================================

The size of every quantum correction in a dilute ideal gas is set by one
number, eta = N lambda^3 / V, the number of particles per cubed thermal
wavelength.  We compute it for helium-4 at atmospheric density and watch it
grow as the gas is cooled.
"""
import numpy as np

from pseudogas import GasSpec, reduced_from_physical, solve_dimer_fraction

HELIUM_MASS = 6.6465e-27  # kg
LOSCHMIDT = 2.6868e25     # m^-3

# %%
# At 300 K helium is very classical: eta is a few parts per million.
he = GasSpec(LOSCHMIDT, 1.0, 300.0, HELIUM_MASS, spin_two_sA=0, statistics="bose")
state = reduced_from_physical(he)
print(f"lambda = {state.lambda_thermal:.3e} m, eta = {state.eta:.4e}")

# %%
# eta scales as T^{-3/2}.  Cooling at fixed density we reach eta ~ 0.1 only at
# a few kelvin, where the pseudo-dimer fraction becomes a few percent.
print(f"{'T [K]':>8} {'eta':>12} {'x2 = N2/N':>12}")
for T in np.geomspace(300.0, 3.0, 7):
    red = reduced_from_physical(GasSpec(LOSCHMIDT, 1.0, T, HELIUM_MASS, 0, "bose"))
    x2 = solve_dimer_fraction(red.eta).fraction_xj if red.eta < 0.2 else float("nan")
    print(f"{T:8.2f} {red.eta:12.4e} {x2:12.4e}")
