"""
Pseudo-molecules from free-energy minimisation
==============================================

Treat a doubly occupied momentum state as a particle of mass 2m with zero
binding energy.  Minimising the Helmholtz free energy of the monomer/dimer
mixture fixes the dimer fraction; j-mers follow the same route and scale
as eta^{j-1}.
"""
import numpy as np

from pseudogas import (
    GasSpec,
    eta_from_dimer_fraction,
    reduced_from_physical,
    solve_dimer_fraction,
    solve_polymer_fraction,
    thermal_wavelength,
    total_free_energy_dimer,
)

# %%
# A spinless gas built to have eta = 0.01.
T, N, m = 300.0, 1e20, 6.6465e-27
spec = GasSpec(N, N * thermal_wavelength(m, T) ** 3 / 0.01, T, m, 0, "bose")
red = reduced_from_physical(spec)

grid = np.linspace(0.0, 0.1, 2001)
F = np.array([total_free_energy_dimer(x, red, T, N) for x in grid])
x_star = solve_dimer_fraction(red.eta).fraction_xj
print(f"grid minimum at x2 = {grid[F.argmin()]:.5f}, solved x2 = {x_star:.8f}")
print(f"inverted back to eta = {eta_from_dimer_fraction(x_star):.12f}")

# %%
# The j-mer fraction divided by its leading term j^{3/2} eta^{j-1}.
print(f"\n{'eta':>8}" + "".join(f"{'x_%d' % j:>13}" for j in range(2, 6)))
for eta in np.geomspace(1e-4, 1e-2, 5):
    xs = [solve_polymer_fraction(eta, j).fraction_xj for j in range(2, 6)]
    print(f"{eta:8.1e}" + "".join(f"{x:13.4e}" for x in xs))

for j in range(2, 6):
    etas = np.geomspace(1e-4, 1e-2, 21)
    xs = [solve_polymer_fraction(e, j).fraction_xj for e in etas]
    print(f"j = {j}: slope {np.polyfit(np.log(etas), np.log(xs), 1)[0]:.4f} (expected {j - 1})")
