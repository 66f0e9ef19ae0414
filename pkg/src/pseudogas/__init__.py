"""Quantum corrections and pseudo-molecule multioccupancy in semi-classical gases."""
from .core import (
    CONSTANTS,
    GasSpec,
    PhysicalConstants,
    ReducedState,
    Statistics,
    pair_spin_degeneracies,
    reduced_from_physical,
    single_particle_partition,
    thermal_wavelength,
    validate_spin_statistics,
)
from .errors import (
    DomainError,
    EnumerationTooLarge,
    LatticeTooLarge,
    NoConvergence,
    NonPositiveInput,
    OutOfSemiclassicalRange,
    PseudogasError,
    QuadratureFailure,
    SpinStatisticsMismatch,
)
from .lattice import (
    CanonicalResult,
    ModeLattice,
    QuantizationConvention,
    SampleStats,
    build_lattice,
    canonical_partition_recursion,
    enumerate_exact,
    multiplet_scaling_report,
    sample_boltzmann_coincidences,
)
from .pseudochem import (
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
)
from .statmech import (
    Fugacity,
    ThermoPoint,
    occupancy_ratio_quadrature,
    polylog,
    pressure_first_order,
    pressure_ratio_exact,
    solve_fugacity,
)
from .table import SweepResult, emit_table

__version__ = "0.1.0"
