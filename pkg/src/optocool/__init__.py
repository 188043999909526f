"""Cooling of mechanical resonators by spectrally filtered thermal light.

Truncated Fock-space Lindblad models, steady-state and transient solvers,
and the closed-form rate model they are checked against.
"""
from .errors import (
    ConfigError,
    ConvergenceError,
    InstabilityError,
    InvalidDimensionError,
    InvalidStateError,
    NonPhysicalStateError,
    NonUniqueSteadyStateError,
    NumericalCorruptionError,
    StiffnessError,
)
from .fock import (
    DensityMatrix,
    ModeSpec,
    Operator,
    SystemConfig,
    diagonal_energies,
    embed,
    make_create,
    make_destroy,
    make_number,
    tensor,
    thermal_state,
)
from .master import (
    Liouvillian,
    LindbladChannel,
    build_scenario,
    build_superoperator,
    dissipator_apply,
    reduced_resonator_generator,
)
from .rates import (
    AppendixRates,
    RateSet,
    appendix_ode_rhs,
    appendix_ss,
    cavity_occupation_ss,
    phonon_ss_cooling,
    phonon_ss_multi,
    phonon_transient_heating,
    resonator_rates,
    unfiltered_rates,
)
from .solvers import SteadyStateResult, Trajectory, evolve, expectation, expm_oracle, steady_state
from .spectra import BathSpec, FilterSpec, bose_occupation, channel_table, filtered_spectrum, spectrum

__version__ = "0.1.0"
