"""Quench dynamics in fixed-excitation Tavis-Cummings subspaces.

Exact quantum evolution and truncated-Wigner (classical contour) evolution
of post-quench states, with survival-probability diagnostics for
excited-state quantum phase transitions.
"""

from .errors import NumericalError, ValidationError
from .model import (
    EigenSystem,
    ModelParams,
    StateCoefficients,
    SubspaceBasis,
    TridiagonalHamiltonian,
    build_basis,
    build_hamiltonian,
    diagonalize,
    expectation_jz,
    ground_state,
)
from .phase_space import (
    GaussianSummary,
    PhaseField,
    PhaseGrid,
    classical_hamiltonian,
    classical_gradient,
    fock_wavefunction,
    field_overlap,
    gaussian_moments,
    husimi_transform,
    quasipotential,
    quasipotential_derivative,
    quasipotential_minimum,
    read_snapshot,
    wigner_transform,
    write_snapshot,
)
from .spectral import (
    SpectrumSweep,
    StrengthFunction,
    critical_coupling,
    esqpt_energy,
    esqpt_locator,
    strength_function,
    sweep_spectrum,
)
from .qdyn import evolve_coefficients, evolved_husimi, evolved_wigner, quantum_survival

__version__ = "0.1.0"
