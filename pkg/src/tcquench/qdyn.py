"""Exact post-quench quantum evolution in one fixed-M subspace.

Everything runs in scaled time tau = omega0 * j * t.  The survival
probability is the squared Fourier sum of the strength function,

    P_qm(tau) = | sum_k w_k exp(-i E_k tau / (omega0 j)) |^2,

and evolved states come from spectral decomposition in the final eigenbasis.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .model import EigenSystem, StateCoefficients
from .phase_space import PhaseField, PhaseGrid, husimi_transform, wigner_transform
from .spectral import StrengthFunction

__all__ = [
    "quantum_survival",
    "evolve_coefficients",
    "evolved_wigner",
    "evolved_husimi",
]


def quantum_survival(strength: StrengthFunction, tau_grid) -> np.ndarray:
    """P_qm on a scaled-time grid from the strength function."""
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    total = float(np.sum(strength.weights))
    if abs(total - 1.0) > 1e-8:
        raise ValidationError(f"strength function not normalized (sum = {total})")
    phases = np.exp(-1j * np.outer(tau / strength.scale, strength.energies))
    amp = phases @ strength.weights
    return np.abs(amp) ** 2


def evolve_coefficients(psi_i: StateCoefficients, es_f: EigenSystem, tau: float) -> StateCoefficients:
    """Coefficients of exp(-i H_f t) |psi_i> at scaled time tau."""
    if psi_i.dim != es_f.vectors.shape[0]:
        raise ValidationError("dimension mismatch between state and eigensystem")
    t = tau / es_f.params.energy_scale
    amplitudes = es_f.vectors.T @ psi_i.values
    evolved = es_f.vectors @ (amplitudes * np.exp(-1j * es_f.energies * t))
    return StateCoefficients(values=evolved, tau=float(tau))


def evolved_wigner(
    psi_i: StateCoefficients,
    es_f: EigenSystem,
    tau: float,
    grid: PhaseGrid,
) -> PhaseField:
    """Wigner function of the quantum-evolved state."""
    state = evolve_coefficients(psi_i, es_f, tau)
    return wigner_transform(state, grid, domain_radius_sq=2.0 * es_f.params.M)


def evolved_husimi(
    psi_i: StateCoefficients,
    es_f: EigenSystem,
    tau: float,
    grid: PhaseGrid,
) -> PhaseField:
    """Husimi function of the quantum-evolved state."""
    return husimi_transform(evolved_wigner(psi_i, es_f, tau, grid))
