"""Coupling sweeps, ESQPT diagnostics, and quench strength functions.

The critical subspace M = 2j hosts an excited-state quantum phase transition
at scaled energy eps_c = 1 once the coupling exceeds lam_c = (omega-omega0)/2.
The transition shows up as a sharp feature in <Jz> versus energy, which is
located here by the steepest finite-difference slope.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .model import (
    EigenSystem,
    ModelParams,
    StateCoefficients,
    build_basis,
    build_hamiltonian,
    diagonalize,
)

__all__ = [
    "SpectrumSweep",
    "StrengthFunction",
    "critical_coupling",
    "esqpt_energy",
    "sweep_spectrum",
    "strength_function",
    "esqpt_locator",
    "write_spectrum_csv",
    "write_strength_csv",
]


@dataclass(frozen=True)
class SpectrumSweep:
    """Per-coupling spectra and quasispin expectations on a lambda grid.

    energies and jz_values have shape (n_lambda, dim); energies are scaled
    (eps = E / omega0 j) and ascending along each row, jz_values are <Jz>/j.
    """

    lambda_values: np.ndarray
    lambda_over_lambda_c: np.ndarray
    energies: np.ndarray
    jz_values: np.ndarray


@dataclass(frozen=True)
class StrengthFunction:
    """Distribution of an initial state over final-Hamiltonian eigenstates."""

    energies: np.ndarray  # raw final eigenvalues E_fk
    weights: np.ndarray   # |<E_fk | psi_i>|^2
    scale: float          # omega0 * j, for eps conversion

    @property
    def scaled_energies(self) -> np.ndarray:
        return self.energies / self.scale

    def mean_energy(self) -> float:
        return float(np.sum(self.weights * self.energies))

    def std_energy(self) -> float:
        mu = self.mean_energy()
        return float(np.sqrt(np.sum(self.weights * (self.energies - mu) ** 2)))


def critical_coupling(omega: float, omega0: float) -> float:
    """lam_c = (omega - omega0) / 2 for omega >= omega0."""
    if omega < omega0:
        raise ValidationError("detuning convention requires omega >= omega0")
    return 0.5 * (omega - omega0)


def esqpt_energy(params: ModelParams) -> float:
    """Scaled critical energy eps_c = 1 of the M = 2j subspace.

    Raises for non-critical subspaces (M != 2j) or sub-critical coupling,
    where no excited-state transition exists.
    """
    two_j = round(2 * params.j)
    lam_c = critical_coupling(params.omega, params.omega0)
    if params.M != two_j or params.lam <= lam_c:
        raise ValidationError(
            "no ESQPT: requires the critical subspace M = 2j and lam > lam_c"
        )
    return 1.0


def sweep_spectrum(params: ModelParams, lambda_grid) -> SpectrumSweep:
    """Diagonalize at each coupling of an ascending grid (raw lambda units).

    Records scaled eigenvalues and per-eigenstate <Jz>/j columns.
    """
    lam_values = np.atleast_1d(np.asarray(lambda_grid, dtype=float))
    if lam_values.size == 0:
        raise ValidationError("empty lambda grid")
    basis = build_basis(params)
    scale = params.energy_scale
    energies = np.empty((lam_values.size, basis.dim))
    jz = np.empty_like(energies)
    for i, lam in enumerate(lam_values):
        es = diagonalize(build_hamiltonian(replace(params, lam=float(lam))))
        energies[i] = es.energies / scale
        jz[i] = (np.abs(es.vectors) ** 2 * basis.m_values[:, None]).sum(axis=0) / params.j
    lam_c = critical_coupling(params.omega, params.omega0)
    ratio = lam_values / lam_c if lam_c > 0 else np.full_like(lam_values, np.nan)
    return SpectrumSweep(
        lambda_values=lam_values,
        lambda_over_lambda_c=ratio,
        energies=energies,
        jz_values=jz,
    )


def strength_function(psi_i: StateCoefficients, es_f: EigenSystem) -> StrengthFunction:
    """Weights |<E_fk|psi_i>|^2 of the initial state in the final eigenbasis."""
    if psi_i.dim != es_f.vectors.shape[0]:
        raise ValidationError(
            f"dimension mismatch: state {psi_i.dim}, eigensystem {es_f.vectors.shape[0]}"
        )
    amplitudes = es_f.vectors.T @ psi_i.values
    weights = np.abs(amplitudes) ** 2
    return StrengthFunction(
        energies=es_f.energies.copy(),
        weights=weights,
        scale=es_f.params.energy_scale,
    )


def esqpt_locator(scaled_energies: np.ndarray, jz_over_j: np.ndarray):
    """Locate the sharpest change of <Jz>/j with energy.

    Returns (eps_at_max_slope, max_slope, local_spacing): the midpoint energy
    of the steepest finite-difference segment, the slope magnitude there, and
    the local level spacing (slope denominator), usable as a resolution bound.
    """
    d_eps = np.diff(scaled_energies)
    d_jz = np.diff(jz_over_j)
    safe = np.where(d_eps > 0, d_eps, np.inf)
    slopes = np.abs(d_jz) / safe
    k = int(np.argmax(slopes))
    eps_mid = 0.5 * (scaled_energies[k] + scaled_energies[k + 1])
    return float(eps_mid), float(slopes[k]), float(d_eps[k])


def write_spectrum_csv(path, sweep: SpectrumSweep) -> None:
    """Per-coupling spectrum table (one row per eigenstate per coupling)."""
    if np.any(~np.isfinite(sweep.lambda_over_lambda_c)):
        raise ValidationError(
            "no critical coupling (omega == omega0): spectrum table is "
            "defined in lambda/lambda_c units"
        )
    with open(path, "w", newline="") as fh:
        fh.write("lambda_over_lambda_c,k,epsilon_k,jz_over_j_k\n")
        for i in range(sweep.lambda_values.size):
            ratio = sweep.lambda_over_lambda_c[i]
            for k in range(sweep.energies.shape[1]):
                fh.write(
                    f"{ratio:.17e},{k},{sweep.energies[i, k]:.17e},"
                    f"{sweep.jz_values[i, k]:.17e}\n"
                )


def write_strength_csv(path, strength: StrengthFunction) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("epsilon_k,weight_k\n")
        eps = strength.scaled_energies
        for k in range(len(eps)):
            fh.write(f"{eps[k]:.17e},{strength.weights[k]:.17e}\n")
