"""Fixed-excitation subspace of the Tavis-Cummings model.

The rotating-wave atom-field Hamiltonian

    H = omega * b'b + omega0 * Jz + (lam / sqrt(2j)) * (b'J- + bJ+)

commutes with the excitation number M = b'b + Jz + j.  Restricted to a single
eigenvalue of M it becomes a real symmetric tridiagonal matrix in the ordered
photon basis |n, m = M - n - j>, n = 0..M, which is what this module builds
and diagonalizes.  Only subspaces with M <= 2j are supported; energies are
reported raw and in the scaled form eps = E / (omega0 * j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NumericalError, ValidationError

__all__ = [
    "ModelParams",
    "SubspaceBasis",
    "TridiagonalHamiltonian",
    "EigenSystem",
    "StateCoefficients",
    "build_basis",
    "build_hamiltonian",
    "diagonalize",
    "ground_state",
    "expectation_jz",
]


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one fixed-M Tavis-Cummings system.

    j       quasispin length (positive integer or half-integer)
    omega   field frequency (energy units, hbar = 1)
    omega0  atomic transition frequency
    M       conserved excitation number, 0 <= M <= 2j
    lam     coupling strength
    """

    j: float
    omega: float
    omega0: float
    M: int
    lam: float

    def __post_init__(self):
        two_j = 2.0 * self.j
        if abs(two_j - round(two_j)) > 1e-9 or round(two_j) < 1:
            raise ValidationError(f"2j must be a positive integer, got j={self.j}")
        if not (self.omega >= self.omega0 > 0.0):
            raise ValidationError(
                f"detuning convention requires omega >= omega0 > 0, got "
                f"omega={self.omega}, omega0={self.omega0}"
            )
        if int(self.M) != self.M or self.M < 0:
            raise ValidationError(f"M must be a non-negative integer, got {self.M}")
        if self.M > round(two_j):
            raise ValidationError(
                f"unsupported subspace: M={self.M} exceeds 2j={round(two_j)}"
            )

    @property
    def detuning(self) -> float:
        return self.omega - self.omega0

    @property
    def energy_scale(self) -> float:
        """Scale omega0 * j used for eps = E / (omega0 j) and tau = omega0 j t."""
        return self.omega0 * self.j


@dataclass(frozen=True)
class SubspaceBasis:
    """Ordered basis |n, m = M - n - j> of one fixed-M subspace."""

    n_values: np.ndarray
    m_values: np.ndarray
    dim: int


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """Symmetric tridiagonal matrix of H in the fixed-M photon basis."""

    diag: np.ndarray
    offdiag: np.ndarray
    params: ModelParams

    def to_dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        n = len(self.diag)
        if n > 1:
            h[np.arange(n - 1), np.arange(1, n)] = self.offdiag
            h[np.arange(1, n), np.arange(n - 1)] = self.offdiag
        return h

    def norm_estimate(self) -> float:
        """Cheap upper bound on the spectral norm (Gershgorin)."""
        n = len(self.diag)
        radius = np.zeros(n)
        if n > 1:
            radius[:-1] += np.abs(self.offdiag)
            radius[1:] += np.abs(self.offdiag)
        return float(np.max(np.abs(self.diag) + radius))


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and orthonormal eigenvectors (columns)."""

    energies: np.ndarray
    vectors: np.ndarray
    params: ModelParams

    @property
    def scaled_energies(self) -> np.ndarray:
        return self.energies / self.params.energy_scale


@dataclass
class StateCoefficients:
    """Complex amplitudes over the subspace photon basis, with a time stamp.

    The time stamp is in scaled units tau = omega0 * j * t.
    """

    values: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)

    @property
    def dim(self) -> int:
        return len(self.values)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))


def build_basis(params: ModelParams) -> SubspaceBasis:
    """Enumerate |n, m = M - n - j> for n = 0..M.

    For M <= 2j the dimension min(M+1, 2j+1) equals M+1.
    """
    n_values = np.arange(params.M + 1)
    m_values = params.M - n_values - params.j
    dim = int(min(params.M + 1, round(2 * params.j) + 1))
    return SubspaceBasis(n_values=n_values, m_values=m_values, dim=dim)


def build_hamiltonian(params: ModelParams) -> TridiagonalHamiltonian:
    """Assemble the tridiagonal subspace Hamiltonian.

    diag[n]    = omega * n + omega0 * (M - n - j)
    offdiag[n] = lam / sqrt(2j) * sqrt(n+1) * sqrt(j(j+1) - m(m-1)),  m = M - n - j

    The off-diagonal entry couples |n, m> to |n+1, m-1> through b'J-.
    """
    basis = build_basis(params)
    j = params.j
    n = basis.n_values.astype(float)
    m = basis.m_values.astype(float)
    diag = params.omega * n + params.omega0 * m
    n_low = n[:-1]
    m_low = m[:-1]
    offdiag = (
        params.lam
        / np.sqrt(2.0 * j)
        * np.sqrt(n_low + 1.0)
        * np.sqrt(j * (j + 1.0) - m_low * (m_low - 1.0))
    )
    return TridiagonalHamiltonian(diag=diag, offdiag=offdiag, params=params)


def diagonalize(h: TridiagonalHamiltonian) -> EigenSystem:
    """Full spectrum of the symmetric tridiagonal matrix, energies ascending.

    Raises NumericalError if the eigensolver does not converge or the
    residual / orthonormality checks fail (residual <= 1e-10 * |H|,
    V'V = 1 to 1e-12).
    """
    d = len(h.diag)
    if d < 1:
        raise ValidationError("empty Hamiltonian")
    if d == 1:
        energies = h.diag.copy()
        vectors = np.ones((1, 1))
    else:
        try:
            energies, vectors = eigh_tridiagonal(h.diag, h.offdiag)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
            raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc

    scale = max(h.norm_estimate(), 1.0)
    residual = _tridiag_matvec(h.diag, h.offdiag, vectors) - vectors * energies
    max_residual = float(np.max(np.linalg.norm(residual, axis=0)))
    if max_residual > 1e-10 * scale:
        raise NumericalError(
            f"eigenvector residual {max_residual:.3e} exceeds 1e-10 * |H|"
        )
    ortho_dev = float(np.max(np.abs(vectors.T @ vectors - np.eye(d))))
    if ortho_dev > 1e-12 * max(d, 100):
        raise NumericalError(f"eigenvectors not orthonormal (dev {ortho_dev:.3e})")
    return EigenSystem(energies=energies, vectors=vectors, params=h.params)


def _tridiag_matvec(diag: np.ndarray, offdiag: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = diag[:, None] * v
    if len(diag) > 1:
        out[:-1] += offdiag[:, None] * v[1:]
        out[1:] += offdiag[:, None] * v[:-1]
    return out


def ground_state(es: EigenSystem) -> StateCoefficients:
    """Lowest-energy eigenvector with a deterministic global sign.

    The sign is fixed so the largest-magnitude coefficient is positive,
    which keeps downstream Wigner functions reproducible.
    """
    vec = es.vectors[:, 0].copy()
    k = int(np.argmax(np.abs(vec)))
    if vec[k] < 0:
        vec = -vec
    return StateCoefficients(values=vec.astype(np.complex128), tau=0.0)


def expectation_jz(state: StateCoefficients, basis: SubspaceBasis, scaled: bool = False) -> float:
    """<Jz> = sum_n |c_n|^2 (M - n - j); divide by j when scaled."""
    weights = np.abs(state.values) ** 2
    if len(weights) != len(basis.m_values):
        raise ValidationError(
            f"dimension mismatch: state {len(weights)}, basis {len(basis.m_values)}"
        )
    value = float(np.sum(weights * basis.m_values))
    if scaled:
        # n + m + j = M and n runs 0..M, so j = n_max - m_0
        j = float(basis.n_values[-1] - basis.m_values[0])
        value /= j
    return value
