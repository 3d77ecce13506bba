"""Phase-space representations: Wigner and Husimi transforms, the classical
Hamiltonian of the reduced one-degree-of-freedom dynamics, and grid fields.

Conventions (hbar = 1): the Wigner function of a pure state is

    W(x, p) = (1/pi) * Int psi*(x+y) psi(x-y) exp(2ipy) dy,

normalized to Int W dx dp = 1, and the Husimi function is its unit-width
Gaussian blur Q = (1/pi) Int W(x',p') exp(-(x-x')^2 - (p-p')^2) dx' dp'.
State overlaps equal 2*pi times the phase-space overlap of Wigner functions.

The classical Hamiltonian on the fixed-M reduced phase space is

    H_cl(x, p) = (dw/2)(x^2+p^2) + omega0 (M - j)
                 + (lam x / sqrt(j)) sqrt(j^2 - (M - j - (x^2+p^2)/2)^2),

real exactly on the disk x^2 + p^2 <= 2M (for M <= 2j).  With the coupling
term as written, lam > 0 places the quasipotential minimum at x < 0; all
observables are insensitive to this sign convention.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import fftconvolve

from .errors import NumericalError, ValidationError
from .model import ModelParams, StateCoefficients

__all__ = [
    "PhaseGrid",
    "PhaseField",
    "GaussianSummary",
    "DEFAULT_OVERLAP_SHAPE",
    "DEFAULT_OVERLAP_SPACING",
    "DEFAULT_SNAPSHOT_SHAPE",
    "fock_wavefunction",
    "wigner_transform",
    "husimi_transform",
    "classical_hamiltonian",
    "classical_gradient",
    "quasipotential",
    "quasipotential_derivative",
    "quasipotential_minimum",
    "classical_hamiltonian_field",
    "gaussian_moments",
    "field_overlap",
    "write_snapshot",
    "read_snapshot",
]

logger = logging.getLogger(__name__)

# Evaluation grids: overlap grid for survival probabilities, snapshot grid
# for full-domain visualisation output.
DEFAULT_OVERLAP_SHAPE = (400, 250)
DEFAULT_OVERLAP_SPACING = (0.0375, 0.04)
DEFAULT_SNAPSHOT_SHAPE = (500, 500)

_LOG2 = float(np.log(2.0))


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular (x, p) evaluation grid, endpoints inclusive."""

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        if self.nx < 2 or self.np < 2:
            raise ValidationError("grid needs at least 2 points per direction")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValidationError("grid extents must be increasing")

    @classmethod
    def from_center(cls, cx: float, cp: float, dx: float, dp: float, nx: int, np_: int):
        half_x = 0.5 * dx * (nx - 1)
        half_p = 0.5 * dp * (np_ - 1)
        return cls(cx - half_x, cx + half_x, cp - half_p, cp + half_p, nx, np_)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.np - 1)

    @property
    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    def cell_area(self) -> float:
        return self.dx * self.dp

    def mesh(self):
        return np.meshgrid(self.x_values, self.p_values, indexing="ij")


@dataclass
class PhaseField:
    """Scalar function sampled on a PhaseGrid (values shape (nx, np))."""

    grid: PhaseGrid
    values: np.ndarray
    kind: str = "wigner"
    tau: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.np):
            raise ValidationError(
                f"field shape {self.values.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.np})"
            )

    def integral(self) -> float:
        return float(np.sum(self.values)) * self.grid.cell_area()


@dataclass(frozen=True)
class GaussianSummary:
    """Centroid and standard deviations of a phase-space distribution."""

    x0: float
    p0: float
    sigma_x: float
    sigma_p: float

    def __post_init__(self):
        if not (self.sigma_x > 0 and self.sigma_p > 0):
            raise ValidationError("Gaussian summary requires positive widths")


# ---------------------------------------------------------------------------
# Oscillator eigenfunctions
# ---------------------------------------------------------------------------

def _phi_start(x: np.ndarray):
    """phi_0 as (mantissa, exponent) with phi = mantissa * 2**exponent.

    Splitting off the exponent keeps the recurrence finite for arguments far
    outside the classically allowed region, where exp(-x^2/2) underflows.
    """
    t = -0.5 * x * x / _LOG2
    expo = np.floor(t)
    mant = np.pi ** -0.25 * np.exp2(t - expo)
    return mant, expo


def _renormalize(m_prev, m_curr, expo):
    mag = np.maximum(np.abs(m_prev), np.abs(m_curr))
    high = mag > 2.0 ** 500
    if np.any(high):
        m_prev = np.where(high, m_prev * 2.0 ** -500, m_prev)
        m_curr = np.where(high, m_curr * 2.0 ** -500, m_curr)
        expo = np.where(high, expo + 500, expo)
    low = (mag < 2.0 ** -500) & (mag > 0)
    if np.any(low):
        m_prev = np.where(low, m_prev * 2.0 ** 500, m_prev)
        m_curr = np.where(low, m_curr * 2.0 ** 500, m_curr)
        expo = np.where(low, expo - 500, expo)
    return m_prev, m_curr, expo


def _ldexp(mant: np.ndarray, expo: np.ndarray) -> np.ndarray:
    return np.ldexp(mant, np.clip(expo, -2100, 2100).astype(np.int64))


def fock_wavefunction(n: int, x) -> np.ndarray | float:
    """Harmonic-oscillator eigenfunction psi_n(x) (Hermite function).

    Evaluated through the three-term recurrence on the weighted functions,
    never through raw Hermite polynomials or factorials, so it stays accurate
    up to n of several hundred and |x| of several tens.
    """
    if n < 0:
        raise ValidationError("n must be non-negative")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    m_prev, expo = _phi_start(x_arr)
    if n == 0:
        out = _ldexp(m_prev, expo)
    else:
        m_curr = np.sqrt(2.0) * x_arr * m_prev
        for k in range(1, n):
            m_next = (
                x_arr * np.sqrt(2.0 / (k + 1.0)) * m_curr
                - np.sqrt(k / (k + 1.0)) * m_prev
            )
            m_prev, m_curr = m_curr, m_next
            m_prev, m_curr, expo = _renormalize(m_prev, m_curr, expo)
        out = _ldexp(m_curr, expo)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(out[0])
    return out


def _psi_series(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """psi(x) = sum_n c_n psi_n(x) for complex coefficients."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    x = np.asarray(x, dtype=float)
    m_prev, expo = _phi_start(x)
    out = coeffs[0] * _ldexp(m_prev, expo)
    n_max = len(coeffs) - 1
    if n_max == 0:
        return out
    m_curr = np.sqrt(2.0) * x * m_prev
    out = out + coeffs[1] * _ldexp(m_curr, expo)
    for k in range(1, n_max):
        m_next = (
            x * np.sqrt(2.0 / (k + 1.0)) * m_curr
            - np.sqrt(k / (k + 1.0)) * m_prev
        )
        m_prev, m_curr = m_curr, m_next
        m_prev, m_curr, expo = _renormalize(m_prev, m_curr, expo)
        out = out + coeffs[k + 1] * _ldexp(m_curr, expo)
    return out


# ---------------------------------------------------------------------------
# Wigner and Husimi transforms
# ---------------------------------------------------------------------------

def _state_coeffs(state) -> tuple[np.ndarray, float]:
    if isinstance(state, StateCoefficients):
        return state.values, state.tau
    return np.asarray(state, dtype=np.complex128), 0.0


def _significant_band(coeffs: np.ndarray) -> int:
    """Highest Fock index carrying non-negligible weight."""
    mags = np.abs(coeffs)
    top = mags.max()
    if top == 0:
        raise ValidationError("zero state")
    keep = np.nonzero(mags > 1e-9 * top)[0]
    return int(keep[-1])


def wigner_transform(state, grid: PhaseGrid, domain_radius_sq: float | None = None) -> PhaseField:
    """Wigner function of a (possibly complex) Fock-coefficient state.

    The defining y-integral is evaluated by a trapezoid rule on a sub-grid
    commensurate with the x spacing; the step honours the Nyquist limit of
    the integrand (oscillator band edge plus largest requested |p|), which
    makes the rule spectrally accurate.  Points outside the physical disk
    x^2 + p^2 <= 2M are zeroed when domain_radius_sq = 2M is given.

    Raises "grid too coarse" when the grid cannot resolve the finest Wigner
    fringes the state can develop.
    """
    coeffs, tau = _state_coeffs(state)
    n_eff = _significant_band(coeffs)
    k_state = np.sqrt(2.0 * n_eff + 1.0)
    limit = np.pi / (2.0 * k_state)
    if grid.dx > limit or grid.dp > limit:
        raise ValidationError(
            f"grid too coarse: spacing ({grid.dx:.4g}, {grid.dp:.4g}) exceeds "
            f"the sampling limit {limit:.4g} for Fock band n <= {n_eff}"
        )

    xs = grid.x_values
    ps = grid.p_values
    p_max = float(np.max(np.abs(ps)))
    support = k_state + 6.0
    h_target = np.pi / (2.0 * (k_state + p_max) + 8.0)
    m_sub = max(1, int(np.ceil(grid.dx / h_target)))
    h = grid.dx / m_sub
    n_half = int(np.ceil(support / h))

    n_master = (grid.nx - 1) * m_sub + 2 * n_half + 1
    master = xs[0] + (np.arange(n_master) - n_half) * h
    psi = _psi_series(coeffs, master)

    centers = n_half + np.arange(grid.nx) * m_sub
    ks = np.arange(1, n_half + 1)
    f_plus = psi[centers[:, None] + ks]
    f_minus = psi[centers[:, None] - ks]
    f = np.conj(f_plus) * f_minus
    f0 = (np.conj(psi[centers]) * psi[centers]).real

    theta = 2.0 * np.outer(ks * h, ps)
    values = (h / np.pi) * (
        f0[:, None] + 2.0 * (f.real @ np.cos(theta) - f.imag @ np.sin(theta))
    )

    if domain_radius_sq is not None:
        xg, pg = grid.mesh()
        values = np.where(xg * xg + pg * pg <= domain_radius_sq * (1 + 1e-12), values, 0.0)
    return PhaseField(grid=grid, values=values, kind="wigner", tau=tau)


def husimi_transform(field: PhaseField) -> PhaseField:
    """Unit-width Gaussian blur of a Wigner field (discrete convolution)."""
    if field.kind != "wigner":
        raise ValidationError(f"husimi filter expects a wigner field, got {field.kind}")
    dx, dp = field.grid.dx, field.grid.dp
    half_x = int(np.ceil(5.0 / dx))
    half_p = int(np.ceil(5.0 / dp))
    ux = np.arange(-half_x, half_x + 1) * dx
    up = np.arange(-half_p, half_p + 1) * dp
    kernel = np.exp(-ux * ux)[:, None] * np.exp(-up * up)[None, :]
    kernel *= dx * dp / np.pi
    values = fftconvolve(field.values, kernel, mode="same")
    return PhaseField(grid=field.grid, values=values, kind="husimi", tau=field.tau)


# ---------------------------------------------------------------------------
# Classical Hamiltonian
# ---------------------------------------------------------------------------

def _radicand_factors(params: ModelParams, r2):
    """Factored radicand (2j - M + r^2/2)(M - r^2/2); exact sign on the disk."""
    u = 0.5 * np.asarray(r2, dtype=float)
    return (2.0 * params.j - params.M + u) * (params.M - u), params.M - u


def classical_hamiltonian(params: ModelParams, x, p):
    """H_cl(x, p); raises outside the physical disk x^2 + p^2 <= 2M."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    r2 = x * x + p * p
    rad, inner = _radicand_factors(params, r2)
    tol = 1e-12 * max(1.0, 2.0 * params.j * max(params.M, 1))
    if np.any(rad < -tol):
        raise ValidationError("outside classical domain: x^2 + p^2 > 2M")
    rad = np.maximum(rad, 0.0)
    value = (
        0.5 * params.detuning * r2
        + params.omega0 * (params.M - params.j)
        + params.lam * x * np.sqrt(rad) / np.sqrt(params.j)
    )
    if value.ndim == 0:
        return float(value)
    return value


def classical_gradient(params: ModelParams, x, p):
    """(dH/dx, dH/dp); singular on the domain boundary where the root vanishes."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    r2 = x * x + p * p
    rad, _ = _radicand_factors(params, r2)
    rad = np.maximum(rad, 0.0)
    root = np.sqrt(rad)
    q = params.M - params.j - 0.5 * r2
    c = params.lam / np.sqrt(params.j)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(root > 0, q / root, 0.0)
    gx = params.detuning * x + c * (root + x * x * ratio)
    gp = params.detuning * p + c * x * p * ratio
    if gx.ndim == 0:
        return float(gx), float(gp)
    return gx, gp


def quasipotential(params: ModelParams, x):
    """Zero-momentum cut v(x) = H_cl(x, 0)."""
    return classical_hamiltonian(params, x, 0.0)


def quasipotential_derivative(params: ModelParams, x):
    gx, _ = classical_gradient(params, x, 0.0)
    return gx


def quasipotential_minimum(params: ModelParams) -> float:
    """Global minimizer of v(x) on the physical interval.

    With the printed sign convention, lam > 0 puts the minimum at x <= 0.
    """
    r_max = np.sqrt(2.0 * params.M)
    if params.lam == 0.0:
        return 0.0
    eps = 1e-9 * r_max
    if params.lam > 0:
        bounds = (-r_max + eps, 0.0)
    else:
        bounds = (0.0, r_max - eps)
    res = minimize_scalar(
        lambda t: quasipotential(params, t),
        bounds=bounds,
        method="bounded",
        options={"xatol": 1e-11 * max(1.0, r_max)},
    )
    return float(res.x)


def classical_hamiltonian_field(params: ModelParams, grid: PhaseGrid) -> PhaseField:
    """H_cl sampled on a grid; NaN outside the physical disk."""
    xg, pg = grid.mesh()
    r2 = xg * xg + pg * pg
    rad, _ = _radicand_factors(params, r2)
    inside = rad >= 0
    values = np.full(xg.shape, np.nan)
    values[inside] = (
        0.5 * params.detuning * r2[inside]
        + params.omega0 * (params.M - params.j)
        + params.lam * xg[inside] * np.sqrt(rad[inside]) / np.sqrt(params.j)
    )
    return PhaseField(grid=grid, values=values, kind="classical_hamiltonian")


# ---------------------------------------------------------------------------
# Moments and overlaps
# ---------------------------------------------------------------------------

def gaussian_moments(field: PhaseField) -> GaussianSummary:
    """Centroid and second central moments by Riemann sums.

    Warns when more than 1% of the absolute mass is negative; the Gaussian
    summary is unreliable in that case.
    """
    w = field.values
    total_abs = float(np.sum(np.abs(w)))
    if total_abs == 0:
        raise ValidationError("empty field")
    neg_frac = float(np.sum(np.abs(np.minimum(w, 0.0)))) / total_abs
    if neg_frac > 0.01:
        logger.warning(
            "gaussian_moments: negative mass fraction %.3f exceeds 1%%; "
            "Gaussian model unreliable", neg_frac,
        )
    xg, pg = field.grid.mesh()
    mass = float(np.sum(w))
    if mass <= 0:
        raise NumericalError("non-positive total mass; cannot form moments")
    x0 = float(np.sum(w * xg)) / mass
    p0 = float(np.sum(w * pg)) / mass
    var_x = float(np.sum(w * (xg - x0) ** 2)) / mass
    var_p = float(np.sum(w * (pg - p0) ** 2)) / mass
    if var_x <= 0 or var_p <= 0:
        raise NumericalError("non-positive variance; cannot form moments")
    return GaussianSummary(x0=x0, p0=p0, sigma_x=float(np.sqrt(var_x)), sigma_p=float(np.sqrt(var_p)))


def field_overlap(a: PhaseField, b: PhaseField) -> float:
    """2*pi * sum(a * b) dx dp, the phase-space overlap functional."""
    if a.grid != b.grid:
        raise ValidationError("grid mismatch between overlap fields")
    return float(2.0 * np.pi * np.sum(a.values * b.values) * a.grid.cell_area())


# ---------------------------------------------------------------------------
# Snapshot files
# ---------------------------------------------------------------------------

_SNAPSHOT_MAGIC = "tcquench-snapshot-v1"


def write_snapshot(path, field: PhaseField) -> None:
    """Text snapshot: '#'-keyed header plus row-major values, one x-row per line."""
    g = field.grid
    with open(path, "w", newline="") as fh:
        fh.write(f"# format = {_SNAPSHOT_MAGIC}\n")
        fh.write(f"# kind = {field.kind}\n")
        fh.write(f"# tau = {field.tau:.17e}\n")
        fh.write(f"# x_min = {g.x_min:.17e}\n")
        fh.write(f"# x_max = {g.x_max:.17e}\n")
        fh.write(f"# p_min = {g.p_min:.17e}\n")
        fh.write(f"# p_max = {g.p_max:.17e}\n")
        fh.write(f"# nx = {g.nx}\n")
        fh.write(f"# np = {g.np}\n")
        for row in field.values:
            fh.write(" ".join(f"{v:.17e}" for v in row))
            fh.write("\n")


def read_snapshot(path) -> PhaseField:
    header: dict[str, str] = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                header[key.strip()] = val.strip()
            else:
                rows.append(np.array(line.split(), dtype=float))
    if header.get("format") != _SNAPSHOT_MAGIC:
        raise ValidationError(f"not a {_SNAPSHOT_MAGIC} file: {path}")
    grid = PhaseGrid(
        x_min=float(header["x_min"]),
        x_max=float(header["x_max"]),
        p_min=float(header["p_min"]),
        p_max=float(header["p_max"]),
        nx=int(header["nx"]),
        np=int(header["np"]),
    )
    values = np.vstack(rows)
    return PhaseField(grid=grid, values=values, kind=header["kind"], tau=float(header["tau"]))
