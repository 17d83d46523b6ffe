"""Truncated Fock space, Heisenberg-Weyl coherent states, and the plane grid.

The disk quadrature realizes the coherent-state POVM integral over
|α| <= radius only, so identity-type statements hold on the low Fock
levels that disk actually populates; the analytic disk-limit predictions
below (regularized incomplete-gamma factors) are the right comparison
targets for grid output, while infinite-plane statements carry an
irreducible e^(-R²)-scale gap.  States with |α|² <= dim/4 are represented
with negligible truncation loss; guard_dim marks the sub-block where
matrix arithmetic is truncation-safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainc, gammaln

DEFAULT_DIM = 40
DEFAULT_GUARD_MARGIN = 8
DEFAULT_RADIUS = 3.0
DEFAULT_N_RADIAL = 40
DEFAULT_N_ANGULAR = 64
XI_FLOOR = 1e-8  # |B_xi| below this is too ill-conditioned for a ratio


class TruncationError(ValueError):
    """A phase-space label is too large for the truncated space."""


@dataclass(frozen=True)
class FockSpace:
    """Levels 0..dim-1 with lowering/raising matrices a, a†."""

    dim: int
    guard_dim: int = -1  # -1 means dim - DEFAULT_GUARD_MARGIN

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be at least 2")
        if self.guard_dim == -1:
            object.__setattr__(self, "guard_dim", max(self.dim - DEFAULT_GUARD_MARGIN, 1))
        if not 0 < self.guard_dim <= self.dim:
            raise ValueError("guard_dim must lie in 1..dim")
        a = np.diag(np.sqrt(np.arange(1, self.dim)), 1).astype(complex)
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    @property
    def a(self) -> np.ndarray:
        return self._a

    @property
    def adag(self) -> np.ndarray:
        return self._a.conj().T

    def check_label(self, alpha: complex):
        if abs(alpha) ** 2 > self.dim / 4:
            raise TruncationError(
                f"|alpha|^2 = {abs(alpha) ** 2:.3f} exceeds dim/4 = {self.dim / 4}"
            )


def fock_coherent_state(space: FockSpace, alpha: complex) -> np.ndarray:
    """Components e^(-|α|²/2) α^k / sqrt(k!), k = 0..dim-1."""
    space.check_label(alpha)
    alpha = complex(alpha)
    k = np.arange(space.dim)
    if alpha == 0:
        out = np.zeros(space.dim, dtype=complex)
        out[0] = 1.0
        return out
    # log-domain magnitudes avoid factorial overflow at high dim
    log_mag = -abs(alpha) ** 2 / 2 + k * np.log(abs(alpha)) - gammaln(k + 1) / 2
    return np.exp(log_mag) * np.exp(1j * k * np.angle(alpha))


def displacement_matrix(space: FockSpace, alpha: complex) -> np.ndarray:
    """exp(α a† - α* a) on the truncated space."""
    space.check_label(alpha)
    alpha = complex(alpha)
    return expm(alpha * space.adag - np.conj(alpha) * space.a)


@dataclass(frozen=True)
class PlaneQuadrature:
    """Disk nodes α_k with weights carrying the d²α/π measure; Σw = radius²."""

    alphas: np.ndarray
    weights: np.ndarray
    radius: float

    def __post_init__(self):
        alphas = np.ascontiguousarray(np.asarray(self.alphas, dtype=complex))
        weights = np.ascontiguousarray(np.asarray(self.weights, dtype=float))
        alphas.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.weights)

    @property
    def points(self) -> np.ndarray:
        return self.alphas


def plane_quadrature(space: FockSpace, radius: float = DEFAULT_RADIUS,
                     n_radial: int = DEFAULT_N_RADIAL,
                     n_angular: int = DEFAULT_N_ANGULAR) -> PlaneQuadrature:
    """Gauss-Legendre nodes in r² on [0, radius²] × uniform angle grid."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if radius > np.sqrt(space.dim) / 2:
        raise TruncationError(
            f"radius {radius} exceeds sqrt(dim)/2 = {np.sqrt(space.dim) / 2:.3f}"
        )
    x, w_gl = np.polynomial.legendre.leggauss(n_radial)
    u = 0.5 * (x + 1.0) * radius**2          # u = r², d²α/π = du dφ / (2π)
    w_u = 0.5 * w_gl * radius**2
    angles = 2 * pi * np.arange(n_angular) / n_angular
    alphas = np.sqrt(u)[:, None] * np.exp(1j * angles)[None, :]
    weights = np.repeat(w_u[:, None] / n_angular, n_angular, axis=1)
    return PlaneQuadrature(alphas.ravel(), weights.ravel(), radius)


def coherent_state_matrix(space: FockSpace, quad: PlaneQuadrature) -> np.ndarray:
    """All grid coherent states as rows of an (n_points, dim) matrix."""
    k = np.arange(space.dim)
    mags = np.abs(quad.alphas)[:, None]
    with np.errstate(divide="ignore"):
        log_mag = np.where(mags > 0, k[None, :] * np.log(np.where(mags > 0, mags, 1.0)), 0.0)
    log_mag = -mags**2 / 2 + log_mag - gammaln(k + 1)[None, :] / 2
    phases = np.exp(1j * k[None, :] * np.angle(quad.alphas)[:, None])
    out = np.exp(log_mag) * phases
    zero = quad.alphas == 0
    if np.any(zero):
        out[zero] = 0.0
        out[zero, 0] = 1.0
    return out


def q_symbol_fock(space: FockSpace, operator: np.ndarray,
                  quad: PlaneQuadrature) -> np.ndarray:
    """Samples ⟨α_k|B|α_k⟩ on the quadrature nodes."""
    operator = np.asarray(operator, dtype=complex)
    if operator.shape != (space.dim, space.dim):
        raise ValueError(
            f"operator shape {operator.shape} does not match dim {space.dim}"
        )
    psi = coherent_state_matrix(space, quad)
    return np.einsum("ki,ij,kj->k", psi.conj(), operator, psi)


def grid_channel_apply(space: FockSpace, quad: PlaneQuadrature,
                       operator: np.ndarray) -> np.ndarray:
    """Σ_k w_k ⟨α_k|B|α_k⟩ |α_k⟩⟨α_k|, the disk-discretized Lüders image."""
    psi = coherent_state_matrix(space, quad)
    q = np.einsum("ki,ij,kj->k", psi.conj(), np.asarray(operator, dtype=complex), psi)
    return (psi.T * (quad.weights * q)) @ psi.conj()


def resolution_defect(space: FockSpace, quad: PlaneQuadrature,
                      block: int | None = None) -> float:
    """Max-entry deviation of Σ w|α⟩⟨α| from identity on the leading block."""
    block = space.guard_dim if block is None else block
    psi = coherent_state_matrix(space, quad)
    rou = (psi.T * quad.weights) @ psi.conj()
    return float(np.abs(rou[:block, :block] - np.eye(space.dim)[:block, :block]).max())


# --- analytic disk-limit references -------------------------------------------

def disk_identity_matrix(space: FockSpace, radius: float) -> np.ndarray:
    """Continuum value of the disk POVM integral: diag of regularized γ(k+1, R²)."""
    k = np.arange(space.dim)
    return np.diag(gammainc(k + 1, radius**2)).astype(complex)


def disk_monomial_image(space: FockSpace, m: int, n: int, radius: float) -> np.ndarray:
    """Continuum disk-channel image of a†^m a^n.

    Over the whole plane the image is a^n a†^m; restricting the integral
    to |α| <= R multiplies each nonzero entry (j, k), j = k + m - n, by
    the regularized incomplete gamma P(m + k + 1, R²).
    """
    exact = np.linalg.matrix_power(space.a, n) @ np.linalg.matrix_power(space.adag, m)
    out = np.zeros_like(exact)
    for kk in range(space.dim):
        j = kk + m - n
        if 0 <= j < space.dim:
            out[j, kk] = exact[j, kk] * gammainc(m + kk + 1, radius**2)
    return out


# --- symplectic-Fourier coefficients and the damping check --------------------

@dataclass(frozen=True)
class XiSpectrum:
    """Discretized coefficients B_ξ of a Q-symbol at the given ξ points."""

    xi_points: np.ndarray
    coeffs: np.ndarray


def xi_coefficients(samples: np.ndarray, quad: PlaneQuadrature,
                    xi_points: np.ndarray) -> XiSpectrum:
    """B_ξ = Σ_k w_k Q(α_k) exp(ᾱ_k ξ - α_k ξ̄), the plane-wave transform."""
    xi_points = np.asarray(xi_points, dtype=complex)
    kern = np.exp(
        np.outer(quad.alphas.conj(), xi_points)
        - np.outer(quad.alphas, xi_points.conj())
    )
    coeffs = (quad.weights * np.asarray(samples)) @ kern
    return XiSpectrum(xi_points, coeffs)


def default_xi_points(count: int = 25, radius: float = 2.0) -> np.ndarray:
    """Deterministic rings of sample points with 0 < |ξ| <= radius."""
    n_rings = 5
    per_ring = count // n_rings
    radii = radius * (np.arange(1, n_rings + 1) / n_rings)
    out = []
    for i, r in enumerate(radii):
        angles = 2 * pi * (np.arange(per_ring) + 0.5 * (i % 2)) / per_ring
        out.extend(r * np.exp(1j * angles))
    return np.array(out[:count])


@dataclass(frozen=True)
class DampingReport:
    """Pointwise ratio B_ξ(Q_Λ(B)) / B_ξ(Q_B) against the Gaussian e^(-|ξ|²)."""

    xi_points: np.ndarray
    source_coeffs: np.ndarray
    image_coeffs: np.ndarray
    ratios: np.ndarray
    expected: np.ndarray
    deviations: np.ndarray
    flagged: np.ndarray  # True where |B_ξ| < XI_FLOOR: not compared

    @property
    def max_deviation(self) -> float:
        live = ~self.flagged
        return float(self.deviations[live].max()) if live.any() else 0.0


def verify_damping(space: FockSpace, operator: np.ndarray, quad: PlaneQuadrature,
                   xi_points: np.ndarray | None = None) -> DampingReport:
    """Compare the transform ratio of Q_Λ(B) to Q_B with e^(-|ξ|²).

    Points where the source coefficient is below XI_FLOOR are flagged and
    excluded from the deviation (the ratio there is ill-conditioned).
    """
    if xi_points is None:
        xi_points = default_xi_points()
    source = q_symbol_fock(space, operator, quad)
    image = q_symbol_fock(space, grid_channel_apply(space, quad, operator), quad)
    src = xi_coefficients(source, quad, xi_points)
    img = xi_coefficients(image, quad, xi_points)
    flagged = np.abs(src.coeffs) < XI_FLOOR
    ratios = np.where(flagged, np.nan + 0j, img.coeffs / np.where(flagged, 1.0, src.coeffs))
    expected = np.exp(-np.abs(src.xi_points) ** 2)
    deviations = np.where(flagged, np.nan, np.abs(ratios - expected))
    return DampingReport(
        xi_points=src.xi_points,
        source_coeffs=src.coeffs,
        image_coeffs=img.coeffs,
        ratios=ratios,
        expected=expected,
        deviations=deviations,
        flagged=flagged,
    )
