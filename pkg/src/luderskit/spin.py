"""Spin-s spaces, SU(2) coherent states, and exact sphere quadrature.

States |n⟩ are labelled by points of the unit sphere; the basis is
|s, m⟩ with m descending from s to -s, so the highest-weight reference
state is the first basis vector.  The product quadrature (Gauss-Legendre
in cos θ, uniform in φ) integrates every spherical harmonic up to its
exact degree, which makes the discretized POVM resolve the identity to
machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, pi

import numpy as np

from .channel import WeightedProjectorFamily

MAX_TWO_S = 50  # dense D² superoperators get large beyond s = 25


@dataclass(frozen=True)
class SpinSpace:
    """Spin-s Hilbert space (dim = two_s + 1) with ladder matrices."""

    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, int) or self.two_s < 1:
            raise ValueError("two_s must be a positive integer")
        if self.two_s > MAX_TWO_S:
            raise ValueError(f"two_s capped at {MAX_TWO_S}")
        m = self.spin - np.arange(self.dim)
        jz = np.diag(m).astype(complex)
        jplus = np.zeros((self.dim, self.dim), dtype=complex)
        # J+|s,m> = sqrt((s-m)(s+m+1)) |s,m+1>; basis index k has m = s-k
        for k in range(1, self.dim):
            mk = self.spin - k
            jplus[k - 1, k] = np.sqrt((self.spin - mk) * (self.spin + mk + 1))
        for arr in (jz, jplus):
            arr.setflags(write=False)
        object.__setattr__(self, "_jz", jz)
        object.__setattr__(self, "_jplus", jplus)

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def spin(self) -> float:
        return self.two_s / 2

    @property
    def jz(self) -> np.ndarray:
        return self._jz

    @property
    def jplus(self) -> np.ndarray:
        return self._jplus

    @property
    def jminus(self) -> np.ndarray:
        return self._jplus.conj().T


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    @property
    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array(
            [st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)]
        )


def spin_coherent_state(space: SpinSpace, point: SpherePoint) -> np.ndarray:
    """Coherent state ⟨s,m|n⟩ = sqrt(C(2s,s+m)) cos^(s+m)(θ/2) sin^(s-m)(θ/2) e^(-imφ)."""
    two_s = space.two_s
    k = np.arange(space.dim)          # basis index, m = s - k, so s+m = 2s-k
    half = point.theta / 2
    amps = np.array([np.sqrt(comb(two_s, two_s - kk)) for kk in k])
    mag = amps * np.cos(half) ** (two_s - k) * np.sin(half) ** k
    return mag * np.exp(-1j * (space.spin - k) * point.phi)


def coherent_state_matrix(space: SpinSpace, grid: "SphereQuadrature") -> np.ndarray:
    """All grid coherent states as rows of an (n_points, dim) matrix."""
    two_s = space.two_s
    k = np.arange(space.dim)
    amps = np.sqrt([comb(two_s, two_s - kk) for kk in k])
    half = grid.thetas[:, None] / 2
    mag = amps[None, :] * np.cos(half) ** (two_s - k)[None, :] * np.sin(half) ** k[None, :]
    return mag * np.exp(-1j * np.outer(grid.phis, space.spin - k))


def overlap_squared(space: SpinSpace, p1: SpherePoint, p2: SpherePoint) -> float:
    """|⟨n1|n2⟩|², computed from the state vectors."""
    v1 = spin_coherent_state(space, p1)
    v2 = spin_coherent_state(space, p2)
    return float(abs(np.vdot(v1, v2)) ** 2)


@dataclass(frozen=True)
class SphereQuadrature:
    """Product quadrature on the sphere carrying the (2s+1)/(4π) sinθ measure.

    Exact for all integrands band-limited to spherical-harmonic degree
    exact_degree; total weight is 2s+1.
    """

    thetas: np.ndarray
    phis: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def __post_init__(self):
        for name in ("thetas", "phis", "weights"):
            arr = np.ascontiguousarray(np.asarray(getattr(self, name), dtype=float))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.weights)

    @property
    def points(self) -> list[SpherePoint]:
        return [SpherePoint(t, p) for t, p in zip(self.thetas, self.phis)]


def sphere_quadrature(space: SpinSpace, n_theta: int | None = None,
                      n_phi: int | None = None) -> SphereQuadrature:
    """Minimal exact grid: 2s+1 Gauss-Legendre θ-nodes × 4s+1 uniform φ-nodes.

    Every integrand arising from degree-2s symbols (overlaps, symbol
    products) is band-limited to degree 4s, which this grid integrates
    exactly: min(2*n_theta - 1, n_phi - 1) >= 4s.
    """
    two_s = space.two_s
    n_theta = two_s + 1 if n_theta is None else n_theta
    n_phi = 2 * two_s + 1 if n_phi is None else n_phi
    if n_theta < two_s + 1:
        raise ValueError(f"need at least {two_s + 1} theta nodes")
    if n_phi < 2 * two_s + 1:
        raise ValueError(f"need at least {2 * two_s + 1} phi nodes")
    x, w_gl = np.polynomial.legendre.leggauss(n_theta)
    thetas = np.arccos(x)
    phis = 2 * pi * np.arange(n_phi) / n_phi
    # (2s+1)/(4π) sinθ dθ dφ  ->  (2s+1) * w_gl/2 * (1/n_phi) per node
    w_theta = (two_s + 1) * w_gl / 2
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    ww = np.repeat(w_theta[:, None] / n_phi, n_phi, axis=1)
    exact_degree = min(2 * n_theta - 1, n_phi - 1)
    return SphereQuadrature(tt.ravel(), pp.ravel(), ww.ravel(), exact_degree)


def q_symbol_spin(space: SpinSpace, operator: np.ndarray,
                  grid: SphereQuadrature) -> np.ndarray:
    """Samples ⟨n_k|B|n_k⟩ on the quadrature nodes."""
    operator = np.asarray(operator, dtype=complex)
    if operator.shape != (space.dim, space.dim):
        raise ValueError(
            f"operator shape {operator.shape} does not match dim {space.dim}"
        )
    psi = coherent_state_matrix(space, grid)
    return np.einsum("ki,ij,kj->k", psi.conj(), operator, psi)


# --- spherical harmonics ------------------------------------------------------

def ylm_stream(lmax: int, thetas: np.ndarray, phis: np.ndarray):
    """Yield ((l, m), Y_lm values) for 0 <= m <= l <= lmax at the given nodes.

    Fully normalized harmonics with the Condon-Shortley phase, built from
    the stable three-term recurrence on normalized associated Legendre
    functions; negative m follows from Y_{l,-m} = (-1)^m conj(Y_lm).
    """
    x = np.cos(thetas)
    sx = np.sin(thetas)
    pmm = np.full_like(x, 1.0 / np.sqrt(4 * pi))
    for m in range(lmax + 1):
        if m > 0:
            pmm = -np.sqrt((2 * m + 1) / (2 * m)) * sx * pmm
        phase = np.exp(1j * m * phis)
        yield (m, m), pmm * phase
        if m == lmax:
            break
        prev2 = pmm
        prev1 = np.sqrt(2 * m + 3) * x * pmm
        yield (m + 1, m), prev1 * phase
        for l in range(m + 2, lmax + 1):
            a_l = np.sqrt((4 * l * l - 1) / (l * l - m * m))
            a_l1 = np.sqrt((4 * (l - 1) ** 2 - 1) / ((l - 1) ** 2 - m * m))
            cur = a_l * (x * prev1 - prev2 / a_l1)
            yield (l, m), cur * phase
            prev2, prev1 = prev1, cur


def sph_harm_values(l: int, m: int, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Y_lm at the given angles (any sign of m)."""
    if abs(m) > l:
        raise ValueError("|m| must not exceed l")
    for (ll, mm), vals in ylm_stream(l, np.asarray(thetas, float), np.asarray(phis, float)):
        if ll == l and mm == abs(m):
            return vals if m >= 0 else (-1) ** mm * vals.conj()
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class HarmonicCoefficients:
    """Expansion coefficients B_lm of a Q-symbol, 0 <= l <= 2s, |m| <= l."""

    two_s: int
    coeffs: dict

    def __getitem__(self, key):
        return self.coeffs.get(key, 0.0 + 0.0j)


def harmonic_coefficients(samples: np.ndarray, grid: SphereQuadrature,
                          space: SpinSpace) -> HarmonicCoefficients:
    """B_lm = sqrt(4π/(2s+1)) Σ_k w_k Q(n_k) conj(Y_lm(n_k))."""
    lmax = space.two_s
    if grid.exact_degree < 2 * space.two_s:
        raise ValueError(
            f"grid exact degree {grid.exact_degree} is below the required "
            f"{2 * space.two_s}; coefficients would alias"
        )
    samples = np.asarray(samples)
    scale = np.sqrt(4 * pi / (space.two_s + 1))
    wq = grid.weights * samples
    coeffs = {}
    for (l, m), y in ylm_stream(lmax, grid.thetas, grid.phis):
        coeffs[(l, m)] = scale * np.sum(wq * y.conj())
        if m > 0:
            # conj(Y_{l,-m}) = (-1)^m Y_{lm}
            coeffs[(l, -m)] = (-1) ** m * scale * np.sum(wq * y)
    return HarmonicCoefficients(space.two_s, coeffs)


def reconstruct_q_symbol(coeffs: HarmonicCoefficients,
                         grid: SphereQuadrature) -> np.ndarray:
    """Invert harmonic_coefficients: Q(n_k) = sqrt(4π/(2s+1)) Σ B_lm Y_lm(n_k)."""
    scale = np.sqrt(4 * pi / (coeffs.two_s + 1))
    out = np.zeros(len(grid), dtype=complex)
    for (l, m), y in ylm_stream(coeffs.two_s, grid.thetas, grid.phis):
        out += coeffs[(l, m)] * y
        if m > 0:
            out += coeffs[(l, -m)] * (-1) ** m * y.conj()
    return scale * out


# --- damping factors ----------------------------------------------------------

def tau_spin_fraction(two_s: int, l: int) -> Fraction:
    """Exact damping factor (2s)!(2s+1)!/((2s-l)!(2s+1+l)!)."""
    if l < 0 or l > two_s:
        raise ValueError(f"l must lie in 0..{two_s}, got {l}")
    return Fraction(
        factorial(two_s) * factorial(two_s + 1),
        factorial(two_s - l) * factorial(two_s + 1 + l),
    )


def tau_spin(space: SpinSpace, l: int) -> float:
    """Channel eigenvalue on the degree-l harmonic sector."""
    return float(tau_spin_fraction(space.two_s, l))


def expected_spectrum(space: SpinSpace) -> np.ndarray:
    """Eigenvalue multiset {tau_l with multiplicity 2l+1}, descending."""
    values = [
        float(tau_spin_fraction(space.two_s, l))
        for l in range(space.two_s + 1)
        for _ in range(2 * l + 1)
    ]
    return np.array(sorted(values, reverse=True))


def projector_family(space: SpinSpace,
                     grid: SphereQuadrature | None = None) -> WeightedProjectorFamily:
    """Discretized coherent-state POVM as a weighted projector family."""
    if grid is None:
        grid = sphere_quadrature(space)
    return WeightedProjectorFamily(
        dim=space.dim,
        states=coherent_state_matrix(space, grid),
        weights=grid.weights,
    )
