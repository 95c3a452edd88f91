"""Generator-coordinate chain for the quasi-spin model.

Spin-coherent states tipped by a real angle serve as generator states.  The
overlap kernel cos^Np((a'-a)/2) is diagonalized by Fourier modes with
positive eigenvalues lambda_m; projecting the energy kernel onto that
orthonormal basis gives a finite Hermitian matrix H(m,m'), from which a
discrete-angle representation and an angle-variable collective potential
V(phi) follow.

The energy kernel uses the multiplied-out form

    E(phi, theta) = -(Np/2) [ cos(phi) c^(Np-1)
                              + (chi/2) (c^(Np-2) (1 + sin^2(phi)) - c^Np) ]

with c = cos(theta/2), which is finite at theta = +/-pi for Np >= 2.

Conditioning note: the raw double quadrature divides exponentially small
integrals by exponentially small lambda's near |m| = Np/2, amplifying
roundoff by about 2^Np; in double precision this stays below 1e-10 only up
to Np ~ 16.  Beyond that the same integrals are evaluated in closed form
("stable" route); both routes agree to 1e-10 wherever the quadrature is
well conditioned.
"""

from dataclasses import dataclass
from math import lgamma, log, pi

import numpy as np

from .errors import NumericsError
from .lmg import QuasiSpinBasis

__all__ = [
    "OverlapEigenvalues",
    "ProjectedKernel",
    "AngleKernel",
    "PotentialCurve",
    "coherent_overlap",
    "overlap_eigenvalues",
    "energy_kernel",
    "projected_kernel",
    "angle_kernel",
    "extract_potential",
    "potential_large_n",
    "critical_chi",
]

# quadrature is exact once intervals exceed the trig-polynomial degree Np+2;
# beyond ~16 particles the lambda normalization amplifies roundoff too much
_QUADRATURE_NP_LIMIT = 16


@dataclass(frozen=True)
class OverlapEigenvalues:
    """Fourier spectrum of the overlap kernel, indexed by m = -Np/2 ... Np/2."""

    n_particles: int
    values: np.ndarray

    @property
    def m_labels(self) -> np.ndarray:
        half = self.n_particles // 2
        return np.arange(-half, half + 1)


@dataclass(frozen=True)
class ProjectedKernel:
    """Energy kernel projected onto the orthonormal collective basis."""

    basis: QuasiSpinBasis
    chi: float
    matrix: np.ndarray  # Hermitian, (Np+1) x (Np+1)


@dataclass(frozen=True)
class AngleKernel:
    matrix: np.ndarray
    theta_grid: np.ndarray


@dataclass(frozen=True)
class PotentialCurve:
    phi_grid: np.ndarray
    values: np.ndarray  # V(phi), units of the level splitting


def coherent_overlap(alpha_prime: float, alpha: float, n_particles: int) -> float:
    """<a'|a> = cos^Np((a' - a)/2) for the tipped spin-coherent states."""
    QuasiSpinBasis(n_particles)
    return np.cos((alpha_prime - alpha) / 2) ** n_particles


def overlap_eigenvalues(n_particles: int) -> OverlapEigenvalues:
    """Closed-form eigenvalues 2 pi Np! / (2^Np (Np/2+m)! (Np/2-m)!).

    Evaluated through log-gamma so arbitrary particle numbers stay finite.
    """
    basis = QuasiSpinBasis(n_particles)
    half = n_particles // 2
    ms = np.arange(-half, half + 1)
    logs = (log(2 * pi) + lgamma(n_particles + 1) - n_particles * log(2)
            - np.array([lgamma(half + m + 1) + lgamma(half - m + 1) for m in ms]))
    return OverlapEigenvalues(n_particles=basis.n_particles, values=np.exp(logs))


def energy_kernel(phi, theta, n_particles: int, chi: float):
    """Coherent-state energy kernel E(phi, theta) in the multiplied-out form."""
    QuasiSpinBasis(n_particles)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    eps = 1e-12
    if np.any(np.abs(phi) > pi + eps) or np.any(np.abs(theta) > pi + eps):
        raise ValueError("phi and theta must lie in [-pi, pi]")
    c = np.cos(theta / 2)
    val = -(n_particles / 2) * (
        np.cos(phi) * c ** (n_particles - 1)
        + (chi / 2) * (c ** (n_particles - 2) * (1 + np.sin(phi) ** 2) - c ** n_particles))
    return val if val.ndim else float(val)


def _projected_kernel_quadrature(n_particles: int, chi: float, points: int) -> np.ndarray:
    half = n_particles // 2
    n = n_particles + 1
    m = points
    phi = np.linspace(-pi, pi, m + 1)
    theta = np.linspace(-pi, pi, m + 1)
    w = np.full(m + 1, 2 * pi / m)
    w[0] = w[-1] = pi / m
    e_grid = energy_kernel(phi[:, None], theta[None, :], n_particles, chi)

    span = np.arange(-2 * half, 2 * half + 1)  # holds both m'+m and m'-m
    theta_phases = np.exp(-0.5j * np.outer(span, theta)) * w[None, :]
    phi_phases = np.exp(1j * np.outer(span, phi)) * w[None, :]
    # T[u, r] = sum_{a,b} w_a w_b e^{i phi_a r} e^{-i theta_b u / 2} E(phi_a, theta_b)
    t = (theta_phases @ e_grid.T) @ phi_phases.T

    lam = overlap_eigenvalues(n_particles).values
    ms = np.arange(-half, half + 1)
    uu = (ms[:, None] + ms[None, :]) + 2 * half
    rr = (ms[None, :] - ms[:, None]) + 2 * half
    norm = 2 * pi * np.sqrt(np.outer(lam, lam))
    return t[uu, rr] / norm


def _projected_kernel_stable(n_particles: int, chi: float) -> np.ndarray:
    # same integrals reduced in closed form (binomial theta-integrals and
    # exact Fourier phi-integrals), well conditioned for any Np
    j = n_particles / 2
    half = n_particles // 2
    n = n_particles + 1
    ms = np.arange(-half, half + 1).astype(float)
    h = np.zeros((n, n), dtype=complex)
    h[np.diag_indices(n)] = chi * (n_particles / 4
                                   - 1.5 * (j ** 2 - ms ** 2) / (n_particles - 1))
    for i, m in enumerate(ms[:-1]):
        el = -0.5 * np.sqrt(j * (j + 1) - m * (m + 1))
        h[i, i + 1] = h[i + 1, i] = el
    for i, m in enumerate(ms[:-2]):
        el = chi / (4 * (n_particles - 1)) * np.sqrt(
            (j * (j + 1) - m * (m + 1)) * (j * (j + 1) - (m + 1) * (m + 2)))
        h[i, i + 2] = h[i + 2, i] = el
    return h


def projected_kernel(n_particles: int, chi: float, points: int | None = None,
                     method: str = "auto") -> ProjectedKernel:
    """Project the energy kernel onto the collective basis.

    Parameters
    ----------
    points : int, optional
        Trapezoid intervals per axis for the quadrature route.  Defaults to
        4*(Np+2); the rule is exact (the integrand is a trigonometric
        polynomial of degree <= Np+2) as long as points >= Np+3.
    method : {"auto", "quadrature", "stable"}
        "auto" picks the quadrature up to Np = 16 and the closed-form
        evaluation of the same integrals beyond.
    """
    basis = QuasiSpinBasis(n_particles)
    if method == "auto":
        method = "quadrature" if n_particles <= _QUADRATURE_NP_LIMIT else "stable"
    if method == "stable":
        mat = _projected_kernel_stable(n_particles, chi)
    elif method == "quadrature":
        if points is None:
            points = 4 * (n_particles + 2)
        if points < n_particles + 3:
            raise NumericsError(
                f"quadrature resolution below exactness threshold: "
                f"{points} < {n_particles + 3} intervals")
        mat = _projected_kernel_quadrature(n_particles, chi, points)
    else:
        raise ValueError(f"unknown method {method!r}")
    herm = np.abs(mat - mat.conj().T).max()
    if herm > 1e-10:
        raise NumericsError(f"projected kernel not Hermitian: residual {herm:.3e}")
    return ProjectedKernel(basis=basis, chi=float(chi), matrix=mat)


def angle_kernel(pk: ProjectedKernel) -> AngleKernel:
    """Unitary discrete Fourier transform to angle labels theta_k = 2 pi k / N."""
    n = pk.basis.dimension
    ms = pk.basis.m_labels
    ks = np.arange(-(n - 1) // 2, (n - 1) // 2 + 1)
    theta_grid = 2 * pi * ks / n
    f = np.exp(1j * np.outer(theta_grid, ms)) / np.sqrt(n)
    return AngleKernel(matrix=f @ pk.matrix @ f.conj().T, theta_grid=theta_grid)


def _angle_average_factor(n: int, s: int) -> float:
    # (1/N) sum_k exp(i pi k s / N) over k = -(N-1)/2 ... (N-1)/2
    if s == 0:
        return 1.0
    return float(np.sin(pi * s / 2) / (n * np.sin(pi * s / (2 * n))))


def extract_potential(n_particles: int, chi: float, phi_grid=None,
                      method: str = "auto") -> PotentialCurve:
    """Angle-variable collective potential (zeroth moment, returned real).

    V(phi) = sum_{m,m'} e^{i phi (m - m')} H(m,m') D(m+m') where D averages
    the discrete angle differences over the N-point grid.
    """
    pk = projected_kernel(n_particles, chi, method=method)
    n = pk.basis.dimension
    ms = pk.basis.m_labels
    if phi_grid is None:
        phi_grid = np.linspace(-pi, pi, 8 * n + 1)
    phi_grid = np.asarray(phi_grid, dtype=float)
    if np.any(np.abs(phi_grid) > pi + 1e-12):
        raise ValueError("phi_grid must lie within [-pi, pi]")

    # collapse anti-diagonals: R(r) = sum over pairs with m - m' = r
    half = n_particles // 2
    r_span = np.arange(-2 * half, 2 * half + 1)
    r_coeff = np.zeros(len(r_span), dtype=complex)
    for i, m in enumerate(ms):
        for k, mp in enumerate(ms):
            r_coeff[(m - mp) + 2 * half] += pk.matrix[i, k] * _angle_average_factor(n, m + mp)
    vals = np.exp(1j * np.outer(phi_grid, r_span)) @ r_coeff
    resid = np.abs(vals.imag).max()
    if resid > 1e-10:
        raise NumericsError(f"potential has imaginary residue {resid:.3e}")
    return PotentialCurve(phi_grid=phi_grid, values=vals.real)


def potential_large_n(phi, n_particles: int, chi: float):
    """Large-particle-number closed form of the collective potential."""
    phi = np.asarray(phi, dtype=float)
    val = (-(n_particles - 1) / 2 * np.cos(phi)
           - chi * (n_particles + 3) / 4 * np.sin(phi) ** 2)
    return val if val.ndim else float(val)


def critical_chi(n_particles: int, tol: float = 1e-3, search=(0.0, 3.0),
                 method: str = "auto") -> float:
    """Coupling where the potential's curvature at phi = 0 changes sign.

    Bisection on the discrete second difference of V at phi = 0 with step
    pi/(4N); raises NumericsError when the search interval brackets no sign
    change.
    """
    n = n_particles + 1
    step = pi / (4 * n)

    def curvature(chi_val: float) -> float:
        v = extract_potential(n_particles, chi_val, [-step, 0.0, step], method=method).values
        return float(v[0] - 2 * v[1] + v[2])

    lo, hi = search
    c_lo, c_hi = curvature(lo), curvature(hi)
    if c_lo == 0.0:
        return float(lo)
    if np.sign(c_lo) == np.sign(c_hi):
        raise NumericsError(
            f"no curvature sign change in [{lo}, {hi}]: c({lo}) = {c_lo:.3e}, c({hi}) = {c_hi:.3e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        c_mid = curvature(mid)
        if c_mid == 0.0:
            return float(mid)
        if np.sign(c_mid) == np.sign(c_lo):
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))
