"""Exact diagonalization of the quasi-spin two-level pairing model.

The model Hamiltonian, with energies measured in units of the level
splitting, is

    H = J_z + chi/(2 N_p) * (J_+^2 + J_-^2)

acting inside the maximal multiplet j = N_p/2 of N_p particles, so the
matrix is (N_p+1)-dimensional in the J_z eigenbasis.  Everything in this
module is a pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError

__all__ = [
    "QuasiSpinBasis",
    "LmgHamiltonian",
    "SpectrumResult",
    "GapCurve",
    "ParityBlocks",
    "build_hamiltonian",
    "solve_spectrum",
    "energy_gap",
    "gap_curve",
    "gap_derivatives",
    "detect_region_boundaries",
    "check_parity_blocks",
    "check_spectral_reflection",
    "gap_large_n_limit",
]


@dataclass(frozen=True)
class QuasiSpinBasis:
    """The j = N_p/2 multiplet: dimension N = N_p + 1, labels m = -j ... +j."""

    n_particles: int

    def __post_init__(self):
        n_p = self.n_particles
        if not isinstance(n_p, (int, np.integer)) or n_p < 2 or n_p % 2 != 0:
            raise ValueError(f"n_particles must be a positive even integer >= 2, got {n_p!r}")

    @property
    def dimension(self) -> int:
        return self.n_particles + 1

    @property
    def j(self) -> float:
        return self.n_particles / 2

    @property
    def m_labels(self) -> np.ndarray:
        half = self.n_particles // 2
        return np.arange(-half, half + 1)


@dataclass(frozen=True)
class LmgHamiltonian:
    basis: QuasiSpinBasis
    chi: float
    matrix: np.ndarray  # real symmetric, units of the level splitting


@dataclass(frozen=True)
class SpectrumResult:
    """Ascending eigenvalues with eigenvectors (column k) in the J_z basis."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class GapCurve:
    chi_grid: np.ndarray
    gap_values: np.ndarray


@dataclass(frozen=True)
class ParityBlocks:
    """Dimensions of the even-m and odd-m blocks of the Hamiltonian."""

    even_dim: int
    odd_dim: int


def ladder_squared_element(j: float, m: float) -> float:
    """<m+2| J_+^2 |m> with the convention J_+|j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>."""
    return np.sqrt((j * (j + 1) - m * (m + 1)) * (j * (j + 1) - (m + 1) * (m + 2)))


def build_hamiltonian(basis: QuasiSpinBasis, chi: float) -> LmgHamiltonian:
    """Assemble the model matrix in the J_z basis.

    Diagonal entries are m; the pairing term couples m <-> m+2 with strength
    chi/(2 N_p) times the J_+^2 ladder element.
    """
    n_p = basis.n_particles
    j = basis.j
    ms = basis.m_labels
    n = basis.dimension
    h = np.zeros((n, n))
    h[np.diag_indices(n)] = ms.astype(float)
    pref = chi / (2 * n_p)
    for i, m in enumerate(ms[:-2]):
        el = pref * ladder_squared_element(j, m)
        h[i + 2, i] = el
        h[i, i + 2] = el
    return LmgHamiltonian(basis=basis, chi=float(chi), matrix=h)


def _fix_eigenvector_gauge(vecs: np.ndarray) -> np.ndarray:
    # deterministic sign: largest-|.| component of each column made positive
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def solve_spectrum(h: LmgHamiltonian) -> SpectrumResult:
    """Dense symmetric diagonalization; ascending eigenvalues.

    Raises
    ------
    NumericsError
        If the eigensolver fails or the residual / orthonormality bounds
        (1e-10) are violated.
    """
    try:
        vals, vecs = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK breakdown
        raise NumericsError(f"eigensolver failed: {exc}") from exc
    vecs = _fix_eigenvector_gauge(vecs)
    resid = np.abs(h.matrix @ vecs - vecs * vals[None, :]).max()
    ortho = np.abs(vecs.T @ vecs - np.eye(len(vals))).max()
    if resid > 1e-10 or ortho > 1e-10:
        raise NumericsError(
            f"eigendecomposition out of tolerance: residual={resid:.3e}, orthonormality={ortho:.3e}")
    return SpectrumResult(eigenvalues=vals, eigenvectors=vecs)


def energy_gap(basis: QuasiSpinBasis, chi: float) -> float:
    """Gap between the two lowest levels of the full matrix (both parities)."""
    vals = solve_spectrum(build_hamiltonian(basis, chi)).eigenvalues
    return float(vals[1] - vals[0])


def gap_large_n_limit(chi: float) -> float:
    """Infinite-particle-number gap: sqrt(1 - chi^2) below the critical
    coupling |chi| = 1, zero above it."""
    return float(np.sqrt(max(1.0 - chi * chi, 0.0)))


def gap_curve(basis: QuasiSpinBasis, chi_grid) -> GapCurve:
    chi_grid = np.asarray(chi_grid, dtype=float)
    if chi_grid.ndim != 1 or chi_grid.size == 0:
        raise ValueError("chi_grid must be a non-empty 1-d array")
    if np.any(np.diff(chi_grid) <= 0):
        raise ValueError("chi_grid must be strictly ascending")
    gaps = np.array([energy_gap(basis, c) for c in chi_grid])
    return GapCurve(chi_grid=chi_grid, gap_values=gaps)


def _fd_weights(offsets, order: int) -> np.ndarray:
    """Fornberg weights for the `order`-th derivative at 0 from samples at
    `offsets` (in units of the grid step)."""
    x = np.asarray(offsets, dtype=float)
    npts = len(x)
    c = np.zeros((npts, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0]
    for i in range(1, npts):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i]
        for jj in range(i):
            c3 = x[i] - x[jj]
            c2 *= c3
            if jj == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[jj, k] = (c4 * c[jj, k] - k * c[jj, k - 1]) / c3
            c[jj, 0] = c4 * c[jj, 0] / c3
        c1 = c2
    return c[:, order]


def gap_derivatives(curve: GapCurve, order: int) -> np.ndarray:
    """Finite-difference derivative of the gap curve.

    Central stencils of second-order accuracy in the interior; matching
    one-sided stencils at the ends.  The grid must be uniform with at least
    2*order + 1 points.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    chi = curve.chi_grid
    f = curve.gap_values
    n = len(chi)
    if n < 2 * order + 1:
        raise ValueError(f"grid too coarse for order {order}: need >= {2 * order + 1} points")
    steps = np.diff(chi)
    h = steps[0]
    if np.abs(steps - h).max() > 1e-9 * max(abs(h), 1.0):
        raise ValueError("chi_grid must be uniform for finite differences")

    half = order // 2 + 1  # central half-width: 1 for d1/d2, 2 for d3
    width_central = 2 * half + 1 if order == 3 else 3
    width_edge = order + 2
    out = np.empty(n)
    w_central = _fd_weights(np.arange(-(width_central // 2), width_central // 2 + 1), order)
    lo = width_central // 2
    for i in range(n):
        if lo <= i < n - lo:
            window = f[i - lo:i + lo + 1]
            out[i] = w_central @ window
        else:
            start = min(max(i - (width_edge - 1) // 2, 0), n - width_edge)
            offs = np.arange(start, start + width_edge) - i
            out[i] = _fd_weights(offs, order) @ f[start:start + width_edge]
    return out / h**order


def detect_region_boundaries(curve: GapCurve) -> tuple[float, float]:
    """Locate the two couplings separating the three regimes of the gap curve.

    The first boundary is the interior extremum of the third derivative with
    the largest magnitude (parabolically refined); the second is the first
    zero crossing of the third derivative past it (equivalently the following
    extremum of the second derivative), linearly interpolated.  Raises
    NumericsError when either feature is not inside the grid.
    """
    chi = curve.chi_grid
    d3 = gap_derivatives(curve, 3)
    n = len(chi)
    # interior local extrema of d3, keeping clear of one-sided edge stencils
    ext = [i for i in range(3, n - 3)
           if (d3[i] - d3[i - 1]) * (d3[i + 1] - d3[i]) < 0]
    if not ext:
        raise NumericsError("features outside grid: no interior extremum of the third derivative")
    i1 = max(ext, key=lambda i: abs(d3[i]))
    a, b, c = d3[i1 - 1], d3[i1], d3[i1 + 1]
    denom = a - 2 * b + c
    shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    h = chi[1] - chi[0]
    chi1 = chi[i1] + shift * h

    cross = None
    for i in range(i1 + 1, n):
        if d3[i - 1] * d3[i] < 0:
            cross = i
            break
        if d3[i] == 0.0:
            cross = i
            break
    if cross is None:
        raise NumericsError("features outside grid: no third-derivative sign change past the first boundary")
    if d3[cross] == 0.0:
        chi2 = chi[cross]
    else:
        frac = d3[cross - 1] / (d3[cross - 1] - d3[cross])
        chi2 = chi[cross - 1] + frac * h
    return float(chi1), float(chi2)


def check_parity_blocks(h: LmgHamiltonian) -> ParityBlocks:
    """Verify the even-m / odd-m block structure of the matrix.

    All entries between blocks must be exactly zero (the pairing term only
    connects m to m +/- 2); a nonzero entry signals a construction bug.
    """
    ms = h.basis.m_labels
    even = np.where(ms % 2 == 0)[0]
    odd = np.where(ms % 2 != 0)[0]
    cross = h.matrix[np.ix_(even, odd)]
    if np.any(cross != 0.0):
        raise NumericsError(
            f"parity violated: nonzero even-odd coupling, max |entry| = {np.abs(cross).max():.3e}")
    return ParityBlocks(even_dim=len(even), odd_dim=len(odd))


def parity_block_eigenvalues(h: LmgHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of the even-m and odd-m blocks separately."""
    ms = h.basis.m_labels
    even = np.where(ms % 2 == 0)[0]
    odd = np.where(ms % 2 != 0)[0]
    ev_e = np.linalg.eigvalsh(h.matrix[np.ix_(even, even)])
    ev_o = np.linalg.eigvalsh(h.matrix[np.ix_(odd, odd)])
    return ev_e, ev_o


def check_spectral_reflection(spec: SpectrumResult, tol: float = 1e-10) -> float:
    """Largest violation of the E_k = -E_{N-1-k} symmetry of the spectrum.

    The model anticommutes with a rotation of the quantization frame, so the
    spectrum is symmetric about zero and the middle level of the odd-sized
    multiplet sits at zero.
    """
    vals = spec.eigenvalues
    asym = float(np.abs(vals + vals[::-1]).max())
    middle = float(abs(vals[len(vals) // 2]))
    if middle > tol:
        raise NumericsError(f"middle eigenvalue {middle:.3e} not zero within {tol:.1e}")
    return asym
