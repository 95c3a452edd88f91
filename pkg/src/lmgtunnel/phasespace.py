"""Discrete Wigner functions and phase-space dynamics for the quasi-spin model.

States of the N = Np+1 dimensional multiplet are mapped to real
quasi-probabilities on the N x N grid of angular momentum m and discrete
angle n (theta_n = 2 pi n / N).  For a pure state |psi> = sum_k c_k |u_k>,

    rho_w(m, n) = (1/N^2) sum_{j,l} exp[2 pi i (m j + n l)/N] f(j, l),
    f(j, l)     = sum_p c*_[p+l] c_p exp[-2 pi i j (p + l/2)/N],

with every label on the symmetric range -Np/2 ... Np/2 and [p+l] wrapped
cyclically into that range.  With symmetric ranges the map is real-valued,
and sqrt(N) times the map is unitary on operator space, which makes the
inverse map and the phase-space overlap rule exact.

Time evolution composes the map with the commutator: the mapped Liouvillian
generates i d(rho_w)/dt = L rho_w, advanced here by restarting the
exponential series at every output step.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import pi

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NumericsError
from .lmg import QuasiSpinBasis, SpectrumResult

__all__ = [
    "StateCoefficients",
    "WignerFunction",
    "LiouvillianTensor",
    "EvolutionTrace",
    "wigner_from_pure",
    "wigner_from_density",
    "inverse_wigner",
    "weyl_symbol",
    "mapped_hamiltonian",
    "build_liouvillian",
    "propagate_series",
    "propagate_exact",
    "marginals",
    "overlap_probability",
    "mean_phase",
    "make_combination",
    "extract_frequency",
]


@dataclass(frozen=True)
class StateCoefficients:
    """Expansion c_k of a pure state over the J_z eigenbasis, k = -Np/2 ... Np/2."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", c)
        if c.ndim != 1 or len(c) < 3 or len(c) % 2 == 0:
            raise ValueError("coefficient vector must have odd length Np+1 >= 3")
        norm = np.sum(np.abs(c) ** 2)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: sum |c|^2 = {norm!r}")

    @property
    def dimension(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class WignerFunction:
    """Real quasi-probability over the (m, n) grid, normalized to one."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        n = v.shape[0]
        if v.ndim != 2 or v.shape != (n, n) or n % 2 == 0:
            raise ValueError("Wigner array must be square with odd dimension")
        total = v.sum()
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"Wigner function not normalized: sum = {total!r}")

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    @property
    def theta_grid(self) -> np.ndarray:
        n = self.dimension
        return 2 * pi * np.arange(-(n - 1) // 2, (n - 1) // 2 + 1) / n


@dataclass(frozen=True)
class LiouvillianTensor:
    """Rank-4 generator L(u,v,r,s) of phase-space time evolution."""

    n_particles: int
    chi: float
    values: np.ndarray

    @property
    def dimension(self) -> int:
        return self.n_particles + 1

    def as_matrix(self) -> np.ndarray:
        n = self.dimension
        return self.values.reshape(n * n, n * n)


@dataclass(frozen=True)
class EvolutionTrace:
    """Time series of phase-space observables along a propagation."""

    times: np.ndarray
    probability: np.ndarray
    mean_phase: np.ndarray
    marginal_l: np.ndarray | None = None
    marginal_phi: np.ndarray | None = None


def _labels(dim: int) -> np.ndarray:
    half = (dim - 1) // 2
    return np.arange(-half, half + 1)


@lru_cache(maxsize=16)
def _map_matrices(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """The Wigner map K on vectorized operators and its inverse N K^dagger.

    K acts as rho_w.ravel() = K @ rho.ravel().  sqrt(N) K is unitary; this is
    asserted at build time and makes the inverse exact.
    """
    n = dim
    half = (n - 1) // 2
    s = _labels(n)
    # l(p, q): unique label in the symmetric range with [p + l] = q (mod N)
    lmat = (s[None, :] - s[:, None] + half) % n - half
    x = s[:, None, None] - s[None, :, None] - lmat[None, :, :] / 2.0
    # A[m, p, q] = sum_j exp(2 pi i j (m - p - l/2) / N)
    a = np.zeros((n, n, n), dtype=complex)
    for j in s:
        a += np.exp(2j * pi * j * x / n)
    b = np.exp(2j * pi * np.multiply.outer(s, lmat) / n)  # B[nn, p, q]
    k = (a[:, None, :, :] * b[None, :, :, :]).reshape(n * n, n * n) / n**2
    kinv = n * k.conj().T
    resid = np.abs(kinv @ k - np.eye(n * n)).max()
    if resid > 1e-10:
        raise NumericsError(f"Wigner map failed unitarity check: residual {resid:.3e}")
    return k, kinv


def _as_state(state) -> StateCoefficients:
    if isinstance(state, StateCoefficients):
        return state
    return StateCoefficients(coeffs=np.asarray(state, dtype=complex))


def wigner_from_pure(state) -> WignerFunction:
    """Wigner function of a pure state, built directly from the f(j,l) sum."""
    st = _as_state(state)
    c = st.coeffs
    n = st.dimension
    s = _labels(n)
    idx = np.arange(n)
    f = np.empty((n, n), dtype=complex)  # indexed [j, l]
    for li, l in enumerate(s):
        paired = np.conj(c[(idx + l) % n]) * c  # c*_[p+l] c_p over p
        phases = np.exp(-2j * pi * np.multiply.outer(s, s + l / 2.0) / n)  # [j, p]
        f[:, li] = phases @ paired
    ph_m = np.exp(2j * pi * np.multiply.outer(s, s) / n)  # e^{2 pi i m j / N}
    vals = (ph_m @ f @ ph_m.T) / n**2
    resid = np.abs(vals.imag).max()
    if resid > 1e-12:
        raise NumericsError(f"Wigner function has imaginary residue {resid:.3e}")
    return WignerFunction(values=vals.real)


def weyl_symbol(op: np.ndarray) -> np.ndarray:
    """Apply the (linear) Wigner map to an arbitrary operator matrix."""
    op = np.asarray(op, dtype=complex)
    n = op.shape[0]
    k, _ = _map_matrices(n)
    return (k @ op.ravel()).reshape(n, n)


def wigner_from_density(rho: np.ndarray) -> WignerFunction:
    """Wigner function of a density operator (pure or mixed).

    The input must be Hermitian with unit trace and positive semidefinite
    within tolerance.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise ValueError(f"density matrix trace is {np.trace(rho)!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -1e-8:
        raise ValueError("density matrix not positive semidefinite")
    vals = weyl_symbol(rho)
    resid = np.abs(vals.imag).max()
    if resid > 1e-12:
        raise NumericsError(f"Wigner function has imaginary residue {resid:.3e}")
    return WignerFunction(values=vals.real)


def inverse_wigner(w: WignerFunction) -> np.ndarray:
    """Recover the density matrix; exact because the map is a scaled unitary."""
    n = w.dimension
    _, kinv = _map_matrices(n)
    rho = (kinv @ w.values.astype(complex).ravel()).reshape(n, n)
    return 0.5 * (rho + rho.conj().T)


def mapped_hamiltonian(n_particles: int, chi: float) -> np.ndarray:
    """Closed-form phase-space symbol h(m,n) of the model Hamiltonian."""
    QuasiSpinBasis(n_particles)
    n = n_particles + 1
    j = n_particles / 2
    s = _labels(n).astype(float)
    m = s[:, None]
    rad = np.sqrt((j + m) * (j + m + 1) * (j - m) * (j - m + 1))
    ang = np.cos(4 * pi * s[None, :] / n)
    return m + (chi / n_particles) * rad * ang


def build_liouvillian(n_particles: int, chi: float) -> LiouvillianTensor:
    """Phase-space image of the commutator: L = W [H, .] W^{-1}."""
    from .lmg import build_hamiltonian

    basis = QuasiSpinBasis(n_particles)
    h = build_hamiltonian(basis, chi).matrix
    n = basis.dimension
    k, kinv = _map_matrices(n)
    eye = np.eye(n)
    comm = np.kron(h, eye) - np.kron(eye, h.T)
    lmat = k @ comm @ kinv
    return LiouvillianTensor(n_particles=n_particles, chi=float(chi),
                             values=lmat.reshape(n, n, n, n))


def marginals(w: WignerFunction) -> tuple[np.ndarray, np.ndarray]:
    """Angular-momentum marginal L(m) and angle marginal Phi(n)."""
    l_m = w.values.sum(axis=1)
    phi_n = w.values.sum(axis=0)
    return l_m, phi_n


def overlap_probability(wi: WignerFunction, wf: WignerFunction) -> float:
    """Transition probability N sum_{m,n} wi wf, clamped to [0, 1 + 1e-8].

    The factor N makes the rule reproduce |<psi_i|psi_f>|^2 for pure states.
    """
    if wi.dimension != wf.dimension:
        raise ValueError("Wigner functions have different dimensions")
    p = wi.dimension * float(np.sum(wi.values * wf.values))
    return min(max(p, 0.0), 1.0 + 1e-8)


def mean_phase(w: WignerFunction, mode: str = "linear") -> float:
    """Average of the angle distribution.

    "linear" weighs theta_n directly (bounded inside (-pi, pi)); "circular"
    returns the argument of the resultant sum Phi(n) e^{i theta_n}.
    """
    _, phi_n = marginals(w)
    theta = w.theta_grid
    if mode == "linear":
        return float(np.sum(theta * phi_n))
    if mode == "circular":
        return float(np.angle(np.sum(phi_n * np.exp(1j * theta))))
    raise ValueError(f"unknown mean-phase mode {mode!r}")


def make_combination(spec: SpectrumResult, i: int, j: int, sign: str = "s") -> StateCoefficients:
    """Equal-weight symmetric ("s") or antisymmetric ("a") mix of two levels."""
    n = len(spec.eigenvalues)
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"level indices ({i}, {j}) out of range for {n} levels")
    if i == j:
        raise ValueError("level indices must differ")
    if sign not in ("s", "a"):
        raise ValueError(f"sign must be 's' or 'a', got {sign!r}")
    factor = 1.0 if sign == "s" else -1.0
    vec = (spec.eigenvectors[:, i] + factor * spec.eigenvectors[:, j]) / np.sqrt(2)
    return StateCoefficients(coeffs=vec.astype(complex))


def propagate_exact(state, spec: SpectrumResult, t: float) -> StateCoefficients:
    """Eigenbasis phase evolution; the oracle for the series propagator."""
    st = _as_state(state)
    if st.dimension != len(spec.eigenvalues):
        raise ValueError("state and spectrum dimensions differ")
    amps = spec.eigenvectors.T @ st.coeffs
    evolved = spec.eigenvectors @ (np.exp(-1j * spec.eigenvalues * t) * amps)
    norm = np.sum(np.abs(evolved) ** 2)
    if abs(norm - 1.0) > 1e-12:
        raise NumericsError(f"exact propagation lost normalization: {norm!r}")
    return StateCoefficients(coeffs=evolved)


def propagate_series(w0: WignerFunction, lv: LiouvillianTensor, t_final: float,
                     dt: float = 0.1, tol: float = 1e-12, kmax: int = 50,
                     record_marginals: bool = False,
                     mean_phase_mode: str = "linear") -> EvolutionTrace:
    """March the Wigner function with the restarted exponential series.

    Each step applies sum_K (-i dt)^K L^K / K! to the current function,
    truncating once the added term's max-norm drops below `tol`; the raw
    long-time series diverges numerically, restarting it every step keeps it
    convergent.  P(t) against the initial function and the mean phase are
    recorded at every step.
    """
    if dt <= 0 or tol <= 0 or t_final < 0:
        raise ValueError("need dt > 0, tol > 0, t_final >= 0")
    n = w0.dimension
    if n != lv.dimension:
        raise ValueError("Wigner function and Liouvillian dimensions differ")
    steps = int(round(t_final / dt))
    lmat = lv.as_matrix()
    w0_flat = w0.values.ravel()

    w = w0_flat.astype(complex)
    times = np.empty(steps + 1)
    prob = np.empty(steps + 1)
    phases = np.empty(steps + 1)
    marg_l = np.empty((steps + 1, n)) if record_marginals else None
    marg_phi = np.empty((steps + 1, n)) if record_marginals else None
    theta = w0.theta_grid

    for step in range(steps + 1):
        wr = w.real.reshape(n, n)
        times[step] = step * dt
        prob[step] = min(max(n * float(np.sum(w0.values * wr)), 0.0), 1.0 + 1e-8)
        phi_n = wr.sum(axis=0)
        if mean_phase_mode == "linear":
            phases[step] = np.sum(theta * phi_n)
        elif mean_phase_mode == "circular":
            phases[step] = np.angle(np.sum(phi_n * np.exp(1j * theta)))
        else:
            raise ValueError(f"unknown mean-phase mode {mean_phase_mode!r}")
        if record_marginals:
            marg_l[step] = wr.sum(axis=1)
            marg_phi[step] = phi_n
        if step == steps:
            break

        term = w
        acc = w.copy()
        for k in range(1, kmax + 1):
            term = (-1j * dt / k) * (lmat @ term)
            acc += term
            if np.abs(term).max() < tol:
                break
        else:
            raise NumericsError(
                f"series not converged within {kmax} terms at step {step + 1}; reduce dt")
        w = acc

    return EvolutionTrace(times=times, probability=prob, mean_phase=phases,
                          marginal_l=marg_l, marginal_phi=marg_phi)


def extract_frequency(trace: EvolutionTrace, min_periods: float = 2.0) -> float:
    """State-oscillation angular frequency from the P(t) trace.

    P(t) of a two-level mix follows cos^2(Delta t / 2), oscillating at the
    level splitting Delta; the Fourier peak of P - <P> is located with
    three-point parabolic interpolation, polished by maximizing the windowed
    transform magnitude, and half of it is returned.
    """
    t = trace.times
    y = trace.probability - trace.probability.mean()
    if len(t) < 8:
        raise NumericsError("trace too short for frequency extraction")
    dt_s = t[1] - t[0]
    if np.abs(np.diff(t) - dt_s).max() > 1e-9 * dt_s:
        raise NumericsError("frequency extraction needs a uniform time grid")

    windowed = y * np.hanning(len(y))
    mags = np.abs(np.fft.rfft(windowed))
    kpeak = int(np.argmax(mags[1:]) + 1)
    if 0 < kpeak < len(mags) - 1:
        a, b, c = mags[kpeak - 1], mags[kpeak], mags[kpeak + 1]
        denom = a - 2 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    else:
        shift = 0.0
    bin_width = 2 * pi / (len(y) * dt_s)
    omega_p = (kpeak + shift) * bin_width

    lo = max(omega_p - bin_width, 0.5 * bin_width)
    hi = min(omega_p + bin_width, pi / dt_s)
    tt = t - t[0]

    def neg_mag(om):
        return -abs(np.sum(windowed * np.exp(-1j * om * tt)))

    res = minimize_scalar(neg_mag, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    omega_signal = float(res.x)

    periods = omega_signal * (t[-1] - t[0]) / (2 * pi)
    if periods < min_periods:
        raise NumericsError(
            f"only {periods:.2f} oscillation periods in the trace; need >= {min_periods}")
    return omega_signal / 2
