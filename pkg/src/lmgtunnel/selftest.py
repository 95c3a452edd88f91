"""Built-in consistency suite: cross-route oracles and structural invariants.

Every check reports its tolerance and the measured residual; the suite
passes only if every residual is within tolerance.  All inputs are fixed,
so two runs print identical report bodies.
"""

from math import pi

import numpy as np

from . import gcm, lmg, phasespace

__all__ = ["run_selftest", "selftest_report"]

_SIZES = (2, 4, 10)


def _check_hamiltonian_elements():
    h = lmg.build_hamiltonian(lmg.QuasiSpinBasis(2), 1.0).matrix
    expected = np.array([[-1.0, 0.0, 0.5], [0.0, 0.0, 0.0], [0.5, 0.0, 1.0]])
    resid = np.abs(h - expected).max()
    h10 = lmg.build_hamiltonian(lmg.QuasiSpinBasis(10), 1.7).matrix
    resid = max(resid, np.abs(np.diag(h10) - np.arange(-5, 6)).max())
    resid = max(resid, np.abs(np.diag(h10, 1)).max())
    return resid, 1e-14


def _check_parity_blocks():
    resid = 0.0
    for n_p in _SIZES:
        rep = lmg.check_parity_blocks(lmg.build_hamiltonian(lmg.QuasiSpinBasis(n_p), 1.3))
        half = n_p // 2
        expected_odd = half + half % 2  # odd labels among -Np/2 ... Np/2
        expected_even = n_p + 1 - expected_odd
        resid = max(resid, abs(rep.even_dim - expected_even), abs(rep.odd_dim - expected_odd))
    return float(resid), 0.5


def _check_spectral_reflection():
    resid = 0.0
    for n_p in _SIZES:
        for chi in (0.0, 0.5, 2.5):
            spec = lmg.solve_spectrum(lmg.build_hamiltonian(lmg.QuasiSpinBasis(n_p), chi))
            resid = max(resid, lmg.check_spectral_reflection(spec))
    return resid, 1e-10


def _check_gap_normalization():
    resid = max(abs(lmg.energy_gap(lmg.QuasiSpinBasis(n_p), 0.0) - 1.0) for n_p in _SIZES)
    return resid, 1e-12


def _check_block_spectrum_union():
    h = lmg.build_hamiltonian(lmg.QuasiSpinBasis(10), 1.2)
    full = lmg.solve_spectrum(h).eigenvalues
    ev_e, ev_o = lmg.parity_block_eigenvalues(h)
    union = np.sort(np.concatenate([ev_e, ev_o]))
    return np.abs(full - union).max(), 1e-10


def _check_overlap_eigenvalues():
    resid = 0.0
    for n_p in _SIZES:
        lam = gcm.overlap_eigenvalues(n_p).values
        m = points = 4 * (n_p + 2)
        alpha = np.linspace(-pi, pi, m + 1)
        w = np.full(m + 1, 2 * pi / m)
        w[0] = w[-1] = pi / m
        for idx, mm in enumerate(range(-n_p // 2, n_p // 2 + 1)):
            quad = np.sum(w * np.cos(alpha / 2) ** n_p * np.cos(mm * alpha))
            resid = max(resid, abs(quad - lam[idx]) / lam[idx])
    return resid, 1e-10


def _check_quadrature_doubling():
    resid = 0.0
    for n_p in _SIZES:
        base = 4 * (n_p + 2)
        h1 = gcm.projected_kernel(n_p, 1.3, points=base, method="quadrature").matrix
        h2 = gcm.projected_kernel(n_p, 1.3, points=2 * base, method="quadrature").matrix
        resid = max(resid, np.abs(h1 - h2).max())
    return resid, 1e-12


def _check_projection_oracle():
    # the projected kernel is exactly isospectral to the model at coupling
    # Np*chi/(Np-1); this pins quadrature, normalization and phases
    resid = 0.0
    for n_p in _SIZES:
        for chi in (0.0, 1.2, 2.5):
            pk = gcm.projected_kernel(n_p, chi)
            vals = np.linalg.eigvalsh(pk.matrix)
            ref = lmg.solve_spectrum(lmg.build_hamiltonian(
                lmg.QuasiSpinBasis(n_p), n_p * chi / (n_p - 1))).eigenvalues
            resid = max(resid, np.abs(vals - ref).max())
    return resid, 1e-8


def _check_weyl_symbol():
    resid = 0.0
    for n_p in (4, 10):  # N = 3 wraps the pairing term across the label cycle
        for chi in (0.0, 1.0, 2.5):
            h_op = lmg.build_hamiltonian(lmg.QuasiSpinBasis(n_p), chi).matrix
            sym = phasespace.weyl_symbol(h_op)
            resid = max(resid, np.abs((n_p + 1) * sym.real
                                      - phasespace.mapped_hamiltonian(n_p, chi)).max())
            resid = max(resid, np.abs(sym.imag).max())
    return resid, 1e-10


def _check_wigner_roundtrip():
    rng = np.random.default_rng(2024)
    resid = 0.0
    for n_p in _SIZES:
        n = n_p + 1
        for _ in range(10):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            rho = a @ a.conj().T
            rho /= np.trace(rho)
            w = phasespace.wigner_from_density(rho)
            resid = max(resid, np.abs(phasespace.inverse_wigner(w) - rho).max())
    return resid, 1e-12


def _check_liouvillian():
    lv = phasespace.build_liouvillian(10, 1.2)
    lmat = lv.as_matrix()
    spec = lmg.solve_spectrum(lmg.build_hamiltonian(lmg.QuasiSpinBasis(10), 1.2))
    w = phasespace.wigner_from_pure(spec.eigenvectors[:, 0].astype(complex))
    resid = np.abs(lmat @ w.values.ravel()).max()
    resid = max(resid, np.abs(lmat.sum(axis=0)).max())
    return resid, 1e-10


def _check_propagation_oracle():
    n_p, chi = 10, 2.5
    spec = lmg.solve_spectrum(lmg.build_hamiltonian(lmg.QuasiSpinBasis(n_p), chi))
    psi0 = phasespace.make_combination(spec, 0, 1, "s")
    w0 = phasespace.wigner_from_pure(psi0)
    lv = phasespace.build_liouvillian(n_p, chi)
    trace = phasespace.propagate_series(w0, lv, 10.0, dt=0.1)
    resid = 0.0
    for step in (10, 50, 100):
        wt = phasespace.wigner_from_pure(
            phasespace.propagate_exact(psi0, spec, trace.times[step]))
        p_exact = phasespace.overlap_probability(w0, wt)
        resid = max(resid, abs(trace.probability[step] - p_exact))
    return resid, 1e-8


def _check_frequency_extraction():
    ts = np.arange(0.0, 120.0001, 0.1)
    trace = phasespace.EvolutionTrace(times=ts, probability=np.cos(0.3 * ts) ** 2,
                                      mean_phase=np.zeros_like(ts))
    return abs(phasespace.extract_frequency(trace) - 0.3), 1e-3


_CHECKS = [
    ("hamiltonian_elements", _check_hamiltonian_elements),
    ("parity_blocks", _check_parity_blocks),
    ("spectral_reflection", _check_spectral_reflection),
    ("gap_normalization", _check_gap_normalization),
    ("block_spectrum_union", _check_block_spectrum_union),
    ("overlap_eigenvalues_vs_quadrature", _check_overlap_eigenvalues),
    ("gcm_quadrature_doubling", _check_quadrature_doubling),
    ("gcm_projection_oracle_rescaled", _check_projection_oracle),
    ("weyl_symbol_closed_form", _check_weyl_symbol),
    ("wigner_roundtrip", _check_wigner_roundtrip),
    ("liouvillian_properties", _check_liouvillian),
    ("propagation_series_vs_exact", _check_propagation_oracle),
    ("frequency_extraction", _check_frequency_extraction),
]


def run_selftest():
    """Execute all checks; returns (all_passed, result rows)."""
    results = []
    for name, fn in _CHECKS:
        try:
            resid, tol = fn()
            results.append((name, tol, float(resid), resid <= tol, ""))
        except Exception as exc:  # a crashed check is a failed check
            results.append((name, float("nan"), float("nan"), False,
                            f"{type(exc).__name__}: {exc}"))
    return all(r[3] for r in results), results


def selftest_report(results) -> str:
    width = max(len(name) for name, *_ in results)
    lines = [f"{'check':<{width}}  {'tolerance':>10}  {'residual':>12}  status"]
    for name, tol, resid, ok, note in results:
        status = "ok" if ok else "FAIL"
        if note:
            status += f"  ({note})"
        lines.append(f"{name:<{width}}  {tol:>10.1e}  {resid:>12.3e}  {status}")
    return "\n".join(lines)
