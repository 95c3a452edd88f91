import numpy as np
import pytest

from lmgtunnel import (
    NumericsError,
    QuasiSpinBasis,
    build_hamiltonian,
    check_parity_blocks,
    check_spectral_reflection,
    detect_region_boundaries,
    energy_gap,
    gap_curve,
    gap_derivatives,
    gap_large_n_limit,
    solve_spectrum,
)
from lmgtunnel.lmg import GapCurve, parity_block_eigenvalues


def test_basis_validation():
    b = QuasiSpinBasis(10)
    assert b.dimension == 11
    assert b.j == 5.0
    assert list(b.m_labels) == list(range(-5, 6))
    for bad in (0, -2, 3, 11):
        with pytest.raises(ValueError):
            QuasiSpinBasis(bad)


def test_hamiltonian_np2_chi0_is_jz():
    h = build_hamiltonian(QuasiSpinBasis(2), 0.0)
    assert np.array_equal(h.matrix, np.diag([-1.0, 0.0, 1.0]))


def test_hamiltonian_np2_chi1_offdiagonal():
    # J_+^2 |m=-1> = 2 |m=+1>, prefactor chi/(2 N_p) = 1/4, element = 1/2
    h = build_hamiltonian(QuasiSpinBasis(2), 1.0)
    expected = np.array([[-1.0, 0.0, 0.5],
                         [0.0, 0.0, 0.0],
                         [0.5, 0.0, 1.0]])
    assert np.array_equal(h.matrix, expected)


@pytest.mark.parametrize("chi", [0.3, 1.0, 2.7])
def test_hamiltonian_structure(chi):
    basis = QuasiSpinBasis(10)
    h = build_hamiltonian(basis, chi).matrix
    assert np.array_equal(h, h.T)
    # only |dm| in {0, 2} entries may be nonzero; diagonal is exactly m
    assert np.array_equal(np.diag(h), basis.m_labels.astype(float))
    for k in (1, 3, 4, 5, 6, 7, 8, 9, 10):
        assert np.all(np.diag(h, k) == 0.0), f"offset {k} not empty"


def test_spectrum_np10_chi0():
    spec = solve_spectrum(build_hamiltonian(QuasiSpinBasis(10), 0.0))
    assert np.allclose(spec.eigenvalues, np.arange(-5, 6), atol=1e-12)


def test_spectrum_np2_chi1():
    # odd-m block ((-1, 1/2), (1/2, 1)) plus the decoupled m=0 level
    spec = solve_spectrum(build_hamiltonian(QuasiSpinBasis(2), 1.0))
    expected = np.array([-np.sqrt(5) / 2, 0.0, np.sqrt(5) / 2])
    assert np.abs(spec.eigenvalues - expected).max() < 1e-12


def test_spectrum_invariants():
    h = build_hamiltonian(QuasiSpinBasis(10), 1.7)
    spec = solve_spectrum(h)
    n = len(spec.eigenvalues)
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    gram = spec.eigenvectors.T @ spec.eigenvectors
    assert np.abs(gram - np.eye(n)).max() < 1e-10
    resid = h.matrix @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues[None, :]
    assert np.abs(resid).max() < 1e-10


def test_spectrum_pairwise_reflection_np10_chi25():
    ev = solve_spectrum(build_hamiltonian(QuasiSpinBasis(10), 2.5)).eigenvalues
    assert abs(ev[0] + ev[10]) < 1e-10
    assert abs(ev[1] + ev[9]) < 1e-10


def test_energy_gap_values():
    assert energy_gap(QuasiSpinBasis(10), 0.0) == pytest.approx(1.0, abs=1e-12)
    assert energy_gap(QuasiSpinBasis(2), 1.0) == pytest.approx(np.sqrt(5) / 2, abs=1e-12)
    # thermodynamic-limit estimate sqrt(1 - 0.36) = 0.8 within 2%
    assert energy_gap(QuasiSpinBasis(500), 0.6) == pytest.approx(0.8, rel=0.02)


def test_gap_np10_chi25_frozen():
    # Direct 11x11 diagonalization gives 0.163326; the near-degenerate
    # tunneling doublet is well split from Delta(0) = 1.
    assert energy_gap(QuasiSpinBasis(10), 2.5) == pytest.approx(0.1633259094, abs=1e-9)


def test_gap_limit_convergence_chi_half():
    errs = [abs(energy_gap(QuasiSpinBasis(n), 0.5) - np.sqrt(0.75))
            for n in (50, 100, 200, 400)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_gap_curve_basics():
    basis = QuasiSpinBasis(10)
    single = gap_curve(basis, [0.0])
    assert single.gap_values[0] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        gap_curve(basis, [1.0, 0.5])


def test_gap_curve_monotone_np10():
    basis = QuasiSpinBasis(10)
    grid = np.arange(0.0, 3.0 + 1e-12, 0.01)
    curve = gap_curve(basis, grid)
    assert np.all(np.diff(curve.gap_values) <= 1e-12)


def _synthetic_curve(fn, lo=0.0, hi=3.0, step=0.01):
    grid = np.arange(lo, hi + step / 2, step)
    return GapCurve(chi_grid=grid, gap_values=fn(grid))


def test_derivatives_linear_and_constant():
    lin = _synthetic_curve(lambda x: 2.5 * x - 1.0)
    d1 = gap_derivatives(lin, 1)
    assert np.abs(d1 - 2.5).max() < 1e-8
    const = _synthetic_curve(lambda x: np.full_like(x, 0.7))
    assert np.abs(gap_derivatives(const, 2)).max() < 1e-8


def test_derivatives_polynomial_exact():
    # order-2 stencils: d1 exact on quadratics, d2/d3 exact on cubics
    quad = _synthetic_curve(lambda x: x**2 - 3 * x)
    g = quad.chi_grid
    assert np.abs(gap_derivatives(quad, 1) - (2 * g - 3)).max() < 1e-8
    cub = _synthetic_curve(lambda x: x**3 - 2 * x**2 + x)
    g = cub.chi_grid
    assert np.abs(gap_derivatives(cub, 2) - (6 * g - 4)).max() < 1e-6
    assert np.abs(gap_derivatives(cub, 3) - 6.0).max() < 1e-4


def test_derivatives_gap_curve_nonpositive_slope():
    basis = QuasiSpinBasis(10)
    curve = gap_curve(basis, np.arange(0.0, 3.0 + 1e-12, 0.01))
    d1 = gap_derivatives(curve, 1)
    # Delta is even in chi so d1(0) = 0 up to truncation error
    assert np.all(d1 <= 1e-6)


def test_derivatives_errors():
    short = GapCurve(chi_grid=np.array([0.0, 0.1, 0.2]), gap_values=np.zeros(3))
    with pytest.raises(ValueError):
        gap_derivatives(short, 3)
    uneven = GapCurve(chi_grid=np.array([0.0, 0.1, 0.25, 0.4, 0.5, 0.6, 0.7]),
                      gap_values=np.zeros(7))
    with pytest.raises(ValueError):
        gap_derivatives(uneven, 1)
    ok = _synthetic_curve(lambda x: x)
    with pytest.raises(ValueError):
        gap_derivatives(ok, 4)


def test_region_boundaries_np10():
    basis = QuasiSpinBasis(10)
    curve = gap_curve(basis, np.arange(0.0, 3.0 + 1e-12, 0.005))
    b1, b2 = detect_region_boundaries(curve)
    assert b1 < b2
    assert b1 == pytest.approx(1.2, abs=0.15)
    assert b2 == pytest.approx(1.8, abs=0.15)


def test_region_boundaries_degenerate_input():
    # a curve with a single inflection has no third-derivative extremum
    cub = _synthetic_curve(lambda x: (x - 1.5)**3)
    with pytest.raises(NumericsError):
        detect_region_boundaries(cub)


def test_region_boundaries_grid_too_short():
    basis = QuasiSpinBasis(10)
    curve = gap_curve(basis, np.arange(0.0, 1.0 + 1e-12, 0.005))
    with pytest.raises(NumericsError):
        detect_region_boundaries(curve)


def test_parity_blocks_dimensions():
    # m in {-5..5}: five even labels, six odd ones
    rep10 = check_parity_blocks(build_hamiltonian(QuasiSpinBasis(10), 1.0))
    assert (rep10.even_dim, rep10.odd_dim) == (5, 6)
    rep2 = check_parity_blocks(build_hamiltonian(QuasiSpinBasis(2), 0.7))
    assert (rep2.even_dim, rep2.odd_dim) == (1, 2)


@pytest.mark.parametrize("chi", [0.0, 0.9, 1.8, 3.0])
def test_parity_blocks_chi_independent(chi):
    rep = check_parity_blocks(build_hamiltonian(QuasiSpinBasis(8), chi))
    assert (rep.even_dim, rep.odd_dim) == (5, 4)


def test_parity_blocks_detects_violation():
    h = build_hamiltonian(QuasiSpinBasis(4), 1.0)
    bad = h.matrix.copy()
    bad[0, 1] = bad[1, 0] = 1e-14  # even-odd coupling, construction bug
    with pytest.raises(NumericsError):
        check_parity_blocks(type(h)(basis=h.basis, chi=h.chi, matrix=bad))


def test_block_union_equals_full_spectrum():
    h = build_hamiltonian(QuasiSpinBasis(10), 1.2)
    full = solve_spectrum(h).eigenvalues
    ev_e, ev_o = parity_block_eigenvalues(h)
    union = np.sort(np.concatenate([ev_e, ev_o]))
    assert np.abs(full - union).max() < 1e-10


def test_spectral_reflection():
    spec = solve_spectrum(build_hamiltonian(QuasiSpinBasis(10), 1.5))
    assert check_spectral_reflection(spec) < 1e-10
    spec2 = solve_spectrum(build_hamiltonian(QuasiSpinBasis(2), 1.0))
    assert abs(spec2.eigenvalues[1]) < 1e-12
    spec0 = solve_spectrum(build_hamiltonian(QuasiSpinBasis(10), 0.0))
    assert abs(spec0.eigenvalues[5]) < 1e-12


@pytest.mark.parametrize("n_p", [2, 6, 12, 20])
@pytest.mark.parametrize("chi", [0.0, 0.7, 1.3, 2.1, 3.0])
def test_reflection_property_sweep(n_p, chi):
    spec = solve_spectrum(build_hamiltonian(QuasiSpinBasis(n_p), chi))
    assert check_spectral_reflection(spec) < 1e-10


def test_gap_large_n_limit_formula():
    assert gap_large_n_limit(0.0) == 1.0
    assert gap_large_n_limit(0.6) == pytest.approx(0.8, abs=1e-15)
    assert gap_large_n_limit(1.7) == 0.0
