"""Quasi-spin (LMG) model toolkit: exact spectra, angle-variable collective
potential via generator-coordinate projection, and spin-tunneling dynamics
through discrete Wigner functions on a finite phase space."""

__version__ = "0.1.0"

from .errors import NumericsError
from .lmg import (
    GapCurve,
    LmgHamiltonian,
    ParityBlocks,
    QuasiSpinBasis,
    SpectrumResult,
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
from .gcm import (
    AngleKernel,
    OverlapEigenvalues,
    PotentialCurve,
    ProjectedKernel,
    angle_kernel,
    coherent_overlap,
    critical_chi,
    energy_kernel,
    extract_potential,
    overlap_eigenvalues,
    potential_large_n,
    projected_kernel,
)
from .phasespace import (
    EvolutionTrace,
    LiouvillianTensor,
    StateCoefficients,
    WignerFunction,
    build_liouvillian,
    extract_frequency,
    inverse_wigner,
    make_combination,
    mapped_hamiltonian,
    marginals,
    mean_phase,
    overlap_probability,
    propagate_exact,
    propagate_series,
    weyl_symbol,
    wigner_from_density,
    wigner_from_pure,
)

__all__ = [
    "NumericsError",
    "__version__",
    # exact model
    "QuasiSpinBasis", "LmgHamiltonian", "SpectrumResult", "GapCurve", "ParityBlocks",
    "build_hamiltonian", "solve_spectrum", "energy_gap", "gap_curve",
    "gap_derivatives", "detect_region_boundaries", "check_parity_blocks",
    "check_spectral_reflection", "gap_large_n_limit",
    # collective potential
    "OverlapEigenvalues", "ProjectedKernel", "AngleKernel", "PotentialCurve",
    "coherent_overlap", "overlap_eigenvalues", "energy_kernel", "projected_kernel",
    "angle_kernel", "extract_potential", "potential_large_n", "critical_chi",
    # phase space
    "StateCoefficients", "WignerFunction", "LiouvillianTensor", "EvolutionTrace",
    "wigner_from_pure", "wigner_from_density", "inverse_wigner", "weyl_symbol",
    "mapped_hamiltonian", "build_liouvillian", "propagate_series", "propagate_exact",
    "marginals", "overlap_probability", "mean_phase", "make_combination",
    "extract_frequency",
]
