"""Dataset builders behind the CLI subcommands.

Each builder is a pure function of the run configuration and returns the
figure datasets it produced; emission to disk is separate.  Chi points are
independent, so sweeps can fan out over a process pool sized by the
LMGTUNNEL_WORKERS environment variable (default: serial); rows are ordered
by (chi, secondary index) regardless of scheduling.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from math import ceil, pi

import numpy as np

from . import gcm, lmg, phasespace
from .config import RunConfig
from .datasets import FigureDataset
from .errors import NumericsError

__all__ = ["cmd_spectrum", "cmd_gap", "cmd_potential", "cmd_evolve", "worker_count"]

# hard ceiling on the internally extended trace used for frequency metadata
_MAX_FREQ_STEPS = 200_000


def worker_count() -> int:
    raw = os.environ.get("LMGTUNNEL_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"LMGTUNNEL_WORKERS must be an integer, got {raw!r}") from None


def _pool_map(fn, items):
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _eigenvalues_at(n_particles: int, chi: float) -> np.ndarray:
    basis = lmg.QuasiSpinBasis(n_particles)
    return lmg.solve_spectrum(lmg.build_hamiltonian(basis, chi)).eigenvalues


def cmd_spectrum(config: RunConfig) -> list:
    """All eigenvalues on the chi grid; columns chi, level_index, energy."""
    config.validate()
    grid = config.chi_grid()
    spectra = _pool_map(partial(_eigenvalues_at, config.n_particles), grid)
    rows = []
    for chi, vals in zip(grid, spectra):
        for level, energy in enumerate(vals):
            rows.append((float(chi), level, float(energy)))
    ds = FigureDataset(figure_id=1, columns=("chi", "level_index", "energy"),
                       rows=rows, config_echo=config.echo())
    return [ds]


def _gap_at(n_particles: int, chi: float) -> float:
    return lmg.energy_gap(lmg.QuasiSpinBasis(n_particles), chi)


def cmd_gap(config: RunConfig) -> list:
    """Gap curve plus its first three derivatives and the detected region
    boundaries; emitted as the gap dataset and the derivative dataset."""
    config.validate()
    grid = config.chi_grid()
    gaps = np.array(_pool_map(partial(_gap_at, config.n_particles), grid))
    curve = lmg.GapCurve(chi_grid=grid, gap_values=gaps)
    d1 = lmg.gap_derivatives(curve, 1)
    d2 = lmg.gap_derivatives(curve, 2)
    d3 = lmg.gap_derivatives(curve, 3)
    b1, b2 = lmg.detect_region_boundaries(curve)
    records = [("boundaries", {"chi1": b1, "chi2": b2})]
    fig2 = FigureDataset(figure_id=2, columns=("chi", "gap"),
                         rows=[(float(c), float(g)) for c, g in zip(grid, gaps)],
                         records=list(records), config_echo=config.echo())
    fig3 = FigureDataset(figure_id=3, columns=("chi", "d1", "d2", "d3"),
                         rows=[(float(c), float(a), float(b), float(e))
                               for c, a, b, e in zip(grid, d1, d2, d3)],
                         records=list(records), config_echo=config.echo())
    return [fig2, fig3]


def _potential_at(n_particles, phi_grid, chi):
    curve = gcm.extract_potential(n_particles, chi, phi_grid)
    vals = _eigenvalues_at(n_particles, chi)
    return curve, vals


def cmd_potential(config: RunConfig, chi_list=None) -> list:
    """Family of collective potentials V(phi) with the two lowest levels
    recorded per coupling for the overlay."""
    config.validate()
    chis = tuple(chi_list) if chi_list is not None else config.chi_list
    phi_grid = config.phi_grid()
    results = _pool_map(partial(_potential_at, config.n_particles, phi_grid), chis)
    rows = []
    records = []
    for chi, (curve, vals) in zip(chis, results):
        records.append(("levels", {"chi": chi, "E0": float(vals[0]), "E1": float(vals[1])}))
        for phi, v in zip(curve.phi_grid, curve.values):
            rows.append((float(chi), float(phi), float(v)))
    ds = FigureDataset(figure_id=4, columns=("chi", "phi", "V"),
                       rows=rows, records=records, config_echo=config.echo())
    return [ds]


def _evolve_at(config: RunConfig, chi: float):
    basis = lmg.QuasiSpinBasis(config.n_particles)
    spec = lmg.solve_spectrum(lmg.build_hamiltonian(basis, chi))
    delta = float(spec.eigenvalues[1] - spec.eigenvalues[0])
    state = phasespace.make_combination(spec, config.level_i, config.level_j, config.sign)
    w0 = phasespace.wigner_from_pure(state)
    lv = phasespace.build_liouvillian(config.n_particles, chi)

    # P(t) oscillates at the splitting of the chosen levels; extend the
    # internal trace when the configured window holds fewer than two periods
    split = abs(float(spec.eigenvalues[config.level_j] - spec.eigenvalues[config.level_i]))
    steps = config.steps
    if split > 0:
        needed = ceil(2.2 * (2 * pi / split) / config.dt)
        steps = min(max(steps, needed), _MAX_FREQ_STEPS)
    trace = phasespace.propagate_series(
        w0, lv, steps * config.dt, dt=config.dt, tol=config.series_tol,
        mean_phase_mode=config.mean_phase)
    try:
        omega = phasespace.extract_frequency(trace)
    except NumericsError:
        omega = float("nan")
    return trace, omega, delta


def cmd_evolve(config: RunConfig, chi_list=None) -> list:
    """Symmetric/antisymmetric-combination survival probability and mean
    phase versus time, with the extracted oscillation frequency per coupling."""
    config.validate()
    chis = tuple(chi_list) if chi_list is not None else config.chi_list
    results = _pool_map(partial(_evolve_at, config), chis)
    rows_p = []
    rows_phi = []
    records = []
    keep = config.steps + 1
    for chi, (trace, omega, delta) in zip(chis, results):
        records.append(("frequency", {"chi": chi, "omega": omega,
                                      "delta_half": delta / 2}))
        for t, p, mp in zip(trace.times[:keep], trace.probability[:keep],
                            trace.mean_phase[:keep]):
            rows_p.append((float(chi), float(t), float(p)))
            rows_phi.append((float(chi), float(t), float(mp)))
    fig5 = FigureDataset(figure_id=5, columns=("chi", "t", "P"),
                         rows=rows_p, records=list(records), config_echo=config.echo())
    fig6 = FigureDataset(figure_id=6, columns=("chi", "t", "mean_phase"),
                         rows=rows_phi, records=list(records), config_echo=config.echo())
    return [fig5, fig6]
