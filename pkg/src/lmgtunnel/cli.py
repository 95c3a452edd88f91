"""Command-line front end.

Subcommands: spectrum, gap, potential, evolve, selftest.  Exit status is 0
on success, 1 on usage/configuration errors, 2 on numerical failures.
"""

import argparse
import sys
from dataclasses import replace

from . import __version__
from .commands import cmd_evolve, cmd_gap, cmd_potential, cmd_spectrum
from .config import RunConfig, load_config_file
from .datasets import write_dataset
from .errors import NumericsError
from .selftest import run_selftest, selftest_report

__all__ = ["main", "build_parser"]

_FLAG_FIELDS = {
    "np": "n_particles",
    "chi_start": "chi_start",
    "chi_stop": "chi_stop",
    "chi_step": "chi_step",
    "phi_points": "phi_points",
    "dt": "dt",
    "steps": "steps",
    "sign": "sign",
    "mean_phase": "mean_phase",
    "tol": "series_tol",
    "out": "out_dir",
}


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--np", type=int, help="particle number (even)")
    sub.add_argument("--chi-start", type=float, help="sweep start")
    sub.add_argument("--chi-stop", type=float, help="sweep stop")
    sub.add_argument("--chi-step", type=float, help="sweep step")
    sub.add_argument("--chi-list", type=str,
                     help="comma-separated couplings for potential/evolve")
    sub.add_argument("--phi-points", type=int, help="points of the angle grid")
    sub.add_argument("--dt", type=float, help="time step")
    sub.add_argument("--steps", type=int, help="number of time steps")
    sub.add_argument("--levels", type=int, nargs=2, metavar=("I", "J"),
                     help="level indices for the combination")
    sub.add_argument("--sign", choices=("s", "a"), help="symmetric or antisymmetric")
    sub.add_argument("--mean-phase", choices=("linear", "circular"),
                     help="phase-average convention")
    sub.add_argument("--tol", type=float, help="series truncation tolerance")
    sub.add_argument("--out", type=str, help="output directory")
    sub.add_argument("--config", type=str, help="flat key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmg-tunnel",
        description="Quasi-spin model spectra, collective potentials and "
                    "phase-space tunneling dynamics")
    parser.add_argument("--version", action="version", version=f"lmg-tunnel {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, doc in (("spectrum", "eigenvalues over the coupling sweep"),
                      ("gap", "gap curve, derivatives and region boundaries"),
                      ("potential", "collective potential family"),
                      ("evolve", "time evolution of the level combination"),
                      ("selftest", "run the built-in consistency suite")):
        sub = subs.add_parser(name, help=doc)
        if name != "selftest":
            _add_common(sub)
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        config = load_config_file(args.config, base=config)
    overrides = {}
    for flag, fname in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[fname] = value
    if getattr(args, "chi_list", None) is not None:
        parts = [p for p in args.chi_list.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError("--chi-list needs at least one value")
        overrides["chi_list"] = tuple(float(p) for p in parts)
    if getattr(args, "levels", None) is not None:
        overrides["level_i"], overrides["level_j"] = args.levels
    return replace(config, **overrides).validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses status 2 for usage errors
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1

    if args.command == "selftest":
        passed, results = run_selftest()
        print(selftest_report(results))
        if passed:
            print("selftest: all checks passed")
            return 0
        failed = [name for name, _, _, ok, _ in results if not ok]
        print(f"selftest: FAILED ({', '.join(failed)})", file=sys.stderr)
        return 2

    try:
        config = _merge_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    builders = {"spectrum": cmd_spectrum, "gap": cmd_gap,
                "potential": cmd_potential, "evolve": cmd_evolve}
    try:
        datasets = builders[args.command](config)
        for ds in datasets:
            path = write_dataset(ds, config.out_dir)
            print(f"wrote {path}")
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
