"""Run configuration: defaults, flat key=value config files, CLI overrides.

Precedence is CLI flag > config file > built-in default.
"""

from dataclasses import dataclass, fields, replace
from math import pi

import numpy as np

__all__ = ["RunConfig", "parse_config_text", "load_config_file"]


@dataclass(frozen=True)
class RunConfig:
    n_particles: int = 10
    chi_start: float = 0.0
    chi_stop: float = 3.0
    chi_step: float = 0.005
    chi_list: tuple = (0.0, 1.2, 1.8, 2.5)
    phi_points: int = 0  # 0 derives 8N+1 points spanning [-pi, pi]
    dt: float = 0.1
    steps: int = 1200
    level_i: int = 0
    level_j: int = 1
    sign: str = "s"
    mean_phase: str = "linear"
    series_tol: float = 1e-12
    out_dir: str = "out"

    def validate(self) -> "RunConfig":
        n_p = self.n_particles
        if n_p < 2 or n_p % 2 != 0:
            raise ValueError(f"n_particles must be a positive even integer, got {n_p}")
        if self.chi_step <= 0:
            raise ValueError("chi_step must be > 0")
        if self.chi_stop <= self.chi_start:
            raise ValueError("chi_stop must exceed chi_start")
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.series_tol <= 0:
            raise ValueError("series_tol must be > 0")
        if self.phi_points < 0:
            raise ValueError("phi_points must be >= 0")
        if self.sign not in ("s", "a"):
            raise ValueError(f"sign must be 's' or 'a', got {self.sign!r}")
        if self.mean_phase not in ("linear", "circular"):
            raise ValueError(f"mean_phase must be 'linear' or 'circular', got {self.mean_phase!r}")
        dim = n_p + 1
        if not (0 <= self.level_i < dim and 0 <= self.level_j < dim):
            raise ValueError(f"levels ({self.level_i}, {self.level_j}) out of range for {dim} levels")
        if self.level_i == self.level_j:
            raise ValueError("levels must differ")
        if not self.chi_list or any(c < 0 for c in self.chi_list):
            raise ValueError("chi_list must be non-empty with chi >= 0")
        return self

    def chi_grid(self) -> np.ndarray:
        count = int(round((self.chi_stop - self.chi_start) / self.chi_step)) + 1
        return self.chi_start + self.chi_step * np.arange(count)

    def phi_grid(self) -> np.ndarray:
        n_points = self.phi_points or 8 * (self.n_particles + 1) + 1
        return np.linspace(-pi, pi, n_points)

    def echo(self) -> str:
        """One-line summary embedded in dataset headers."""
        chi_list = ",".join(_fmt_value(c) for c in self.chi_list)
        return (f"np={self.n_particles} chi={_fmt_value(self.chi_start)}:"
                f"{_fmt_value(self.chi_stop)}:{_fmt_value(self.chi_step)} "
                f"chi_list={chi_list} phi_points={self.phi_points} "
                f"dt={_fmt_value(self.dt)} steps={self.steps} "
                f"levels={self.level_i},{self.level_j} sign={self.sign} "
                f"mean_phase={self.mean_phase} series_tol={_fmt_value(self.series_tol)}")

    def serialize(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "chi_list":
                value = ",".join(_fmt_value(v) for v in value)
            elif isinstance(value, float):
                value = _fmt_value(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


def _fmt_value(x: float) -> str:
    return f"{float(x):.17g}"


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    if key == "chi_list":
        parts = [p for p in raw.replace(" ", "").split(",") if p]
        return tuple(float(p) for p in parts)
    if key in ("n_particles", "phi_points", "steps", "level_i", "level_j"):
        return int(raw)
    if key in ("chi_start", "chi_stop", "chi_step", "dt", "series_tol"):
        return float(raw)
    if key in ("sign", "mean_phase", "out_dir"):
        return raw
    raise ValueError(f"unknown config key {key!r}")


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse flat `key = value` lines; '#' starts a comment."""
    cfg = base or RunConfig()
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in stripped.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        try:
            overrides[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ValueError(f"config line {lineno}: {exc}") from exc
    return replace(cfg, **overrides)


def load_config_file(path, base: RunConfig | None = None) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), base=base)
