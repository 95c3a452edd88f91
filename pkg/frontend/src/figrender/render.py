"""Figure construction: one image per dataset, no numerical logic.

build_figure() returns the live matplotlib Figure so tests can inspect
line styles, overlays and data-to-pixel transforms; render() saves it.
"""

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .io import FIGURE_SCHEMAS, LoadedDataset, load_dataset  # noqa: E402

__all__ = ["FigureSpec", "default_spec", "build_figure", "render"]

_AXIS_LABELS = {
    1: ("coupling", "energy"),
    2: ("coupling", "gap"),
    3: ("coupling", "gap derivatives"),
    4: ("angle", "potential"),
    5: ("time", "survival probability"),
    6: ("time", "mean phase"),
}

_GROUP_COLUMN = {1: "level_index", 2: None, 3: None, 4: "chi", 5: "chi", 6: "chi"}

# derivative line styles: solid, dashed, long-short dashed
_D3_STYLES = {"d1": "-", "d2": "--", "d3": (0, (6, 2, 2, 2))}


@dataclass
class FigureSpec:
    figure_id: int
    csv_path: Path
    out_path: Path
    xlabel: str = ""
    ylabel: str = ""
    group_column: str | None = field(default=None)

    def __post_init__(self):
        if self.figure_id not in FIGURE_SCHEMAS:
            raise ValueError(f"unknown figure id {self.figure_id}")
        labels = _AXIS_LABELS[self.figure_id]
        if not self.xlabel:
            self.xlabel = labels[0]
        if not self.ylabel:
            self.ylabel = labels[1]
        if self.group_column is None:
            self.group_column = _GROUP_COLUMN[self.figure_id]


def default_spec(figure_id: int, in_dir, out_dir, image_format: str = "svg") -> FigureSpec:
    return FigureSpec(figure_id=figure_id,
                      csv_path=Path(in_dir) / f"fig{figure_id}.csv",
                      out_path=Path(out_dir) / f"fig{figure_id}.{image_format}")


def _plot_grouped(ax, ds: LoadedDataset, spec: FigureSpec, x_col: str, y_col: str,
                  label_fmt: str):
    group = ds.column(spec.group_column)
    for value in sorted(set(group.tolist())):
        sel = group == value
        ax.plot(ds.column(x_col)[sel], ds.column(y_col)[sel],
                label=label_fmt.format(value))


def build_figure(spec: FigureSpec):
    """Load, validate and draw; returns (figure, axes, dataset)."""
    ds = load_dataset(spec.csv_path, spec.figure_id)
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    fid = spec.figure_id

    if fid == 1:
        _plot_grouped(ax, ds, spec, "chi", "energy", "level {0:.0f}")
        ax.legend(fontsize="x-small", ncols=2)
    elif fid == 2:
        ax.plot(ds.column("chi"), ds.column("gap"), color="C0")
    elif fid == 3:
        for name in ("d1", "d2", "d3"):
            ax.plot(ds.column("chi"), ds.column(name), color="black",
                    linestyle=_D3_STYLES[name], label=name)
        for name, payload in ds.records:
            if name == "boundaries":
                for key in ("chi1", "chi2"):
                    ax.axvline(payload[key], color="0.6", linewidth=0.8)
        ax.legend()
    elif fid == 4:
        group = ds.column("chi")
        levels = {payload["chi"]: payload for name, payload in ds.records
                  if name == "levels"}
        for idx, value in enumerate(sorted(set(group.tolist()))):
            sel = group == value
            color = f"C{idx}"
            ax.plot(ds.column("phi")[sel], ds.column("V")[sel], color=color,
                    label=f"chi={value:g}")
            rec = levels.get(value)
            if rec is not None:
                ax.axhline(rec["E0"], color=color, linestyle=":", linewidth=1.0)
                ax.axhline(rec["E1"], color=color, linestyle=":", linewidth=1.0)
        ax.legend(fontsize="small")
    elif fid == 5:
        _plot_grouped(ax, ds, spec, "t", "P", "chi={0:g}")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(fontsize="small")
    elif fid == 6:
        _plot_grouped(ax, ds, spec, "t", "mean_phase", "chi={0:g}")
        ax.legend(fontsize="small")

    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    fig.tight_layout()
    return fig, ax, ds


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write the image file."""
    fig, _, _ = build_figure(spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out
