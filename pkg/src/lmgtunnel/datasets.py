"""Figure datasets and deterministic CSV emission.

Each dataset carries a '#'-prefixed metadata header (tool version, config
echo, structured `record:` lines) followed by a column header and numeric
rows printed with 17 significant digits.  Apart from the `generated:`
timestamp line, output is byte-identical for identical configurations.
"""

from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

__all__ = ["FigureDataset", "write_dataset", "dataset_filename", "strip_timestamp"]


def _fmt(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return f"{float(x):.17g}"


@dataclass
class FigureDataset:
    figure_id: int
    columns: tuple
    rows: list
    records: list = field(default_factory=list)  # list of (name, {key: value}) pairs
    config_echo: str = ""

    def data_lines(self) -> list:
        lines = [f"# figure: {self.figure_id}",
                 f"# tool: lmgtunnel {__version__}",
                 f"# config: {self.config_echo}"]
        for name, payload in self.records:
            body = " ".join(f"{k}={_fmt(v)}" for k, v in payload.items())
            lines.append(f"# record: {name} {body}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return lines


def dataset_filename(figure_id: int) -> str:
    return f"fig{figure_id}.csv"


def write_dataset(ds: FigureDataset, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / dataset_filename(ds.figure_id)
    lines = ds.data_lines()
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines.insert(2, f"# generated: {stamp}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def strip_timestamp(text: str) -> str:
    """Drop the volatile `generated:` line; the rest is the data section."""
    return "\n".join(line for line in text.splitlines()
                     if not line.startswith("# generated:"))
