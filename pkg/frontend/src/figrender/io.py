"""Loading and validating the lmgtunnel CSV datasets.

Files carry '#'-prefixed metadata (including structured `# record:` lines),
a column-header line, then numeric rows.  Schemas are fixed per figure id;
any mismatch is a hard error, never a silent reinterpretation.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "LoadedDataset", "FIGURE_SCHEMAS", "load_dataset"]

# column contract per figure id, as emitted by the lmg-tunnel CLI
FIGURE_SCHEMAS = {
    1: ("chi", "level_index", "energy"),
    2: ("chi", "gap"),
    3: ("chi", "d1", "d2", "d3"),
    4: ("chi", "phi", "V"),
    5: ("chi", "t", "P"),
    6: ("chi", "t", "mean_phase"),
}


class SchemaError(ValueError):
    """The CSV does not match the expected dataset contract."""


@dataclass
class LoadedDataset:
    figure_id: int
    columns: tuple
    data: np.ndarray  # rows x columns, float
    records: list  # (name, {key: float-or-str}) pairs

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def _parse_record(line: str):
    body = line[len("# record:"):].strip()
    parts = body.split()
    if not parts:
        raise SchemaError(f"malformed record line: {line!r}")
    name, payload = parts[0], {}
    for item in parts[1:]:
        if "=" not in item:
            raise SchemaError(f"malformed record entry {item!r} in line {line!r}")
        key, raw = item.split("=", 1)
        try:
            payload[key] = float(raw)
        except ValueError:
            payload[key] = raw
    return name, payload


def load_dataset(path, figure_id: int) -> LoadedDataset:
    """Read one figure CSV and check it against the figure's schema."""
    expected = FIGURE_SCHEMAS.get(figure_id)
    if expected is None:
        raise SchemaError(f"unknown figure id {figure_id}")
    path = Path(path)
    records = []
    header_figure = None
    columns = None
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            if line.startswith("# record:"):
                records.append(_parse_record(line))
            elif line.startswith("# figure:"):
                header_figure = int(line.split(":", 1)[1].strip())
            continue
        if columns is None:
            columns = tuple(c.strip() for c in line.split(","))
            continue
        values = line.split(",")
        if len(values) != len(columns):
            raise SchemaError(f"row with {len(values)} fields, expected {len(columns)}: {line!r}")
        rows.append([float(v) for v in values])

    if columns is None:
        raise SchemaError(f"{path.name}: no column header found")
    if header_figure is not None and header_figure != figure_id:
        raise SchemaError(f"{path.name}: file declares figure {header_figure}, expected {figure_id}")
    missing = [c for c in expected if c not in columns]
    if missing:
        raise SchemaError(f"{path.name}: missing column(s) {', '.join(missing)}")
    extra = [c for c in columns if c not in expected]
    if extra or columns != expected:
        raise SchemaError(f"{path.name}: columns {columns} do not match contract {expected}")
    if not rows:
        raise SchemaError(f"{path.name}: empty dataset")
    return LoadedDataset(figure_id=figure_id, columns=columns,
                         data=np.asarray(rows, dtype=float), records=records)
