"""Result tables and their on-disk forms (CSV, plain PGM heatmaps)."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

# metadata that changes run to run and is kept out of the CSV files
VOLATILE_KEYS = frozenset({"runtime_s"})
PGM_LINE_WIDTH = 70


@dataclass(frozen=True)
class Axis:
    name: str
    unit: str
    values: np.ndarray


@dataclass
class ResultTable:
    name: str
    rows: Axis
    cols: Axis
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        shape = (len(self.rows.values), len(self.cols.values))
        if self.values.shape != shape:
            raise ValueError(f"table {self.name}: values {self.values.shape} != axes {shape}")

    @property
    def nan_count(self) -> int:
        return int(np.isnan(self.values).sum())


@dataclass(frozen=True)
class Shared:
    """Heatmap normalisation against a fixed maximum shared across tables."""

    max: float


PER_TABLE = "per-table"


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _axis_lines(label: str, axis: Axis) -> list[str]:
    return [
        f"# {label}: {axis.name} [{axis.unit}] n={len(axis.values)}",
        f"# {label}_values: " + " ".join(_fmt(v) for v in axis.values),
    ]


def write_csv(t: ResultTable, path) -> None:
    """Comment header with metadata and axes, then one CSV line per table row."""
    path = Path(path)
    lines = [f"# table: {t.name}"]
    for key in sorted(t.metadata):
        if key not in VOLATILE_KEYS:
            lines.append(f"# {key}: {t.metadata[key]}")
    lines += _axis_lines("rows", t.rows)
    lines += _axis_lines("cols", t.cols)
    lines += [",".join(_fmt(v) for v in row) for row in t.values]
    try:
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def to_gray(values: np.ndarray, normalization=PER_TABLE) -> np.ndarray:
    """8-bit levels: 255 at the normalising maximum, 0 at zero and for NaN."""
    values = np.asarray(values, dtype=float)
    finite = np.where(np.isnan(values), 0.0, values)
    if isinstance(normalization, Shared):
        top = normalization.max
    elif normalization == PER_TABLE:
        top = finite.max() if finite.size else 0.0
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    if not top > 0:
        return np.zeros(values.shape, dtype=np.uint8)
    return np.clip(np.rint(255.0 * finite / top), 0, 255).astype(np.uint8)


def write_heatmap(t: ResultTable, path, normalization=PER_TABLE) -> None:
    """Plain (P2) PGM. The first table row is drawn at the bottom of the image.

    NaN cells are drawn black and counted in a ``<path>.nan`` sidecar.
    """
    path = Path(path)
    gray = to_gray(t.values, normalization)[::-1]
    height, width = gray.shape
    out = ["P2", f"{width} {height}", "255"]
    for row in gray:
        line = ""
        for v in row:
            tok = str(int(v))
            if line and len(line) + 1 + len(tok) > PGM_LINE_WIDTH:
                out.append(line)
                line = tok
            else:
                line = f"{line} {tok}" if line else tok
        out.append(line)
    try:
        path.write_text("\n".join(out) + "\n", encoding="ascii")
        nan_count = t.nan_count
        sidecar = path.with_name(path.name + ".nan")
        if nan_count:
            sidecar.write_text(f"nan_count: {nan_count}\n", encoding="ascii")
        elif sidecar.exists():
            sidecar.unlink()
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def read_pgm(path) -> np.ndarray:
    """Parse a plain PGM back into a (height, width) integer array."""
    tokens = Path(path).read_text(encoding="ascii").split()
    if tokens[0] != "P2":
        raise ValueError(f"{path} is not a plain PGM")
    width, height = int(tokens[1]), int(tokens[2])
    return np.array(tokens[4:], dtype=int).reshape(height, width)


def count_bright_lobes(values: np.ndarray, fraction: float = 0.5) -> int:
    """Connected regions (4-neighbour) above ``fraction`` of the maximum."""
    values = np.nan_to_num(np.asarray(values, dtype=float), nan=0.0)
    _, count = ndimage.label(values > fraction * values.max())
    return int(count)
