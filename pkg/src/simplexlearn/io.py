"""Plain-text persistence for datasets, simplices, traces and result tables.

Numbers are written with 17 significant digits so that every float64 survives
a write/read round trip unchanged.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionError
from .geometry import Simplex
from .sampling import Dataset


class FileFormatError(ValueError):
    """A file exists but its contents are not in the expected layout."""


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    f = float(v)
    if math.isnan(f):
        return "nan"
    if math.isinf(f):
        return "inf" if f > 0 else "-inf"
    return format(f, ".17g")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


# ------------------------------------------------------------------ matrices

def write_matrix_csv(path, rows: np.ndarray, header: Sequence[str] | None = None) -> None:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def read_matrix_csv(path) -> tuple[np.ndarray, list[str] | None]:
    """Numeric CSV with an optional header row (a first row with no numeric cell)."""
    with open(path, newline="") as fh:
        lines = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not lines:
        raise FileFormatError(f"{path}: no rows")
    header = None
    if not any(_is_number(c) for c in lines[0]):
        header = [c.strip() for c in lines[0]]
        lines = lines[1:]
    if not lines:
        raise FileFormatError(f"{path}: header but no data")
    width = len(lines[0])
    try:
        data = np.array([[float(c) for c in r] for r in lines], dtype=np.float64)
    except ValueError as exc:
        raise FileFormatError(f"{path}: non-numeric cell ({exc})") from None
    if any(len(r) != width for r in lines):
        raise FileFormatError(f"{path}: ragged rows")
    return data, header


def write_dataset(path, d: Dataset | np.ndarray) -> None:
    pts = np.asarray(getattr(d, "points", d), dtype=np.float64)
    write_matrix_csv(path, pts, [f"x{j}" for j in range(pts.shape[1])])


def read_dataset(path) -> Dataset:
    data, _ = read_matrix_csv(path)
    return Dataset(points=data)


# ------------------------------------------------------------------ simplex

def simplex_to_text(s: Simplex) -> str:
    # hand-built so the 17-digit literals survive (json.dumps uses repr)
    cols = ",\n    ".join(
        "[" + ", ".join(fmt(v) for v in s.vertices[:, j]) + "]" for j in range(s.k + 1)
    )
    return f'{{\n  "k": {s.k},\n  "vertices": [\n    {cols}\n  ]\n}}\n'


def write_simplex(path, s: Simplex) -> None:
    Path(path).write_text(simplex_to_text(s))


def read_simplex(path) -> Simplex:
    try:
        obj = json.loads(Path(path).read_text())
        k = int(obj["k"])
        verts = np.array(obj["vertices"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"{path}: not a simplex file ({exc})") from None
    if verts.shape != (k + 1, k):
        raise FileFormatError(f"{path}: expected {k + 1} vertices of length {k}, got {verts.shape}")
    return Simplex(verts.T)


# ---------------------------------------------------------------- key/value

def write_json(path, obj: Mapping) -> None:
    def clean(v):
        if isinstance(v, Mapping):
            return {str(a): clean(b) for a, b in v.items()}
        if isinstance(v, (list, tuple, np.ndarray)):
            return [clean(x) for x in v]
        if isinstance(v, (np.integer, np.floating, np.bool_)):
            return v.item()
        return v

    Path(path).write_text(json.dumps(clean(obj), indent=2, allow_nan=True) + "\n")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except ValueError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from None


# ------------------------------------------------------------------- tables

def write_table(path, columns: Sequence[str], rows: Iterable[Sequence],
                summary: Sequence[str] = ()) -> None:
    """CSV with a header row, then ``#``-prefixed summary lines at the end."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            if len(r) != len(columns):
                raise DimensionError(f"row has {len(r)} cells, header has {len(columns)}")
            w.writerow([fmt(v) for v in r])
        for line in summary:
            fh.write(f"# {line}\n")


def read_table(path) -> tuple[list[str], list[list[str]], list[str]]:
    with open(path, newline="") as fh:
        text = fh.read().splitlines()
    summary = [ln[1:].strip() for ln in text if ln.startswith("#")]
    body = [ln for ln in text if ln and not ln.startswith("#")]
    if not body:
        raise FileFormatError(f"{path}: empty table")
    rows = list(csv.reader(body))
    return rows[0], rows[1:], summary
