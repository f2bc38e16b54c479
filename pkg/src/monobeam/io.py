"""CSV emission and parsing for run artifacts.

Every emitted file is UTF-8 CSV whose first line is a ``#``-prefixed JSON
metadata object (carrying at least the config hash and the seed), followed
by a column header line and data rows.  Floats are written with ``repr``
so identical runs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .arrays import ArrayGeometry
from .reselection import WeightVector


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, metadata: dict, columns, rows) -> None:
    lines = ["# " + json.dumps(metadata, sort_keys=True)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path):
    """Parse an emitted CSV; returns (metadata, columns, rows-of-strings)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing metadata header line")
    metadata = json.loads(lines[0][1:])
    columns = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line]
    return metadata, columns, rows


WEIGHT_COLUMNS = ("index", "pos_x", "pos_y", "re", "im", "magnitude", "support")


def write_weights(path, metadata: dict, geom: ArrayGeometry,
                  weight: WeightVector) -> None:
    support = set(weight.support.tolist())
    rows = [
        (i, geom.positions[i, 0], geom.positions[i, 1],
         weight.values[i].real, weight.values[i].imag,
         abs(weight.values[i]), int(i in support))
        for i in range(geom.n)
    ]
    write_csv(path, metadata, WEIGHT_COLUMNS, rows)


def read_weights(path):
    """Read a weights file back; returns (metadata, complex array)."""
    metadata, columns, rows = read_csv(path)
    if tuple(columns) != WEIGHT_COLUMNS:
        raise ValueError(f"{path}: not a weights file")
    values = np.zeros(len(rows), complex)
    for row in rows:
        values[int(row[0])] = float(row[3]) + 1j * float(row[4])
    return metadata, values
