"""Plain-text portable bitmap (P1) writing and reading.

Space-time diagrams are emitted with time as the row axis (row 0 = the
initial configuration) and ON cells as black pixels (value 1).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def format_pbm(bits) -> str:
    """Render a (rows, cols) 0/1 array as a P1 bitmap string (1 = black)."""
    arr = np.asarray(bits)
    if arr.ndim != 2:
        raise ValueError("bitmap must be two-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bitmap values must be 0 or 1")
    h, w = arr.shape
    rows = ["".join("1" if v else "0" for v in row) for row in arr]
    return "\n".join([f"P1\n{w} {h}", *rows]) + "\n"


def write_pbm(path, bits) -> None:
    Path(path).write_text(format_pbm(bits))


def read_pbm(path) -> np.ndarray:
    """Parse a P1 bitmap back into a (rows, cols) uint8 array."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError(f"{path}: not a P1 bitmap")
    w, h = int(tokens[1]), int(tokens[2])
    digits = "".join(tokens[3:])
    if len(digits) != w * h or set(digits) - {"0", "1"}:
        raise ValueError(f"{path}: expected {w * h} binary digits")
    return np.frombuffer(digits.encode(), dtype=np.uint8).reshape(h, w) - ord("0")
