"""Word-packed ensemble engine: 64 lattices advance per machine-word op.

Layout: an ensemble of B same-size lattices is stored as a uint64 array of
shape (n_cells, W) with W = ceil(B/64); bit b of ``planes[x, w]`` is cell x
of lattice 64*w + b.  Packing runs across the ensemble axis, so neighbor
access is plain row indexing (no sub-word shifts at seams) and one bitwise
op updates 64 lattices at once.

Rule application uses a Shannon-expansion mux tree over the 7 neighborhood
bits, vectorized along the shrinking lookup-table axis: 7 levels instead of
128 per-entry tests.

Groups: ``run_ensemble`` takes a leading group axis (G, n_cells, W), one
rule row per group, and retires groups as soon as every valid lattice in
them sits on a uniform fixed point.  Mass Monte-Carlo sweeps slice one
rule's ensemble into single-word groups so finished words drop out early;
a genetic-algorithm generation instead uses one group per genome, all
sharing the same initial configurations.
"""

from __future__ import annotations

import numpy as np

from .rules import RADIUS, RULE_BITS, RuleTable

WORD = 64
_ALL_ONES = np.uint64(0xFFFF_FFFF_FFFF_FFFF)

if not np.little_endian:
    raise ImportError("packed ensemble layout requires a little-endian host")


def pack(configs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pack (B, n_cells) 0/1 rows into bit planes (n_cells, W) plus a lane-validity mask (W,)."""
    configs = np.ascontiguousarray(configs, dtype=np.uint8)
    b, _n = configs.shape
    w = -(-b // WORD)
    cols = np.zeros((_n, w * WORD), dtype=np.uint8)
    cols[:, :b] = configs.T
    planes = np.packbits(cols, axis=-1, bitorder="little").view(np.uint64)
    lanes = (np.arange(w * WORD) < b).astype(np.uint8)
    valid = np.packbits(lanes, bitorder="little").view(np.uint64)
    return planes, valid


def unpack(planes: np.ndarray, n_lattices: int) -> np.ndarray:
    """Inverse of :func:`pack`: (n_cells, W) planes back to (B, n_cells) rows."""
    raw = np.ascontiguousarray(planes).view(np.uint8)
    bits = np.unpackbits(raw, axis=-1, bitorder="little")
    return bits[:, :n_lattices].T.copy()


def unpack_lane_bits(words: np.ndarray, n_lattices: int) -> np.ndarray:
    """Expand per-lane flag words (..., W) to a (..., B) boolean array."""
    raw = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(raw, axis=-1, bitorder="little")
    return bits[..., :n_lattices].astype(bool)


def _neighbor_planes(planes: np.ndarray) -> list[np.ndarray]:
    # entry p: plane of the cell carrying weight 2**p in the neighborhood
    # index, i.e. the cell at offset RADIUS - p (leftmost = most significant)
    return [np.roll(planes, p - RADIUS, axis=-2) for p in range(2 * RADIUS + 1)]


def step_packed(outputs: np.ndarray, planes: np.ndarray) -> np.ndarray:
    """One synchronous update of packed planes.

    ``planes`` is (..., n_cells, W); ``outputs`` is a matching (..., 128)
    uint8 table (one rule per leading-group row, or a bare (128,) table for
    a single ensemble).
    """
    neigh = _neighbor_planes(planes)
    out_bool = np.moveaxis(outputs.astype(bool), -1, 0)  # (128, ...groups)
    a, b = out_bool[0::2], out_bool[1::2]
    v0 = neigh[0]
    nv0 = ~v0
    t = np.empty((RULE_BITS // 2,) + planes.shape, dtype=np.uint64)
    # First mux level filled by case over the (entry-when-bit0-clear,
    # entry-when-bit0-set) pair; avoids 64 broadcast ANDs against constants.
    t[~a & ~b] = 0
    t[a & b] = _ALL_ONES
    m = ~a & b
    t[m] = np.broadcast_to(v0, t.shape)[m]
    m = a & ~b
    t[m] = np.broadcast_to(nv0, t.shape)[m]
    for p in range(1, 2 * RADIUS + 1):
        v = neigh[p]
        t = (t[0::2] & ~v) | (t[1::2] & v)
    return t[0]


def _fixed_point_masks(outputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    on_ok = np.where(outputs[..., -1] == 1, _ALL_ONES, np.uint64(0))
    off_ok = np.where(outputs[..., 0] == 0, _ALL_ONES, np.uint64(0))
    return on_ok[..., None], off_ok[..., None]


def settled_lanes(outputs: np.ndarray, planes: np.ndarray) -> np.ndarray:
    """Per-lane flags (..., W): lattice is uniform and the rule holds it there."""
    allon = np.bitwise_and.reduce(planes, axis=-2)
    anyon = np.bitwise_or.reduce(planes, axis=-2)
    on_ok, off_ok = _fixed_point_masks(outputs)
    return (allon & on_ok) | (~anyon & off_ok)


def run_ensemble(
    outputs: np.ndarray,
    planes: np.ndarray,
    valid: np.ndarray,
    t_max: int,
    check_every: int = 4,
) -> np.ndarray:
    """Advance grouped ensembles t_max steps; returns the final planes.

    Groups whose valid lattices have all reached uniform fixed points are
    retired early — a fixed point never moves, so the state they hold IS
    the state at t_max.  Results are exact for any check_every.
    """
    outputs = np.ascontiguousarray(outputs, dtype=np.uint8)
    if outputs.ndim != 2 or planes.ndim != 3:
        raise ValueError("run_ensemble expects (G,128) outputs and (G,n_cells,W) planes")
    g = planes.shape[0]
    invalid = ~np.broadcast_to(valid, (g, planes.shape[-1]))

    result = np.empty_like(planes)
    cur = planes.copy()
    out = outputs
    inv = invalid
    live = np.arange(g)

    def flush_settled() -> None:
        nonlocal cur, out, inv, live
        settled = ((settled_lanes(out, cur) | inv) == _ALL_ONES).all(axis=-1)
        if settled.any():
            result[live[settled]] = cur[settled]
            keep = ~settled
            cur, out, inv, live = cur[keep], out[keep], inv[keep], live[keep]

    flush_settled()
    for t in range(t_max):
        if live.size == 0:
            return result
        cur = step_packed(out, cur)
        if (t + 1) % check_every == 0:
            flush_settled()
    if live.size:
        result[live] = cur
    return result


def run_words(rule: RuleTable, configs: np.ndarray, t_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Run one rule over a (B, n_cells) batch; returns final (allon, anyoff) flags per lattice.

    The batch is packed and split into one group per 64-lattice word so
    finished words retire individually.
    """
    b = configs.shape[0]
    planes, valid = pack(configs)
    w = planes.shape[-1]
    groups = np.ascontiguousarray(np.moveaxis(planes, -1, 0))[:, :, None]  # (W, n, 1)
    outs = np.broadcast_to(rule.outputs, (w, RULE_BITS))
    final = run_ensemble(outs, groups, valid[:, None], t_max)
    flat = np.moveaxis(final[:, :, 0], 0, -1)  # (n, W)
    allon = unpack_lane_bits(np.bitwise_and.reduce(flat, axis=-2), b)
    anyon = unpack_lane_bits(np.bitwise_or.reduce(flat, axis=-2), b)
    return allon, ~anyon
