"""Synchronous update engine for cyclic one-dimensional binary lattices.

A lattice is a 1-D uint8 array of 0/1 cell states with periodic boundary
conditions.  All updates are pure: the input array is never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rules import RADIUS, RuleTable

HALT_FIXED_POINT = "uniform-fixed-point"
HALT_BUDGET = "cycle-budget-exhausted"


def default_t_max(n_cells: int) -> int:
    """Default step budget: 2*N + 22 (about 320 for N=149). Configurable everywhere."""
    return 2 * n_cells + 22


def as_lattice(cells) -> np.ndarray:
    arr = np.ascontiguousarray(cells, dtype=np.uint8)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("lattice must be a non-empty 1-D array")
    if not np.all(arr <= 1):
        raise ValueError("lattice cells must be 0 or 1")
    return arr


def density(cells) -> float:
    """Fraction of ON cells."""
    arr = as_lattice(cells)
    return float(arr.sum()) / arr.size


def step_reference(rule: RuleTable, cells) -> np.ndarray:
    """Cell-by-cell scalar update, kept as the independent oracle.

    Deliberately naive: walks every cell, assembles the 7-bit neighborhood
    index one bit at a time (leftmost cell most significant), and looks up
    the output.  The word-packed kernels are tested against this, so it
    must stay free of any shared vectorization tricks.
    """
    arr = as_lattice(cells)
    out = [0] * arr.size
    n = arr.size
    table = rule.outputs.tolist()
    states = arr.tolist()
    for x in range(n):
        idx = 0
        for off in range(-RADIUS, RADIUS + 1):
            idx = (idx << 1) | states[(x + off) % n]
        out[x] = table[idx]
    return np.array(out, dtype=np.uint8)


def step(rule: RuleTable, cells) -> np.ndarray:
    """Synchronous update of a single lattice (vectorized)."""
    arr = as_lattice(cells)
    idx = np.zeros(arr.shape, dtype=np.uint8)
    for off in range(-RADIUS, RADIUS + 1):
        # np.roll(arr, -off)[x] == arr[(x + off) % n]
        idx = (idx << 1) | np.roll(arr, -off)
    return rule.outputs[idx]


def is_uniform_fixed_point(rule: RuleTable, cells: np.ndarray) -> bool:
    """True if the state is all-ON or all-OFF and the rule keeps it there."""
    first = cells[0]
    if not np.all(cells == first):
        return False
    if first == 1:
        return rule.outputs[-1] == 1
    return rule.outputs[0] == 0


@dataclass
class Trajectory:
    """Recorded run of a rule from an initial configuration.

    ``states`` has one row per recorded step, ``states[0]`` the initial
    lattice.  ``halted_at`` is the step index of an early uniform
    fixed-point halt, or None if the run used its whole budget.
    """

    rule: RuleTable
    states: np.ndarray  # (recorded_steps + 1, n_cells) uint8
    halted_at: int | None
    halt_reason: str

    @property
    def n_cells(self) -> int:
        return self.states.shape[1]

    @property
    def initial(self) -> np.ndarray:
        return self.states[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def run(rule: RuleTable, initial, t_max: int) -> Trajectory:
    """Iterate ``step`` up to ``t_max`` times, halting early at a uniform fixed point.

    The halt check requires the uniform state to actually be a fixed point
    of the rule (all-ON needs outputs[127]=1, all-OFF needs outputs[0]=0),
    so a uniform state the rule immediately leaves never ends the run.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    cur = as_lattice(initial)
    states = [cur]
    halted_at = None
    reason = HALT_BUDGET
    t = 0
    while True:
        if is_uniform_fixed_point(rule, cur):
            halted_at = t
            reason = HALT_FIXED_POINT
            break
        if t == t_max:
            break
        cur = step(rule, cur)
        states.append(cur)
        t += 1
    return Trajectory(rule=rule, states=np.array(states), halted_at=halted_at, halt_reason=reason)


def space_time(traj: Trajectory, t_max: int | None = None) -> np.ndarray:
    """Full diagram with t_max+1 rows, padding a halted run with its fixed point."""
    if t_max is None:
        return traj.states
    rows = t_max + 1
    have = traj.states.shape[0]
    if have >= rows:
        return traj.states[:rows]
    pad = np.tile(traj.states[-1], (rows - have, 1))
    return np.vstack([traj.states, pad])
