"""Classification tasks: initial configurations, adjudication, performance.

Three tasks share one adjudication scheme — run the rule on an initial
configuration (IC) and check whether the lattice ends in the target
uniform state:

* density: target all-ON iff the IC has an ON majority;
* and / or: the lattice is split into two halves (the center cell belongs
  to neither), each half's majority is read as one bit, and the target
  encodes the logical function of the two bits.

A run is correct if it halts early at the target uniform fixed point or
its state after the full step budget equals the target uniform state.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import ensemble
from .engine import as_lattice, default_t_max, run
from .rng import substream
from .rules import RuleTable, format_hex

TASK_KINDS = ("density", "and", "or")
DISTRIBUTIONS = ("unbiased", "uniform-density", "biased")

FITNESS_DENSITY_ICS = 50
FITNESS_LOGICAL_ICS = 50

REPORT_HEADER = "rule_hex,task,n_cells,t_max,distribution,samples,correct,p_hat,master_seed"


@dataclass(frozen=True)
class TaskSpec:
    """A task kind with its lattice geometry and step budget."""

    kind: str
    n_cells: int
    t_max: int

    def __post_init__(self):
        if self.kind not in TASK_KINDS:
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.n_cells < 1 or self.n_cells % 2 == 0:
            raise ValueError("n_cells must be odd (majority is never tied)")
        if self.kind != "density" and self.n_cells < 3:
            raise ValueError("logical tasks need n_cells >= 3")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")

    @property
    def half(self) -> int:
        return (self.n_cells - 1) // 2


def make_task(kind: str, n_cells: int, t_max: int | None = None) -> TaskSpec:
    return TaskSpec(kind, n_cells, default_t_max(n_cells) if t_max is None else t_max)


def majority(bits) -> int:
    """1 iff strictly more than half the cells are ON; exact ties count as OFF."""
    arr = np.asarray(bits)
    if arr.size == 0:
        raise ValueError("majority of an empty sequence is undefined")
    return int(int(arr.sum()) * 2 > arr.size)


def extract_bits(cells, task: TaskSpec) -> tuple[int, int]:
    """Majority bit of each half-lattice; the center cell is ignored."""
    arr = as_lattice(cells)
    if arr.size != task.n_cells:
        raise ValueError(f"lattice has {arr.size} cells, task expects {task.n_cells}")
    h = task.half
    return majority(arr[:h]), majority(arr[h + 1 :])


def target_state(task: TaskSpec, ic) -> int:
    """Target uniform state (1 = all-ON, 0 = all-OFF) for this IC."""
    if task.kind == "density":
        return majority(ic)
    b1, b2 = extract_bits(ic, task)
    if task.kind == "and":
        return int(b1 == 1 and b2 == 1)
    return int(b1 == 1 or b2 == 1)


def adjudicate(rule: RuleTable, ic, task: TaskSpec) -> bool:
    """Single-IC judgment through the trajectory engine (the slow, simple path)."""
    arr = as_lattice(ic)
    if arr.size != task.n_cells:
        raise ValueError(f"lattice has {arr.size} cells, task expects {task.n_cells}")
    traj = run(rule, arr, task.t_max)
    return bool(np.all(traj.final == target_state(task, arr)))


# --- IC generators -------------------------------------------------------

def gen_unbiased(n_cells: int, rng: np.random.Generator) -> np.ndarray:
    """Each cell independently ON with probability 1/2."""
    return rng.integers(0, 2, size=n_cells, dtype=np.uint8)


def gen_uniform_density(n_cells: int, rng: np.random.Generator) -> np.ndarray:
    """ON-count drawn uniformly from {0..n}, placed uniformly at random."""
    k = int(rng.integers(0, n_cells + 1))
    ic = np.zeros(n_cells, dtype=np.uint8)
    ic[rng.permutation(n_cells)[:k]] = 1
    return ic


def _half_fill(h: int, bit_on: bool, rng: np.random.Generator) -> np.ndarray:
    # Density drawn uniformly from (0.5, 1] for an ON bit, [0, 0.5) for OFF;
    # the count rounds toward the bit's side so the half majority is strict.
    if bit_on:
        k = math.ceil((1.0 - rng.random() / 2.0) * h)
    else:
        k = math.floor((rng.random() / 2.0) * h)
    half = np.zeros(h, dtype=np.uint8)
    half[rng.permutation(h)[:k]] = 1
    return half


def gen_logical_biased(kind: str, n_cells: int, rng: np.random.Generator) -> np.ndarray:
    """IC for a logical task, biased so the exception bit pair appears half the time.

    The exception pair — (ON,ON) for "and", (OFF,OFF) for "or" — is drawn
    with probability 1/2; otherwise one of the remaining three pairs is
    picked uniformly.  Unbiased sampling would hit the exception only 25%
    of the time, making constant-answer rules look too good.
    """
    if kind not in ("and", "or"):
        raise ValueError(f"biased generation is for logical tasks, not {kind!r}")
    if n_cells % 2 == 0 or n_cells < 3:
        raise ValueError("n_cells must be odd and >= 3")
    exception = (1, 1) if kind == "and" else (0, 0)
    if rng.random() < 0.5:
        pair = exception
    else:
        rest = [p for p in ((0, 0), (0, 1), (1, 0), (1, 1)) if p != exception]
        pair = rest[int(rng.integers(0, 3))]
    h = (n_cells - 1) // 2
    ic = np.empty(n_cells, dtype=np.uint8)
    ic[:h] = _half_fill(h, pair[0] == 1, rng)
    ic[h] = rng.integers(0, 2)
    ic[h + 1 :] = _half_fill(h, pair[1] == 1, rng)
    return ic


def sample_ic(distribution: str, task: TaskSpec, rng: np.random.Generator) -> np.ndarray:
    if distribution == "unbiased":
        return gen_unbiased(task.n_cells, rng)
    if distribution == "uniform-density":
        return gen_uniform_density(task.n_cells, rng)
    if distribution == "biased":
        return gen_logical_biased(task.kind, task.n_cells, rng)
    raise ValueError(f"unknown distribution {distribution!r}")


# --- batch adjudication and performance ----------------------------------

def targets_on(task: TaskSpec, ics: np.ndarray) -> np.ndarray:
    """Vector of target states (True = all-ON) for a (B, n_cells) IC batch."""
    n = task.n_cells
    if task.kind == "density":
        return ics.sum(axis=1) * 2 > n
    h = task.half
    left = ics[:, :h].sum(axis=1) * 2 > h
    right = ics[:, h + 1 :].sum(axis=1) * 2 > h
    return (left & right) if task.kind == "and" else (left | right)


@dataclass(frozen=True)
class PerformanceReport:
    """Monte-Carlo estimate of the fraction of ICs a rule classifies correctly."""

    rule: RuleTable
    task: TaskSpec
    distribution: str
    samples: int
    correct: int
    master_seed: int

    @property
    def p_hat(self) -> float:
        return self.correct / self.samples

    def csv_row(self) -> str:
        return ",".join(
            [
                format_hex(self.rule),
                self.task.kind,
                str(self.task.n_cells),
                str(self.task.t_max),
                self.distribution,
                str(self.samples),
                str(self.correct),
                f"{self.p_hat:.6g}",
                str(self.master_seed),
            ]
        )


def _chunk_correct(rule, task, distribution, master_seed, lo, hi):
    ics = np.empty((hi - lo, task.n_cells), dtype=np.uint8)
    for i in range(lo, hi):
        ics[i - lo] = sample_ic(distribution, task, substream(master_seed, i))
    want_on = targets_on(task, ics)
    allon, alloff = ensemble.run_words(rule, ics, task.t_max)
    return int(np.where(want_on, allon, alloff).sum())


def evaluate_performance(
    rule: RuleTable,
    task: TaskSpec,
    distribution: str,
    samples: int,
    master_seed: int,
    workers: int = 1,
    chunk_size: int = 4096,
) -> PerformanceReport:
    """Estimate the task performance of a rule over `samples` random ICs.

    IC number i is always drawn from the substream keyed by
    (master_seed, i), so the report is bit-identical for any worker count
    or chunk size.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    if distribution == "biased" and task.kind == "density":
        raise ValueError("biased ICs are defined only for logical tasks")
    bounds = [(lo, min(lo + chunk_size, samples)) for lo in range(0, samples, chunk_size)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(
                pool.map(
                    lambda b: _chunk_correct(rule, task, distribution, master_seed, *b),
                    bounds,
                )
            )
    else:
        counts = [_chunk_correct(rule, task, distribution, master_seed, *b) for b in bounds]
    return PerformanceReport(
        rule=rule,
        task=task,
        distribution=distribution,
        samples=samples,
        correct=sum(counts),
        master_seed=master_seed,
    )


def write_reports_csv(path, reports) -> None:
    lines = [REPORT_HEADER] + [r.csv_row() for r in reports]
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


# --- combined GA fitness ---------------------------------------------------

def _fitness_sample(kind: str, n_cells: int, master_seed: int):
    """The 100-IC training sample: 50 uniform-density + 50 biased logical ICs."""
    total = FITNESS_DENSITY_ICS + FITNESS_LOGICAL_ICS
    ics = np.empty((total, n_cells), dtype=np.uint8)
    for i in range(FITNESS_DENSITY_ICS):
        ics[i] = gen_uniform_density(n_cells, substream(master_seed, i))
    for i in range(FITNESS_DENSITY_ICS, total):
        ics[i] = gen_logical_biased(kind, n_cells, substream(master_seed, i))
    t_density = make_task("density", n_cells, 1)
    t_logical = make_task(kind, n_cells, 1)
    want_on = np.concatenate(
        [
            targets_on(t_density, ics[:FITNESS_DENSITY_ICS]),
            targets_on(t_logical, ics[FITNESS_DENSITY_ICS:]),
        ]
    )
    return ics, want_on


def fitness_many(
    tables: np.ndarray,
    kind: str,
    n_cells: int,
    master_seed: int,
    t_max: int | None = None,
) -> np.ndarray:
    """Combined density+logical fitness for a (G, 128) stack of rule tables.

    Every table faces the same 100 ICs (keyed by master_seed): 50
    uniform-density ICs judged as the density task and 50 biased ICs
    judged as the logical task.  Returns the fraction correct per table.
    """
    if kind not in ("and", "or"):
        raise ValueError(f"fitness combines density with a logical task, not {kind!r}")
    tables = np.ascontiguousarray(tables, dtype=np.uint8)
    if tables.ndim != 2 or tables.shape[1] != 128:
        raise ValueError("tables must have shape (G, 128)")
    budget = default_t_max(n_cells) if t_max is None else t_max
    ics, want_on = _fitness_sample(kind, n_cells, master_seed)
    planes, valid = ensemble.pack(ics)
    g = tables.shape[0]
    grouped = np.repeat(planes[None], g, axis=0)
    final = ensemble.run_ensemble(tables, grouped, valid, budget)
    allon = ensemble.unpack_lane_bits(np.bitwise_and.reduce(final, axis=-2), ics.shape[0])
    anyon = ensemble.unpack_lane_bits(np.bitwise_or.reduce(final, axis=-2), ics.shape[0])
    correct = np.where(want_on[None, :], allon, ~anyon)
    return correct.mean(axis=1)


def fitness(
    rule: RuleTable,
    kind: str,
    n_cells: int,
    master_seed: int,
    t_max: int | None = None,
) -> float:
    """Combined fitness of a single rule (see :func:`fitness_many`)."""
    return float(fitness_many(rule.outputs[None], kind, n_cells, master_seed, t_max)[0])
