"""Benchmark rules with accepted reference performances.

Eight widely circulated radius-3 rules anchor the library's regression
suite: four strong density classifiers ("dens-a".."dens-d") and four
rules bred from them to handle a logical task alongside density
("multi-a".."multi-d").  Reference values are the fraction of unbiased
random ICs classified correctly at lattice sizes 149, 599, and 999; they
are used to sanity-check the engine and to annotate evaluation reports.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rules import RuleTable, parse_hex


@dataclass(frozen=True)
class Benchmark:
    """A named rule plus its reference performance grid."""

    name: str
    hex: str
    # reference[(task, n_cells)] -> accepted fraction correct
    reference: dict

    @property
    def rule(self) -> RuleTable:
        return parse_hex(self.hex)


def _grid(dens, and_, or_):
    sizes = (149, 599, 999)
    ref = {}
    for task, vals in (("density", dens), ("and", and_), ("or", or_)):
        ref.update({(task, n): v for n, v in zip(sizes, vals)})
    return ref


BENCHMARKS: tuple[Benchmark, ...] = (
    Benchmark(
        "dens-a",
        "0504058705000F77037755837BFFB77F",
        _grid((0.773, 0.725, 0.707), (0.713, 0.73, 0.738), (0.664, 0.578, 0.548)),
    ),
    Benchmark(
        "dens-b",
        "000F730F001FFF0F000FFF0F001FFF1F",
        _grid((0.823, 0.777, 0.763), (0.68, 0.684, 0.68), (0.733, 0.686, 0.675)),
    ),
    Benchmark(
        "dens-c",
        "050055050500550555FF55FF55FF55FF",
        _grid((0.823, 0.766, 0.73), (0.679, 0.674, 0.644), (0.727, 0.671, 0.642)),
    ),
    Benchmark(
        "dens-d",
        "0760437B0700413507600F7F47F577FF",
        _grid((0.833, 0.788, 0.771), (0.656, 0.642, 0.62), (0.747, 0.736, 0.743)),
    ),
    Benchmark(
        "multi-a",
        "0057005D005F005D085FFF7F405FFF5F",
        _grid((0.78, 0.705, 0.668), (0.77, 0.783, 0.784), (0.634, 0.501, 0.453)),
    ),
    Benchmark(
        "multi-b",
        "005F1053405F045F005FFD5F005DFF5F",
        _grid((0.635, 0.510, 0.503), (0.84, 0.76, 0.754), (0.441, 0.261, 0.254)),
    ),
    Benchmark(
        "multi-c",
        "005F005F005F005F005FFF6F005FFF5F",
        _grid((0.805, 0.755, 0.737), (0.624, 0.605, 0.581), (0.756, 0.738, 0.743)),
    ),
    Benchmark(
        "multi-d",
        "0504070705002573077755B37BFFF77F",
        _grid((0.745, 0.65, 0.61), (0.501, 0.421, 0.371), (0.784, 0.793, 0.785)),
    ),
)

BY_NAME = {b.name: b for b in BENCHMARKS}
BY_HEX = {b.hex: b for b in BENCHMARKS}

DENSITY_SEEDS = tuple(b for b in BENCHMARKS if b.name.startswith("dens-"))
MULTITASK_RULES = tuple(b for b in BENCHMARKS if b.name.startswith("multi-"))


def reference_value(rule_hex: str, task: str, n_cells: int) -> float | None:
    """Accepted performance for a benchmark rule, or None if unlisted."""
    b = BY_HEX.get(rule_hex.upper())
    if b is None:
        return None
    return b.reference.get((task, n_cells))
