"""Regular-domain filtering of space-time diagrams and boundary censusing.

A *domain* is a spatially and temporally periodic pattern (a small tile)
that fills regions of a space-time diagram.  Filtering labels every site
with the domain whose pattern it sits inside, or marks it BOUNDARY; the
boundary sites form the propagating structures that carry information
between regions.  The census tracks maximal boundary segments from row to
row and logs the steps where segments appear, annihilate, merge, or
split.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .rules import NEIGHBORHOOD_CELLS

BOUNDARY = -1
BOUNDARY_CHAR = "*"
DEFAULT_MIN_RUN = NEIGHBORHOOD_CELLS  # a shorter run cannot shield its interior


@dataclass(frozen=True, eq=False)
class Domain:
    """A periodic pattern: tile row ``t % tau`` tiles row t with period p."""

    name: str
    tile: np.ndarray  # (tau, p) uint8, values 0/1
    min_run: int = DEFAULT_MIN_RUN  # cells a match must span to count

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return (self.name == other.name and self.min_run == other.min_run
                and self.tile.shape == other.tile.shape
                and np.array_equal(self.tile, other.tile))

    def __hash__(self):
        return hash((self.name, self.min_run, self.tile.tobytes()))

    def __post_init__(self):
        arr = np.ascontiguousarray(self.tile, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"domain {self.name!r}: tile must be (tau >= 1, p >= 1)")
        if not np.all(arr <= 1):
            raise ValueError(f"domain {self.name!r}: tile values must be 0 or 1")
        if not self.name or any(c.isspace() or c == "#" for c in self.name):
            raise ValueError(f"domain name {self.name!r} must be non-blank, no spaces or '#'")
        if self.min_run < arr.shape[1]:
            raise ValueError(f"domain {self.name!r}: min_run must be >= spatial period")
        arr.setflags(write=False)
        object.__setattr__(self, "tile", arr)

    @property
    def spatial_period(self) -> int:
        return self.tile.shape[1]

    @property
    def temporal_period(self) -> int:
        return self.tile.shape[0]


def default_catalog(min_run: int = DEFAULT_MIN_RUN) -> tuple[Domain, ...]:
    """The visually evident domains of this rule family: quiescent, saturated, checkerboard."""
    return (
        Domain("zeros", np.array([[0]], dtype=np.uint8), min_run),
        Domain("ones", np.array([[1]], dtype=np.uint8), min_run),
        Domain("checker", np.array([[0, 1], [1, 0]], dtype=np.uint8), min_run),
    )


DEFAULT_CATALOG = default_catalog()


def load_catalog(path) -> tuple[Domain, ...]:
    """Parse a catalog file: lines of `name p tau L tile-rows...`, '#' comments."""
    domains = []
    errors = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if len(fields) < 5:
                raise ValueError("expected `name p tau L tile-rows...`")
            name = fields[0]
            p, tau, min_run = (int(x) for x in fields[1:4])
            rows = fields[4:]
            if len(rows) != tau:
                raise ValueError(f"expected {tau} tile rows, got {len(rows)}")
            bad = [r for r in rows if len(r) != p or set(r) - {"0", "1"}]
            if bad:
                raise ValueError(f"tile rows must be {p} binary digits, got {bad[0]!r}")
            tile = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)
            domains.append(Domain(name, tile, min_run))
        except ValueError as exc:
            errors.append(f"line {lineno}: {exc}")
    if errors:
        raise ValueError("\n".join(errors))
    return tuple(domains)


def save_catalog(path, domains) -> None:
    lines = []
    for d in domains:
        rows = ["".join(str(int(v)) for v in row) for row in d.tile]
        lines.append(
            " ".join([d.name, str(d.spatial_period), str(d.temporal_period), str(d.min_run), *rows])
        )
    Path(path).write_text("\n".join(lines) + "\n")


def cyclic_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal cyclic runs of True as (start, length); a full ring is one run."""
    n = mask.size
    if n == 0 or not mask.any():
        return []
    if mask.all():
        return [(0, n)]
    m2 = np.concatenate([mask, mask]).astype(np.int8)
    edges = np.diff(np.concatenate([[0], m2, [0]]))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    runs = []
    for s, e in zip(starts, ends):
        if s < n and not mask[(s - 1) % n]:
            runs.append((int(s), int(e - s)))
    return runs


@dataclass(frozen=True)
class FilteredDiagram:
    """Per-site labels over a diagram: a catalog index, or BOUNDARY (-1)."""

    catalog: tuple[Domain, ...]
    labels: np.ndarray  # (rows, n_cells) int16

    @property
    def n_cells(self) -> int:
        return self.labels.shape[1]

    @property
    def boundary_mask(self) -> np.ndarray:
        return self.labels == BOUNDARY

    @property
    def boundary_fraction(self) -> float:
        return float(self.boundary_mask.mean())

    def text_grid(self) -> str:
        """One character per site: the domain name's first letter, '*' for boundary."""
        chars = np.array([BOUNDARY_CHAR] + [d.name[0] for d in self.catalog])
        return "\n".join("".join(row) for row in chars[self.labels + 1]) + "\n"


def _diagram_states(traj) -> np.ndarray:
    states = np.asarray(getattr(traj, "states", traj), dtype=np.uint8)
    if states.ndim != 2:
        raise ValueError("expected a (rows, n_cells) diagram")
    return states


def label_sites(traj, catalog=DEFAULT_CATALOG) -> FilteredDiagram:
    """Label every site of a trajectory (or raw diagram) against the catalog.

    A site belongs to domain D iff it sits in the interior of a maximal
    cyclic run of at least D.min_run cells that all match D's tile row
    ``t % tau`` at one spatial phase.  Interior means at least
    ``(min_run - 1) // 2`` cells away from each run end, so the pattern
    shields the site on both sides; a run closing the whole ring has no
    ends and is interior throughout.  The seam cells between two abutting
    domains therefore stay BOUNDARY.  Competing claims go to the longest
    run; equal-length claims go to the domain listed first.
    """
    catalog = tuple(catalog)
    if not catalog:
        raise ValueError("domain catalog is empty")
    states = _diagram_states(traj)
    rows, n = states.shape
    labels = np.full((rows, n), BOUNDARY, dtype=np.int16)
    best = np.zeros(n, dtype=np.int64)
    x = np.arange(n)
    for t in range(rows):
        row = states[t]
        best[:] = 0
        for d_idx, dom in enumerate(catalog):
            tile_row = dom.tile[t % dom.temporal_period]
            p = dom.spatial_period
            for phase in range(p):
                match = row == tile_row[(x + phase) % p]
                for start, length in cyclic_runs(match):
                    if length < dom.min_run:
                        continue
                    trim = 0 if length == n else (dom.min_run - 1) // 2
                    pos = (start + trim + np.arange(length - 2 * trim)) % n
                    claim = pos[length > best[pos]]
                    labels[t, claim] = d_idx
                    best[claim] = length
    return FilteredDiagram(catalog=catalog, labels=labels)


@dataclass(frozen=True)
class ParticleEvent:
    """A local change in the set of boundary segments between two rows."""

    time: int  # row index where the change is first visible
    kind: str  # appear | annihilate | merge | split
    before: tuple[tuple[int, int], ...]  # (start, length) segments at time-1
    after: tuple[tuple[int, int], ...]  # (start, length) segments at time


@dataclass(frozen=True)
class CensusResult:
    events: tuple[ParticleEvent, ...]
    segment_counts: tuple[int, ...]  # per row
    segments: tuple[tuple[tuple[int, int], ...], ...]  # per row

    @property
    def final_segment_count(self) -> int:
        return self.segment_counts[-1]


def _segment_cover(segments, n: int) -> np.ndarray:
    cover = np.full(n, -1, dtype=np.int64)
    for i, (start, length) in enumerate(segments):
        cover[(start + np.arange(length)) % n] = i
    return cover


def census(fd: FilteredDiagram) -> CensusResult:
    """Track boundary segments row to row and log segment-count changes.

    Segments of consecutive rows are linked when they share a column;
    each connected component of links is judged on its own: 0 -> 1 is an
    appearance, k -> 0 an annihilation, many -> fewer a merge, fewer ->
    many a split.  Balanced components are continuations, not events.
    """
    mask = fd.boundary_mask
    rows, n = mask.shape
    per_row = [tuple(cyclic_runs(mask[t])) for t in range(rows)]
    events = []
    for t in range(1, rows):
        prev, cur = per_row[t - 1], per_row[t]
        if not prev and not cur:
            continue
        # union-find over segments of both rows: prev i -> node i, cur j -> node len(prev)+j
        parent = list(range(len(prev) + len(cur)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        pc, cc = _segment_cover(prev, n), _segment_cover(cur, n)
        both = (pc >= 0) & (cc >= 0)
        for i, j in set(zip(pc[both].tolist(), cc[both].tolist())):
            ri, rj = find(i), find(len(prev) + j)
            if ri != rj:
                parent[ri] = rj
        groups: dict[int, tuple[list, list]] = {}
        for i in range(len(prev)):
            groups.setdefault(find(i), ([], []))[0].append(prev[i])
        for j in range(len(cur)):
            groups.setdefault(find(len(prev) + j), ([], []))[1].append(cur[j])
        for before, after in groups.values():
            a, b = len(before), len(after)
            if a == b:
                continue
            if a == 0:
                kind = "appear"
            elif b == 0:
                kind = "annihilate"
            elif a > b:
                kind = "merge"
            else:
                kind = "split"
            events.append(
                ParticleEvent(time=t, kind=kind, before=tuple(before), after=tuple(after))
            )
    return CensusResult(
        events=tuple(events),
        segment_counts=tuple(len(s) for s in per_row),
        segments=tuple(per_row),
    )
