"""Domain filtering, boundary censusing, and catalog files."""

import numpy as np
import pytest

from calab import benchmarks, engine, particles, tasks
from calab.rng import substream

CAT = particles.default_catalog()


def two_seam_fixture():
    """Two short defects drift together, coalesce, and vanish.

    Rows 0-8: a pair of 3-cell ON blocks inside a quiescent ring, closing
    in symmetrically.  Row 9: a single sub-threshold block overlapping
    both previous boundary segments.  Row 10: pure quiescent ring.
    """
    n = 64
    rows = np.zeros((11, n), dtype=np.uint8)
    for t in range(9):
        rows[t, 4 + 2 * t : 7 + 2 * t] = 1
        rows[t, 52 - 2 * t : 55 - 2 * t] = 1
    rows[9, 27:32] = 1
    return rows


# --- domains and catalogs ---------------------------------------------------------

def test_domain_validation():
    with pytest.raises(ValueError, match="min_run"):
        particles.Domain("wide", np.zeros((1, 9), dtype=np.uint8), min_run=7)
    with pytest.raises(ValueError, match="0 or 1"):
        particles.Domain("bad", np.full((1, 1), 2, dtype=np.uint8))
    d = particles.Domain("ok", np.array([[0, 1], [1, 0]], dtype=np.uint8))
    assert d.spatial_period == 2 and d.temporal_period == 2


def test_catalog_file_round_trip(tmp_path):
    path = tmp_path / "cat.txt"
    particles.save_catalog(path, CAT)
    assert particles.load_catalog(path) == CAT


def test_catalog_parse_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "cat.txt"
    path.write_text(
        "# comment\n"
        "zeros 1 1 7 0\n"
        "short 2 2 7 01\n"  # missing a tile row
        "wrong 2 1 7 012\n"  # tile row is not p binary digits
    )
    with pytest.raises(ValueError) as exc:
        particles.load_catalog(path)
    msg = str(exc.value)
    assert "line 3" in msg and "line 4" in msg and "line 2" not in msg


# --- labeling ---------------------------------------------------------------------

def test_pure_domains_have_zero_boundary():
    assert particles.label_sites(np.zeros((7, 30), dtype=np.uint8), CAT).boundary_fraction == 0.0
    assert particles.label_sites(np.ones((7, 30), dtype=np.uint8), CAT).boundary_fraction == 0.0
    checker = np.tile(np.array([[0, 1] * 15, [1, 0] * 15], dtype=np.uint8), (4, 1))
    assert particles.label_sites(checker, CAT).boundary_fraction == 0.0


def test_half_and_half_ring_has_two_seams():
    cat4 = (
        particles.Domain("zeros", np.array([[0]], dtype=np.uint8), min_run=4),
        particles.Domain("ones", np.array([[1]], dtype=np.uint8), min_run=4),
    )
    row = np.array([[0] * 10 + [1] * 10], dtype=np.uint8)
    fd = particles.label_sites(row, cat4)
    segs = particles.cyclic_runs(fd.boundary_mask[0])
    assert len(segs) == 2


def test_partition_property_on_arbitrary_diagrams():
    rng = np.random.default_rng(41)
    for _ in range(20):
        dia = rng.integers(0, 2, (10, 40), dtype=np.uint8)
        fd = particles.label_sites(dia, CAT)
        labeled = (fd.labels >= 0).sum() + fd.boundary_mask.sum()
        assert labeled == dia.size
        assert fd.labels.min() >= particles.BOUNDARY
        assert fd.labels.max() < len(CAT)


def test_shift_consistency():
    rows = two_seam_fixture()
    base = particles.label_sites(rows, CAT).labels
    for s in (1, 13, 40):
        rolled = particles.label_sites(np.roll(rows, s, axis=1), CAT).labels
        assert np.array_equal(rolled, np.roll(base, s, axis=1))


def test_mixed_content_labels_each_region():
    row = np.array([[0, 1] * 10 + [1] * 7], dtype=np.uint8)
    fd = particles.label_sites(row, CAT)
    names = {CAT[i].name for i in fd.labels[0] if i >= 0}
    assert names == {"checker", "ones"}


def test_equal_claims_resolve_by_catalog_order():
    # two domains with the same content always produce equal-length runs,
    # so the tie falls to whichever is listed first
    alpha = particles.Domain("alpha", np.array([[0]], dtype=np.uint8))
    beta = particles.Domain("beta", np.array([[0]], dtype=np.uint8))
    dia = np.zeros((2, 15), dtype=np.uint8)
    assert (particles.label_sites(dia, (alpha, beta)).labels == 0).all()
    assert (particles.label_sites(dia, (beta, alpha)).labels == 0).all()


def test_text_grid_uses_initials_and_star():
    fd = particles.label_sites(two_seam_fixture(), CAT)
    grid = fd.text_grid().splitlines()
    assert set("".join(grid)) <= {"z", "o", "c", "*"}
    assert grid[10] == "z" * 64  # final row is pure quiescent domain


def test_empty_catalog_rejected():
    with pytest.raises(ValueError, match="catalog"):
        particles.label_sites(np.zeros((2, 10), dtype=np.uint8), ())


# --- census ------------------------------------------------------------------------

def test_pure_domain_census_is_silent():
    fd = particles.label_sites(np.zeros((6, 20), dtype=np.uint8), CAT)
    cen = particles.census(fd)
    assert cen.events == ()
    assert cen.segment_counts == (0,) * 6


def test_two_seam_fixture_two_segments_one_annihilation():
    fd = particles.label_sites(two_seam_fixture(), CAT)
    cen = particles.census(fd)
    assert cen.segment_counts[0] == 2
    assert cen.final_segment_count == 0
    kinds = [e.kind for e in cen.events]
    assert kinds.count("annihilate") == 1
    annihilate = [e for e in cen.events if e.kind == "annihilate"][0]
    assert annihilate.time == 10  # first all-quiescent row
    assert annihilate.after == ()


def test_appear_and_split_events():
    n = 40
    rows = np.zeros((3, n), dtype=np.uint8)
    rows[1, 10:13] = 1  # defect appears from nothing
    # ... and splits into two defects far enough apart that the quiescent
    # gap between them is labelable (>= min_run), separating the segments
    rows[2, 4:7] = 1
    rows[2, 18:21] = 1
    cen = particles.census(particles.label_sites(rows, CAT))
    kinds = [e.kind for e in cen.events]
    assert kinds == ["appear", "split"]
    assert cen.segment_counts == (0, 1, 2)


def test_segment_counts_change_only_at_events():
    fd = particles.label_sites(two_seam_fixture(), CAT)
    cen = particles.census(fd)
    event_times = {e.time for e in cen.events}
    for t in range(1, len(cen.segment_counts)):
        if cen.segment_counts[t] != cen.segment_counts[t - 1]:
            assert t in event_times


def test_correct_density_run_ends_with_zero_segments():
    rule = benchmarks.BY_NAME["dens-b"].rule
    t = tasks.make_task("density", 149, 320)
    hits = 0
    for i in range(4):
        ic = tasks.gen_unbiased(149, substream(4242, i))
        traj = engine.run(rule, ic, t.t_max)
        dia = engine.space_time(traj, t.t_max)
        cen = particles.census(particles.label_sites(dia, CAT))
        if tasks.adjudicate(rule, ic, t):
            hits += 1
            assert cen.final_segment_count == 0
    assert hits > 0  # the property above was actually exercised
