"""Task semantics, IC generators, and Monte-Carlo evaluation."""

import numpy as np
import pytest

from calab import benchmarks, tasks
from calab.rng import substream

DENS = benchmarks.BY_NAME["dens-b"].rule


def brute_target(kind: str, ic) -> int:
    """Adjudication-target oracle via plain Python counting."""
    bits = [int(v) for v in ic]
    n = len(bits)
    maj = lambda xs: int(sum(xs) > len(xs) / 2)  # noqa: E731
    if kind == "density":
        return maj(bits)
    h = (n - 1) // 2
    b1, b2 = maj(bits[:h]), maj(bits[h + 1 :])
    return int(b1 and b2) if kind == "and" else int(b1 or b2)


# --- task plumbing -------------------------------------------------------------

def test_task_spec_validation():
    with pytest.raises(ValueError, match="odd"):
        tasks.make_task("density", 10)
    with pytest.raises(ValueError, match="unknown task"):
        tasks.make_task("xor", 9)
    with pytest.raises(ValueError, match=">= 3"):
        tasks.make_task("and", 1)
    assert tasks.make_task("density", 149).t_max == 320


def test_majority_is_strict_and_rejects_empty():
    assert tasks.majority([1, 1, 0]) == 1
    assert tasks.majority([1, 0, 0]) == 0
    assert tasks.majority([1, 1, 0, 0]) == 0  # ties break OFF
    with pytest.raises(ValueError):
        tasks.majority([])


def test_extract_bits_ignores_center_cell():
    t = tasks.make_task("and", 9)
    ic = np.array([1, 1, 1, 0, 0, 0, 0, 1, 1], dtype=np.uint8)
    assert tasks.extract_bits(ic, t) == (1, 0)
    flipped = ic.copy()
    flipped[4] ^= 1  # center cell
    assert tasks.extract_bits(flipped, t) == (1, 0)


def test_target_state_matches_brute_oracle():
    rng = np.random.default_rng(31)
    for kind in tasks.TASK_KINDS:
        t = tasks.make_task(kind, 21)
        for _ in range(300):
            ic = rng.integers(0, 2, 21, dtype=np.uint8)
            assert tasks.target_state(t, ic) == brute_target(kind, ic)
        batch = rng.integers(0, 2, (64, 21), dtype=np.uint8)
        want = tasks.targets_on(t, batch)
        assert want.tolist() == [bool(brute_target(kind, ic)) for ic in batch]


# --- IC generators --------------------------------------------------------------

def test_unbiased_generator_statistics():
    ics = np.stack([tasks.gen_unbiased(149, substream(1, i)) for i in range(2000)])
    assert abs(ics.mean() - 0.5) < 0.005
    maj_on = ics.sum(axis=1) * 2 > 149
    assert abs(maj_on.mean() - 0.5) < 0.04


def test_uniform_density_generator_covers_all_counts():
    n = 29
    counts = [int(tasks.gen_uniform_density(n, substream(2, i)).sum()) for i in range(3000)]
    hist = np.bincount(counts, minlength=n + 1)
    assert hist.min() > 0  # every ON-count occurs
    assert abs(np.mean(counts) - n / 2) < 0.5


@pytest.mark.parametrize("kind", ["and", "or"])
def test_biased_generator_halves_are_strict_and_exception_rate_is_half(kind):
    n, trials = 49, 3000
    t = tasks.make_task(kind, n)
    h = t.half
    exception = (1, 1) if kind == "and" else (0, 0)
    hits = 0
    for i in range(trials):
        ic = tasks.gen_logical_biased(kind, n, substream(3, i))
        left, right = int(ic[:h].sum()), int(ic[h + 1 :].sum())
        assert left * 2 != h and right * 2 != h  # majorities never tie
        if tasks.extract_bits(ic, t) == exception:
            hits += 1
    assert abs(hits / trials - 0.5) < 0.02


def test_biased_generator_rejects_density_task():
    with pytest.raises(ValueError):
        tasks.gen_logical_biased("density", 9, substream(4, 0))
    with pytest.raises(ValueError):
        tasks.sample_ic("biased", tasks.make_task("density", 9), substream(4, 0))


# --- adjudication and evaluation --------------------------------------------------

def test_adjudicate_agrees_with_packed_evaluator():
    t = tasks.make_task("or", 35, 90)
    ics = np.stack([tasks.sample_ic("unbiased", t, substream(5, i)) for i in range(96)])
    from calab import ensemble

    allon, alloff = ensemble.run_words(DENS, ics, t.t_max)
    packed = np.where(tasks.targets_on(t, ics), allon, alloff)
    scalar = np.array([tasks.adjudicate(DENS, ic, t) for ic in ics])
    assert np.array_equal(packed, scalar)


def test_zero_rule_density_performance_is_half():
    # the zero rule maps everything to all-OFF, so it is correct exactly
    # when the majority is OFF: probability 1/2 by symmetry at odd n
    from calab.rules import parse_hex

    zero = parse_hex("0" * 32)
    t = tasks.make_task("density", 149, 320)
    rep = tasks.evaluate_performance(zero, t, "unbiased", 8000, master_seed=6)
    assert abs(rep.p_hat - 0.5) < 0.02


def test_evaluate_performance_is_chunk_and_worker_invariant():
    t = tasks.make_task("density", 99, 120)
    a = tasks.evaluate_performance(DENS, t, "unbiased", 700, master_seed=7, workers=1, chunk_size=4096)
    b = tasks.evaluate_performance(DENS, t, "unbiased", 700, master_seed=7, workers=4, chunk_size=128)
    c = tasks.evaluate_performance(DENS, t, "unbiased", 700, master_seed=7, workers=2, chunk_size=333)
    assert a.correct == b.correct == c.correct
    assert a.csv_row() == b.csv_row() == c.csv_row()


def test_report_csv_format(tmp_path):
    t = tasks.make_task("or", 9, 15)
    rep = tasks.evaluate_performance(DENS, t, "biased", 50, master_seed=8)
    assert rep.csv_row().startswith(f"{benchmarks.BY_NAME['dens-b'].hex},or,9,15,biased,50,")
    out = tmp_path / "r.csv"
    tasks.write_reports_csv(out, [rep])
    lines = out.read_text().splitlines()
    assert lines[0] == tasks.REPORT_HEADER
    assert len(lines) == 2
    assert 0.0 <= rep.p_hat <= 1.0 and rep.correct <= rep.samples


# --- combined fitness -------------------------------------------------------------

def test_fitness_many_matches_single_fitness():
    tables = np.stack([b.rule.outputs for b in benchmarks.BENCHMARKS[:3]])
    many = tasks.fitness_many(tables, "and", 49, master_seed=9, t_max=60)
    for i, b in enumerate(benchmarks.BENCHMARKS[:3]):
        assert many[i] == tasks.fitness(b.rule, "and", 49, master_seed=9, t_max=60)


def test_fitness_matches_scalar_adjudication():
    rule = benchmarks.BY_NAME["multi-b"].rule
    n, seed, t_max = 35, 10, 80
    got = tasks.fitness(rule, "and", n, master_seed=seed, t_max=t_max)
    t_dens = tasks.make_task("density", n, t_max)
    t_and = tasks.make_task("and", n, t_max)
    correct = 0
    for i in range(50):
        ic = tasks.gen_uniform_density(n, substream(seed, i))
        correct += tasks.adjudicate(rule, ic, t_dens)
    for i in range(50, 100):
        ic = tasks.gen_logical_biased("and", n, substream(seed, i))
        correct += tasks.adjudicate(rule, ic, t_and)
    assert got == correct / 100
