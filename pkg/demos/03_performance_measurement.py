"""
Measuring unbiased performance
==============================

Performance on a task is the fraction of random initial configurations the
rule classifies correctly.  The evaluator packs 64 lattices into each
machine word, so scoring thousands of starts takes seconds.  Here we score
the whole stored catalog at a reduced sample size and compare against the
reference values (measured at 10^5 samples; expect agreement to a couple
of points at 2000).
"""

import time

from calab import benchmarks, tasks

SAMPLES = 2000
SEED = 2026

print(f"{SAMPLES} unbiased starts per cell, N=149, seed {SEED}\n")
print(f"{'rule':8s} {'task':8s} {'measured':>8s} {'reference':>9s} {'delta':>7s}")

t0 = time.time()
for b in benchmarks.BENCHMARKS:
    for kind in tasks.TASK_KINDS:
        task = tasks.make_task(kind, 149)
        rep = tasks.evaluate_performance(b.rule, task, "unbiased", SAMPLES, master_seed=SEED)
        ref = b.reference[(kind, 149)]
        print(f"{b.name:8s} {kind:8s} {rep.p_hat:8.4f} {ref:9.3f} {rep.p_hat - ref:+7.4f}")

print(f"\n24 cells in {time.time() - t0:.1f}s")

# performance depends on the start distribution: i.i.d. fair coins
# concentrate density near 1/2 (the hard cases), while uniform-density
# starts cover easy extremes too, so the same rule scores much higher
rule = benchmarks.BY_NAME["dens-b"].rule
task = tasks.make_task("density", 149)
for dist in ("unbiased", "uniform-density"):
    rep = tasks.evaluate_performance(rule, task, dist, SAMPLES, master_seed=SEED)
    print(f"dens-b density, {dist:15s}: {rep.p_hat:.4f}")
