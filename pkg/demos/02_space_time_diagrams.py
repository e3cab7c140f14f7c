"""
Space-time diagrams of a density classifier
===========================================

Run a good density rule from random starts and stack the lattice rows over
time.  The rule erases local noise into uniform regions whose boundaries
drift, collide, and finally leave the whole ring in one state — the
classification verdict.  Diagrams land in demos/out/ as PBM images, a PNG
panel, and plain-text grids.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from calab import benchmarks, engine, pbm, tasks
from calab.rng import substream

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

rule = benchmarks.BY_NAME["dens-b"].rule
n = 149
t_max = engine.default_t_max(n)  # 2n + 22 steps, enough for signals to cross

fig, axes = plt.subplots(1, 3, figsize=(12, 5), sharey=True)
for i, ax in enumerate(axes):
    ic = tasks.gen_unbiased(n, substream(7, i))
    traj = engine.run(rule, ic, t_max)
    dia = engine.space_time(traj, t_max)

    verdict = "all-ON" if traj.final.all() else "all-OFF" if not traj.final.any() else "unsettled"
    majority = "ON" if tasks.majority(ic) else "OFF"
    correct = verdict == f"all-{majority}"
    print(f"start {i}: density {ic.mean():.3f}, majority {majority}, "
          f"settled to {verdict} at step {traj.halted_at} -> {'correct' if correct else 'wrong'}")

    pbm.write_pbm(OUT / f"density_run_{i}.pbm", dia)
    ax.imshow(dia, cmap="binary", interpolation="nearest", aspect="auto")
    ax.set_title(f"density {ic.mean():.3f} -> {verdict}")
    ax.set_xlabel("cell")
axes[0].set_ylabel("time step")
fig.tight_layout()
fig.savefig(OUT / "density_runs.png", dpi=120)
print(f"\nwrote {OUT}/density_run_*.pbm and density_runs.png")

# the same picture works in a terminal: a small lattice as text rows
small = engine.run(rule, tasks.gen_unbiased(59, substream(7, 99)), 40)
lines = ["".join("#" if c else "." for c in row) for row in small.states]
(OUT / "small_run.txt").write_text("\n".join(lines) + "\n")
print(f"\nfirst 12 rows of a 59-cell run ({OUT}/small_run.txt has all of it):")
print("\n".join(lines[:12]))
