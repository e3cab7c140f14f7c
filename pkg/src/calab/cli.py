"""Command-line surface: simulate, evaluate, evolve, filter, report.

Every command writes a JSON manifest next to its primary output holding
the fully resolved configuration, so any artifact can be regenerated
bit-exactly from its manifest.  Seeds are explicit flags — there is no
wall-clock fallback — and exit status is 0 iff every requested output was
written.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, benchmarks, engine, evolve, particles, pbm, tasks
from .rng import derive_seed, substream
from .rules import RuleFormatError, format_hex, load_rule_file, parse_hex, save_rule_file


class CliError(Exception):
    """User-facing command failure (bad flags, unreadable inputs)."""


# --- shared plumbing -------------------------------------------------------

def _write_manifest(primary_out, subcommand: str, config: dict, outputs: list, results: dict | None = None):
    manifest = {
        "tool": "calab",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "outputs": [str(p) for p in outputs],
    }
    if results is not None:
        manifest["results"] = results
    path = Path(str(primary_out) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def parse_ic_spec(spec: str, n_cells: int, seed: int | None) -> np.ndarray:
    """Build an initial configuration from a CLI spec string.

    Forms: ``all-on``, ``all-off``, ``unbiased``, ``density:<p>`` (exact
    ON-count round(p*n), random placement), ``bits:<01 string>``.  The
    random forms require --seed.
    """
    if spec == "all-on":
        return np.ones(n_cells, dtype=np.uint8)
    if spec == "all-off":
        return np.zeros(n_cells, dtype=np.uint8)
    if spec.startswith("bits:"):
        digits = spec[len("bits:") :]
        if len(digits) != n_cells or set(digits) - {"0", "1"}:
            raise CliError(f"bits: spec needs exactly {n_cells} binary digits")
        return np.frombuffer(digits.encode(), dtype=np.uint8) - ord("0")
    if spec == "unbiased" or spec.startswith("density:"):
        if seed is None:
            raise CliError(f"--seed is required for ic spec {spec!r}")
        rng = substream(seed, 0)
        if spec == "unbiased":
            return tasks.gen_unbiased(n_cells, rng)
        try:
            p = float(spec[len("density:") :])
        except ValueError as exc:
            raise CliError(f"bad density value in {spec!r}") from exc
        if not 0.0 <= p <= 1.0:
            raise CliError("density must be in [0, 1]")
        ic = np.zeros(n_cells, dtype=np.uint8)
        k = round(p * n_cells)
        ic[rng.permutation(n_cells)[:k]] = 1
        return ic
    raise CliError(
        f"unknown ic spec {spec!r} (use all-on, all-off, unbiased, density:<p>, bits:<01...>)"
    )


def _parse_rule(hexstr: str):
    try:
        return parse_hex(hexstr)
    except RuleFormatError as exc:
        raise CliError(f"bad rule: {exc}") from exc


def _load_rules(path):
    try:
        return load_rule_file(path)
    except OSError as exc:
        raise CliError(f"cannot read rules file: {exc}") from exc
    except RuleFormatError as exc:
        raise CliError(f"{path}:\n{exc}") from exc


# --- simulate --------------------------------------------------------------

def cmd_simulate(args) -> int:
    rule = _parse_rule(args.rule)
    t_max = engine.default_t_max(args.n_cells) if args.t_max is None else args.t_max
    ic = parse_ic_spec(args.ic, args.n_cells, args.seed)
    traj = engine.run(rule, ic, t_max)
    diagram = engine.space_time(traj, t_max)
    pbm.write_pbm(args.out, diagram)
    outputs = [args.out]
    if args.text_out:
        grid = "\n".join("".join("#" if v else "." for v in row) for row in diagram) + "\n"
        Path(args.text_out).write_text(grid)
        outputs.append(args.text_out)
    config = {
        "rule": format_hex(rule),
        "n_cells": args.n_cells,
        "t_max": t_max,
        "ic": args.ic,
        "seed": args.seed,
    }
    outputs.append(_write_manifest(args.out, "simulate", config, outputs))
    reason = traj.halt_reason if traj.halted_at is not None else engine.HALT_BUDGET
    when = traj.halted_at if traj.halted_at is not None else t_max
    print(f"wrote {args.out}: {t_max + 1} rows x {args.n_cells} cells ({reason} at t={when})")
    return 0


# --- evaluate ---------------------------------------------------------------

def cmd_evaluate(args) -> int:
    rule_list = _load_rules(args.rules)
    kinds = [k.strip() for k in args.tasks.split(",") if k.strip()]
    for k in kinds:
        if k not in tasks.TASK_KINDS:
            raise CliError(f"unknown task {k!r}")
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if args.distribution == "biased" and "density" in kinds:
        raise CliError("biased ICs are defined only for logical tasks")
    reports = []
    for rule in rule_list:
        for kind in kinds:
            for n in sizes:
                t_max = engine.default_t_max(n) if args.t_max is None else args.t_max
                spec = tasks.make_task(kind, n, t_max)
                rep = tasks.evaluate_performance(
                    rule,
                    spec,
                    args.distribution,
                    args.samples,
                    master_seed=args.seed,
                    workers=args.workers,
                )
                reports.append(rep)
                print(rep.csv_row())
    tasks.write_reports_csv(args.out, reports)
    config = {
        "rules": str(args.rules),
        "rule_hexes": [format_hex(r) for r in rule_list],
        "tasks": kinds,
        "sizes": sizes,
        "samples": args.samples,
        "distribution": args.distribution,
        "t_max": args.t_max,
        "seed": args.seed,
        "workers": args.workers,
    }
    _write_manifest(args.out, "evaluate", config, [args.out])
    return 0


# --- evolve -----------------------------------------------------------------

def cmd_evolve(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "run_log.csv"
    pop_path = out_dir / "population.txt"

    seed_rules = tuple(_load_rules(args.seed_rules)) if args.seed_rules else ()
    try:
        cfg = evolve.GaConfig(
            population_size=args.population,
            elite_count=args.elite,
            mutations_per_child=args.mutations,
            generations=args.generations,
            task=args.task,
            n_cells=args.n_cells,
            t_max=engine.default_t_max(args.n_cells) if args.t_max is None else args.t_max,
            master_seed=args.seed,
            seed_rules=seed_rules,
            fresh_ics_per_generation=not args.fixed_ics,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc

    if args.resume:
        if not pop_path.exists():
            raise CliError(f"--resume: no checkpoint at {pop_path}")
        population, records = evolve.resume_ga(cfg, pop_path, log_path=log_path)
    else:
        population, records = evolve.run_ga(cfg, log_path=log_path, checkpoint_path=pop_path)
    for rec in records:
        print(rec.log_line())
    evolve.append_run_log(log_path, [])  # materialize the header even for 0-record runs
    if cfg.generations == 0:
        save_rule_file(pop_path, population, comment="initial population (no generations run)")

    results = {"generations_recorded": len(records)}
    if records:
        best = records[-1]
        held_out = evolve.held_out_fitness(cfg, [parse_hex(best.best_hex), *cfg.seed_rules])
        results.update(
            {
                "best_hex": best.best_hex,
                "best_training_fitness": best.best_fitness,
                "best_held_out_fitness": held_out[0],
                "seed_held_out_fitness": held_out[1:],
            }
        )
        print(f"best rule {best.best_hex}: held-out fitness {held_out[0]:.4f}")
        if held_out[1:]:
            print(f"seed rules held-out best: {max(held_out[1:]):.4f}")
    config = {
        "population": cfg.population_size,
        "elite": cfg.elite_count,
        "mutations": cfg.mutations_per_child,
        "generations": cfg.generations,
        "task": cfg.task,
        "n_cells": cfg.n_cells,
        "t_max": cfg.t_max,
        "seed": cfg.master_seed,
        "seed_rules": [format_hex(r) for r in cfg.seed_rules],
        "fresh_ics_per_generation": cfg.fresh_ics_per_generation,
        "resume": bool(args.resume),
    }
    _write_manifest(out_dir / "run", "evolve", config, [log_path, pop_path], results)
    return 0


# --- filter -----------------------------------------------------------------

def _event_row(e: particles.ParticleEvent) -> str:
    fmt = lambda segs: ";".join(f"{s}:{ln}" for s, ln in segs)  # noqa: E731
    return f"{e.time},{e.kind},{fmt(e.before)},{fmt(e.after)}"


def cmd_filter(args) -> int:
    if (args.diagram is None) == (args.rule is None):
        raise CliError("give exactly one input: --diagram or --rule")
    if args.diagram:
        try:
            states = pbm.read_pbm(args.diagram)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read diagram: {exc}") from exc
        config_in = {"diagram": str(args.diagram)}
    else:
        if args.n_cells is None:
            raise CliError("--n-cells is required with --rule")
        rule = _parse_rule(args.rule)
        t_max = engine.default_t_max(args.n_cells) if args.t_max is None else args.t_max
        ic = parse_ic_spec(args.ic, args.n_cells, args.seed)
        states = engine.space_time(engine.run(rule, ic, t_max), t_max)
        config_in = {
            "rule": format_hex(rule),
            "n_cells": args.n_cells,
            "t_max": t_max,
            "ic": args.ic,
            "seed": args.seed,
        }
    if args.catalog:
        if args.min_run is not None:
            raise CliError("--min-run applies to the built-in catalog; catalog files set L per domain")
        try:
            catalog = particles.load_catalog(args.catalog)
        except OSError as exc:
            raise CliError(f"cannot read catalog: {exc}") from exc
        except ValueError as exc:
            raise CliError(f"{args.catalog}:\n{exc}") from exc
    else:
        catalog = particles.default_catalog(args.min_run or particles.DEFAULT_MIN_RUN)

    fd = particles.label_sites(states, catalog)
    cen = particles.census(fd)

    stem = str(args.out)
    grid_path, mask_path, events_path = stem + ".grid.txt", stem + ".boundary.pbm", stem + ".events.csv"
    Path(grid_path).write_text(fd.text_grid())
    pbm.write_pbm(mask_path, fd.boundary_mask.astype(np.uint8))
    rows = ["time,kind,before,after"] + [_event_row(e) for e in cen.events]
    Path(events_path).write_text("\n".join(rows) + "\n")

    by_kind = {k: sum(e.kind == k for e in cen.events) for k in ("appear", "annihilate", "merge", "split")}
    results = {
        "boundary_fraction": fd.boundary_fraction,
        "final_segment_count": cen.final_segment_count,
        "events": by_kind,
    }
    config = {**config_in, "catalog": str(args.catalog) if args.catalog else "built-in",
              "domains": [d.name for d in catalog]}
    _write_manifest(stem, "filter", config, [grid_path, mask_path, events_path], results)
    print(
        f"boundary fraction {fd.boundary_fraction:.3f}; final segments {cen.final_segment_count}; "
        + ", ".join(f"{v} {k}" for k, v in by_kind.items() if v)
        or "no events"
    )
    return 0


# --- report -----------------------------------------------------------------

REPORT_COLUMNS = f"{'rule':<32} {'name':<8} {'task':<7} {'n':>5} {'samples':>7} {'p_hat':>6} {'ref':>6} {'delta':>7}"


def _report_lines(csv_text: str) -> list[str]:
    lines = csv_text.splitlines()
    if not lines or lines[0] != tasks.REPORT_HEADER:
        raise CliError(f"row 1: expected header {tasks.REPORT_HEADER!r}")
    out = [REPORT_COLUMNS]
    for rowno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split(",")
        if len(parts) != 9:
            raise CliError(f"row {rowno}: expected 9 fields, got {len(parts)}")
        hexstr, kind, n_s, _t, _dist, samples, _correct, p_s = parts[0], parts[1], parts[2], parts[3], parts[4], parts[5], parts[6], parts[7]
        try:
            n, p_hat = int(n_s), float(p_s)
        except ValueError as exc:
            raise CliError(f"row {rowno}: {exc}") from exc
        bench = benchmarks.BY_HEX.get(hexstr.upper())
        name = bench.name if bench else ""
        ref = benchmarks.reference_value(hexstr, kind, n)
        ref_s = f"{ref:.3f}" if ref is not None else ""
        delta_s = f"{p_hat - ref:+.3f}" if ref is not None else ""
        out.append(
            f"{hexstr:<32} {name:<8} {kind:<7} {n:>5} {samples:>7} {p_hat:>6.3f} {ref_s:>6} {delta_s:>7}"
        )
    return out


def cmd_report(args) -> int:
    try:
        text = Path(args.csv).read_text()
    except OSError as exc:
        raise CliError(f"cannot read csv: {exc}") from exc
    lines = _report_lines(text)
    rendered = "\n".join(lines) + "\n"
    print(rendered, end="")
    if args.out:
        Path(args.out).write_text(rendered)
        _write_manifest(args.out, "report", {"csv": str(args.csv)}, [args.out])
    return 0


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calab",
        description="Laboratory for radius-3 binary cellular automata: "
        "simulate rules, measure task performance, evolve new rules, and "
        "filter space-time diagrams down to their particle structure.",
    )
    parser.add_argument("--version", action="version", version=f"calab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one rule on one IC and write a space-time diagram")
    p.add_argument("--rule", required=True, help="32-digit hex rule")
    p.add_argument("--n-cells", type=int, required=True)
    p.add_argument("--t-max", type=int, default=None, help="step budget (default 2*n+22)")
    p.add_argument("--ic", default="unbiased", help="all-on | all-off | unbiased | density:<p> | bits:<01...>")
    p.add_argument("--seed", type=int, default=None, help="master seed (required for random ICs)")
    p.add_argument("--out", required=True, help="output PBM path")
    p.add_argument("--text-out", default=None, help="also write a '#'/'.' text grid here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="measure rule performance over random ICs, write CSV")
    p.add_argument("--rules", required=True, help="rule-list file (one hex per line, '#' comments)")
    p.add_argument("--tasks", default="density,and,or", help="comma list of density,and,or")
    p.add_argument("--sizes", default="149", help="comma list of odd lattice sizes")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--distribution", default="unbiased", choices=tasks.DISTRIBUTIONS)
    p.add_argument("--t-max", type=int, default=None, help="step budget (default 2*n+22 per size)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("evolve", help="run the genetic algorithm, write run log + population")
    p.add_argument("--task", required=True, choices=("and", "or"))
    p.add_argument("--n-cells", type=int, default=149)
    p.add_argument("--t-max", type=int, default=None)
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--elite", type=int, default=20)
    p.add_argument("--mutations", type=int, default=2)
    p.add_argument("--generations", type=int, default=50)
    p.add_argument("--seed-rules", default=None, help="rule-list file for the initial population")
    p.add_argument("--fixed-ics", action="store_true", help="reuse one IC sample every generation")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--resume", action="store_true", help="continue from the checkpoint in --out-dir")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("filter", help="label regular domains in a diagram, expose boundaries")
    p.add_argument("--diagram", default=None, help="input PBM diagram (alternative to --rule)")
    p.add_argument("--rule", default=None, help="32-digit hex rule to simulate")
    p.add_argument("--n-cells", type=int, default=None)
    p.add_argument("--t-max", type=int, default=None)
    p.add_argument("--ic", default="unbiased")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--catalog", default=None, help="domain catalog file (default: zeros/ones/checker)")
    p.add_argument("--min-run", type=int, default=None, help="minimum run length for built-in domains")
    p.add_argument("--out", required=True, help="output stem: writes .grid.txt, .boundary.pbm, .events.csv")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("report", help="render an evaluation CSV against reference values")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", default=None, help="also write the table to this path")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
