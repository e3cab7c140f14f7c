"""calab — a laboratory for radius-3 binary cellular automata.

Decode 32-hex-digit rule tables, run them on cyclic lattices, measure
their performance on global classification tasks (density and
split-lattice AND/OR), evolve new rules with a genetic algorithm, and
filter space-time diagrams against regular-domain catalogs to expose the
particle-like boundaries that carry information across the lattice.
"""

from .benchmarks import BENCHMARKS, DENSITY_SEEDS, MULTITASK_RULES, Benchmark, reference_value
from .engine import (
    HALT_BUDGET,
    HALT_FIXED_POINT,
    Trajectory,
    default_t_max,
    density,
    run,
    space_time,
    step,
    step_reference,
)
from .evolve import (
    GaConfig,
    GenerationRecord,
    crossover,
    held_out_fitness,
    init_population,
    load_checkpoint,
    mutate,
    resume_ga,
    run_ga,
    save_checkpoint,
)
from .particles import (
    BOUNDARY,
    DEFAULT_CATALOG,
    CensusResult,
    Domain,
    FilteredDiagram,
    ParticleEvent,
    census,
    default_catalog,
    label_sites,
    load_catalog,
    save_catalog,
)
from .pbm import format_pbm, read_pbm, write_pbm
from .rules import (
    RADIUS,
    RULE_BITS,
    RULE_HEX_DIGITS,
    RuleFormatError,
    RuleTable,
    format_hex,
    load_rule_file,
    parse_hex,
    random_rule,
    save_rule_file,
)
from .tasks import (
    DISTRIBUTIONS,
    TASK_KINDS,
    PerformanceReport,
    TaskSpec,
    adjudicate,
    evaluate_performance,
    extract_bits,
    fitness,
    fitness_many,
    gen_logical_biased,
    gen_unbiased,
    gen_uniform_density,
    majority,
    make_task,
    target_state,
    write_reports_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BENCHMARKS",
    "BOUNDARY",
    "DEFAULT_CATALOG",
    "DENSITY_SEEDS",
    "DISTRIBUTIONS",
    "HALT_BUDGET",
    "HALT_FIXED_POINT",
    "MULTITASK_RULES",
    "RADIUS",
    "RULE_BITS",
    "RULE_HEX_DIGITS",
    "TASK_KINDS",
    "Benchmark",
    "CensusResult",
    "Domain",
    "FilteredDiagram",
    "GaConfig",
    "GenerationRecord",
    "ParticleEvent",
    "PerformanceReport",
    "RuleFormatError",
    "RuleTable",
    "TaskSpec",
    "Trajectory",
    "adjudicate",
    "census",
    "crossover",
    "default_catalog",
    "default_t_max",
    "density",
    "evaluate_performance",
    "extract_bits",
    "fitness",
    "fitness_many",
    "format_hex",
    "format_pbm",
    "gen_logical_biased",
    "gen_unbiased",
    "gen_uniform_density",
    "held_out_fitness",
    "init_population",
    "label_sites",
    "load_catalog",
    "load_checkpoint",
    "load_rule_file",
    "majority",
    "make_task",
    "mutate",
    "parse_hex",
    "random_rule",
    "read_pbm",
    "reference_value",
    "resume_ga",
    "run",
    "run_ga",
    "save_catalog",
    "save_checkpoint",
    "save_rule_file",
    "space_time",
    "step",
    "step_reference",
    "target_state",
    "write_pbm",
    "write_reports_csv",
]
