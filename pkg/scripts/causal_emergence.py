"""
Causal Emergence Toolkit - command line front-end

Finds the scales of a Markov system that carry causal work of their own: CP
for every coarse-graining, delta CP against finer scales, the emergent
hierarchy and its complexity metrics.

Usage:
    python scripts/causal_emergence.py analyze data/fixtures/fig3.csv
    python scripts/causal_emergence.py greedy tpm.csv --n-paths 3 --seed 7
    python scripts/causal_emergence.py generate pa --n 40 --m 1 --alpha 1.0 --seed 7
    python scripts/causal_emergence.py generate pinpoint --cycles 5,1,1
    python scripts/causal_emergence.py generate garden --name all --out data/fixtures
    python scripts/causal_emergence.py sweep --replicates 5 --n-nodes 40

Output (analyze / greedy, one directory per run):
    - bundle.json      CP, delta CP, emergent members, metrics
    - hierarchy.dot    emergent hierarchy, node width ~ delta CP
    - levels.csv       per-level mean delta CP
    - metrics.csv      one-row metrics report
    - manifest.json    command, configuration, input digest

Exit codes: 0 ok, 2 invalid input, 3 enumeration cap exceeded, 4 sweep runs failed.
Worker processes: CAUSALSCALES_THREADS. Log level: CAUSALSCALES_LOG_LEVEL.
"""

import argparse
import logging
import os
import sys
from dataclasses import asdict
from datetime import datetime
from pathlib import Path

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent))

from causalscales.apportion import analyze
from causalscales.config import (
    ALPHA_GRID,
    ANALYZE_MAX_STATES,
    DEFAULT_N_PATHS,
    DEFAULT_SAMPLE_SIZE,
    ENUMERATION_CAP,
    EPSILON,
    LOG_LEVEL_ENV,
    PINPOINT_STAY,
    SWEEP_M,
    SWEEP_N_NODES,
    SWEEP_REPLICATES,
    AnalysisConfig,
    GreedyConfig,
    GrowthConfig,
    MetricsConfig,
    PinpointSpec,
    SweepConfig,
    threads_from_env,
)
from causalscales.errors import (
    EXIT_OK,
    CapExceeded,
    CausalScalesError,
    InvalidConfig,
    InvalidSpec,
    PartialSweepFailure,
)
from causalscales.export import RunManifest, file_digest, read_tpm, with_manifest, write_bundle, write_tpm
from causalscales.generators import designed_partition, garden_examples, garden_notes, grow_pa_tpm, pinpoint_tpm
from causalscales.greedy import branching_greedy
from causalscales.metrics import complexity
from causalscales.sweep import run_sweep
from causalscales.tpm import cp

# ============================================================================
# CONFIGURATION
# ============================================================================

PROJECT_ROOT = Path(__file__).parent.parent
OUTPUT_DIR = PROJECT_ROOT / "results"

GARDEN_ROLES = {
    "equivalence": "hierarchy shape: equivalence classes",
    "two-cycles": "hierarchy shape: two cycles",
    "mesoscale": "hierarchy shape: mesoscale",
    "degenerate": "hierarchy shape: deterministic but degenerate",
    "modules": "hierarchy shape: three modules",
    "fig3": "five-state source/cycle/sinks system",
    "noisy-pairs": "coarse-graining gain and loss",
    "uniform-4": "no emergence",
    "pinpoint-7": "pinpoint emergence at level 3",
}

log = logging.getLogger("causal_emergence")


def banner(title):
    print("=" * 70)
    print(title)
    print("=" * 70)


def default_out(name, suffix=""):
    OUTPUT_DIR.mkdir(exist_ok=True)
    return OUTPUT_DIR / f"{name}_{datetime.now().strftime('%Y%m%d_%H%M%S')}{suffix}"


def int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


# ============================================================================
# ANALYZE / GREEDY
# ============================================================================

def print_result(result, report):
    h = result.hierarchy
    print(f"\nMicroscale CP:      {result.cps[h.anchor]:.6f}")
    print(f"Scales evaluated:   {len(result.cps)}")
    print(f"Emergent members:   {len(h.members)}  (shape: {report.shape})")
    ranked = sorted(h.members, key=lambda p: (-h.delta[p], p))
    if ranked:
        print(f"\n{'Scale':<40} {'Level':>6} {'CP':>10} {'dCP':>10}")
        print("-" * 70)
        for p in ranked[:10]:
            print(f"{p.render_blocks():<40} {p.n_blocks:>6} {result.cps[p]:>10.6f} {h.delta[p]:>10.6f}")
        if len(ranked) > 10:
            print(f"... {len(ranked) - 10} more in bundle.json")
    print(f"\nPath entropy:       {report.s_path:.4f}  ({report.n_paths_used} paths)")
    print(f"Row negentropy:     {report.row_negentropy:.4f}")
    print(f"Emergent complexity: {report.complexity:.4f}")


def finish_bundle(result, report, out_dir, manifest):
    written = write_bundle(result, report, out_dir, manifest)
    print()
    for path in written:
        print(f"✓ {path.name}: {path}")


def metrics_config(args):
    return MetricsConfig(
        sample_size=args.sample_size,
        seed=args.seed,
        path_aggregate=args.path_aggregate,
        zero_paths="skip" if args.skip_zero_paths else "count",
    )


def cmd_analyze(args):
    banner("CAUSAL EMERGENCE: EXHAUSTIVE ANALYSIS")
    if args.max_states > ENUMERATION_CAP:
        raise CapExceeded(args.max_states, ENUMERATION_CAP)
    if args.max_states > ANALYZE_MAX_STATES:
        log.warning("--max-states %d is above the default %d; enumeration may take long",
                    args.max_states, ANALYZE_MAX_STATES)
        print(f"WARNING: --max-states {args.max_states} above default {ANALYZE_MAX_STATES}")

    t = read_tpm(args.input)
    print(f"Input: {args.input} ({t.n} states)")
    cfg = AnalysisConfig(epsilon=args.epsilon, max_states=args.max_states)
    mcfg = metrics_config(args)

    result = analyze(t, cfg, threads=threads_from_env())
    report = complexity(result.hierarchy, mcfg)
    print_result(result, report)

    manifest = RunManifest(
        command="analyze",
        config={"analysis": asdict(cfg), "metrics": asdict(mcfg)},
        input_digest=file_digest(args.input),
    )
    finish_bundle(result, report, args.out or default_out("analyze"), manifest)
    return EXIT_OK


def cmd_greedy(args):
    banner("CAUSAL EMERGENCE: BRANCHING GREEDY SEARCH")
    t = read_tpm(args.input)
    print(f"Input: {args.input} ({t.n} states), n_paths={args.n_paths}, seed={args.seed}")
    cfg = AnalysisConfig(epsilon=args.epsilon)
    gcfg = GreedyConfig(n_paths=args.n_paths, seed=args.seed, tie_break=args.tie_break)
    mcfg = metrics_config(args)

    result = branching_greedy(t, gcfg).as_analysis(cfg)
    report = complexity(result.hierarchy, mcfg)
    print_result(result, report)

    manifest = RunManifest(
        command="greedy",
        config={"analysis": asdict(cfg), "greedy": asdict(gcfg), "metrics": asdict(mcfg)},
        input_digest=file_digest(args.input),
    )
    finish_bundle(result, report, args.out or default_out("greedy"), manifest)
    return EXIT_OK


# ============================================================================
# GENERATE
# ============================================================================

def write_generated(t, path, command, config):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_tpm(t, path)
    manifest = RunManifest(command=command, config=config, input_digest=file_digest(path))
    manifest_path = manifest.write(path.parent, filename=f"{path.stem}.manifest.json")
    print(f"✓ TPM ({t.n} x {t.n}): {path}")
    print(f"✓ Manifest: {manifest_path}")


def cmd_generate_pa(args):
    banner("GENERATE: PREFERENTIAL ATTACHMENT TPM")
    cfg = GrowthConfig(n_nodes=args.n, m=args.m, alpha=args.alpha, seed=args.seed, orientation=args.orientation)
    t = grow_pa_tpm(cfg)
    print(f"n={cfg.n_nodes}, m={cfg.m}, alpha={cfg.alpha}, seed={cfg.seed}, micro CP={cp(t):.6f}")
    out = args.out or default_out(f"pa_n{cfg.n_nodes}_a{cfg.alpha}_s{cfg.seed}", suffix=".csv")
    write_generated(t, out, "generate pa", asdict(cfg))
    return EXIT_OK


def cmd_generate_pinpoint(args):
    banner("GENERATE: PINPOINT EMERGENCE TPM")
    extra = dict(stay_prob=args.stay, step_prob=1.0 - args.stay, permute_singletons=args.permute)
    if args.cycles:
        spec = PinpointSpec(cycle_sizes=args.cycles, n_singletons=args.singletons, **extra)
    elif args.n_states and args.target_level:
        spec = PinpointSpec.single_cycle(args.n_states, args.target_level, **extra)
    else:
        raise InvalidSpec("give --cycles, or --n-states with --target-level")
    t = pinpoint_tpm(spec)
    print(f"cycles={spec.cycle_sizes}, singletons={spec.n_singletons}, n={spec.n_states}")
    print(f"Designed scale (level {spec.target_level}): {designed_partition(spec).render_blocks()}")
    out = args.out or default_out(f"pinpoint_n{spec.n_states}_l{spec.target_level}", suffix=".csv")
    write_generated(t, out, "generate pinpoint", asdict(spec))
    return EXIT_OK


def cmd_generate_garden(args):
    banner("GENERATE: GARDEN FIXTURES")
    garden = garden_examples()
    notes = garden_notes()
    names = list(garden) if args.name == "all" else [args.name]
    if any(name not in garden for name in names):
        raise InvalidConfig(f"unknown garden system {args.name!r}; choose from {', '.join(garden)} or all")

    out_dir = Path(args.out or default_out("garden"))
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for name in names:
        path = out_dir / f"{name}.csv"
        write_tpm(garden[name], path)
        rows.append({"name": name, "n": garden[name].n, "construction": notes[name], "role": GARDEN_ROLES[name]})
        print(f"✓ {name} ({garden[name].n} states): {path}")

    if args.name == "all":
        manifest_path = out_dir / "manifest.csv"
        pd.DataFrame(rows).to_csv(manifest_path, index=False)
        print(f"✓ Fixture manifest: {manifest_path}")
    return EXIT_OK


# ============================================================================
# SWEEP
# ============================================================================

def cmd_sweep(args):
    banner("ALPHA SWEEP")
    cfg = SweepConfig(
        alpha_grid=args.alpha_grid,
        replicates=args.replicates,
        n_nodes=args.n_nodes,
        m=args.m,
        seed=args.seed,
        n_paths=args.n_paths,
        sample_size=args.sample_size,
        seeding=args.seeding,
        orientation=args.orientation,
    )
    threads = threads_from_env()
    print(f"alpha grid {cfg.alpha_grid}, {cfg.replicates} replicates, {cfg.n_nodes} nodes, {threads} workers")

    result = run_sweep(cfg, threads=threads)
    out_dir = Path(args.out or default_out("sweep"))
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest_path = RunManifest(command="sweep", config=cfg.as_dict()).write(out_dir)
    files = {
        "sweep_runs.csv": result.runs,
        "sweep_summary.csv": result.summary,
        "sweep_levels.csv": result.levels,
    }
    for name, frame in files.items():
        with_manifest(frame, manifest_path.name).to_csv(out_dir / name, index=False, float_format="%.17g")

    print("\n=== SUMMARY PER ALPHA ===")
    print(f"\n{'alpha':>6} {'n_ok':>5} {'S_path':>10} {'negentropy':>12} {'complexity':>12} {'centroid':>10}")
    print("-" * 70)
    for _, row in result.summary.iterrows():
        print(f"{row['alpha']:>6.2f} {int(row['n_ok']):>5} {row['s_path_mean']:>10.4f} "
              f"{row['row_negentropy_mean']:>12.4f} {row['complexity_mean']:>12.4f} {row['centroid_mean']:>10.3f}")
    print()
    print(f"✓ Manifest: {manifest_path}")
    for name in files:
        print(f"✓ {name}: {out_dir / name}")

    if result.n_failed:
        raise PartialSweepFailure(result.n_failed, len(result.runs))
    return EXIT_OK


# ============================================================================
# MAIN
# ============================================================================

def add_metrics_flags(parser):
    parser.add_argument("--sample-size", type=int, default=DEFAULT_SAMPLE_SIZE,
                        help="paths used for path entropy when the hierarchy has more (default: 100)")
    parser.add_argument("--seed", type=int, default=0, help="seed for every random choice (default: 0)")
    parser.add_argument("--path-aggregate", choices=["mean", "sum"], default="mean",
                        help="combine per-path entropies by mean (default) or sum")
    parser.add_argument("--skip-zero-paths", action="store_true",
                        help="leave out paths without positive delta CP instead of scoring them 0")
    parser.add_argument("--epsilon", type=float, default=EPSILON, help="delta CP threshold (default: 1e-9)")
    parser.add_argument("--out", type=Path, help="output directory (default: results/<command>_<timestamp>)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="causal_emergence",
        description="Causal apportioning across the scales of Markov systems.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="exhaustive analysis over every coarse-graining")
    p.add_argument("input", type=Path, help="TPM file (.csv headerless, or .json)")
    p.add_argument("--max-states", type=int, default=ANALYZE_MAX_STATES,
                   help=f"largest system enumerated (default: {ANALYZE_MAX_STATES}, hard cap {ENUMERATION_CAP})")
    add_metrics_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("greedy", help="branching greedy search for larger systems")
    p.add_argument("input", type=Path, help="TPM file (.csv headerless, or .json)")
    p.add_argument("--n-paths", type=int, default=DEFAULT_N_PATHS,
                   help="greedy completions launched per level (default: 3)")
    p.add_argument("--tie-break", choices=["canonical", "random"], default="canonical")
    add_metrics_flags(p)
    p.set_defaults(func=cmd_greedy)

    gen = sub.add_parser("generate", help="write TPMs of the built-in families")
    kinds = gen.add_subparsers(dest="kind", required=True)

    p = kinds.add_parser("pa", help="preferential attachment network TPM")
    p.add_argument("--n", type=int, default=SWEEP_N_NODES)
    p.add_argument("--m", type=int, default=SWEEP_M)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orientation", choices=["new_to_old", "bidirectional"], default="new_to_old")
    p.add_argument("--out", type=Path, help="output file (.csv or .json)")
    p.set_defaults(func=cmd_generate_pa)

    p = kinds.add_parser("pinpoint", help="diffusion cycles with one designed macroscale")
    p.add_argument("--cycles", type=int_list, help="cycle sizes, e.g. 5,1,1")
    p.add_argument("--singletons", type=int, default=0, help="deterministic states after the cycles")
    p.add_argument("--n-states", type=int, help="single-cycle form: microscale size")
    p.add_argument("--target-level", type=int, help="single-cycle form: blocks of the designed scale")
    p.add_argument("--permute", action="store_true", help="swap singletons in pairs instead of fixing them")
    p.add_argument("--stay", type=float, default=PINPOINT_STAY, help="probability of staying (default: 0.2)")
    p.add_argument("--out", type=Path, help="output file (.csv or .json)")
    p.set_defaults(func=cmd_generate_pinpoint)

    p = kinds.add_parser("garden", help="named example systems")
    p.add_argument("--name", default="all", help="system name, or all (default)")
    p.add_argument("--out", type=Path, help="output directory")
    p.set_defaults(func=cmd_generate_garden)

    p = sub.add_parser("sweep", help="preferential attachment exponent sweep")
    p.add_argument("--alpha-grid", type=float_list, default=ALPHA_GRID)
    p.add_argument("--replicates", type=int, default=SWEEP_REPLICATES)
    p.add_argument("--n-nodes", type=int, default=SWEEP_N_NODES)
    p.add_argument("--m", type=int, default=SWEEP_M)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-paths", type=int, default=DEFAULT_N_PATHS)
    p.add_argument("--sample-size", type=int, default=DEFAULT_SAMPLE_SIZE)
    p.add_argument("--seeding", choices=["paired", "independent"], default="paired",
                   help="reuse replicate seeds across alpha values (default) or draw fresh ones")
    p.add_argument("--orientation", choices=["new_to_old", "bidirectional"], default="new_to_old")
    p.add_argument("--out", type=Path, help="output directory")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = "DEBUG" if args.verbose else os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except CausalScalesError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
