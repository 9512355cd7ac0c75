"""
Preferential-attachment exponent sweep.

For every alpha in the grid and every replicate: grow a network TPM, run the
branching greedy search, and score the emergent hierarchy. Runs fan out over a
process pool; each run has its own seed, so the tables do not depend on the
worker count.

Outputs (pandas DataFrames):
- runs: one row per (alpha, replicate), with status/error columns
- summary: mean and standard error per alpha over the successful runs
- levels: per-run mean delta CP for each level
"""

import logging
import time
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np
import pandas as pd

from .config import AnalysisConfig, GreedyConfig, GrowthConfig, MetricsConfig
from .generators import grow_pa_tpm
from .greedy import branching_greedy
from .metrics import complexity

log = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["s_path", "s_row", "row_negentropy", "complexity", "centroid", "n_emergent_nodes"]


@dataclass
class SweepResult:
    runs: pd.DataFrame
    summary: pd.DataFrame
    levels: pd.DataFrame

    @property
    def n_failed(self):
        return int((self.runs["status"] != "ok").sum())


def replicate_seeds(cfg):
    """
    Seed per (alpha, replicate), derived from cfg.seed.

    "paired" reuses one seed per replicate across the whole alpha grid;
    "independent" draws a fresh seed for every run.
    """
    root = np.random.SeedSequence(cfg.seed)
    if cfg.seeding == "paired":
        per_replicate = [int(s.generate_state(1)[0]) for s in root.spawn(cfg.replicates)]
        return {(a, r): per_replicate[r] for a in cfg.alpha_grid for r in range(cfg.replicates)}
    children = iter(root.spawn(len(cfg.alpha_grid) * cfg.replicates))
    return {
        (a, r): int(next(children).generate_state(1)[0])
        for a in cfg.alpha_grid for r in range(cfg.replicates)
    }


def run_one(job):
    """One sweep cell; errors are recorded on the row instead of raised."""
    cfg, alpha, replicate, seed = job
    row = {"alpha": alpha, "replicate": replicate, "seed": seed, "status": "ok", "error": ""}
    profile = []
    started = time.time()
    try:
        t = grow_pa_tpm(GrowthConfig(
            n_nodes=cfg.n_nodes, m=cfg.m, alpha=alpha, seed=seed, orientation=cfg.orientation,
        ))
        greedy = branching_greedy(t, GreedyConfig(n_paths=cfg.n_paths, seed=seed))
        result = greedy.as_analysis(AnalysisConfig(epsilon=cfg.epsilon))
        report = complexity(result.hierarchy, MetricsConfig(sample_size=cfg.sample_size, seed=seed))
        row.update({k: v for k, v in report.as_dict().items() if k != "level_profile"})
        row["n_sampled_scales"] = len(greedy.sampled_cp)
        profile = report.level_profile
    except Exception as e:
        log.warning("sweep run alpha=%s replicate=%d failed: %s", alpha, replicate, e)
        row["status"] = "failed"
        row["error"] = f"{type(e).__name__}: {e}"
    row["seconds"] = round(time.time() - started, 3)
    return row, profile


def summarize(runs):
    ok = runs[runs["status"] == "ok"]
    if ok.empty:
        return pd.DataFrame(columns=["alpha", "n_ok"])
    grouped = ok.groupby("alpha")[SUMMARY_COLUMNS]
    means = grouped.mean().add_suffix("_mean")
    stderrs = grouped.sem(ddof=1).fillna(0.0).add_suffix("_stderr")
    summary = pd.concat([means, stderrs], axis=1)
    summary = summary[[f"{c}_{s}" for c in SUMMARY_COLUMNS for s in ("mean", "stderr")]]
    summary.insert(0, "n_ok", ok.groupby("alpha").size())
    return summary.reset_index()


def run_sweep(cfg, threads=1):
    """
    Args:
        cfg: SweepConfig
        threads: worker processes for the (alpha, replicate) runs

    Returns:
        SweepResult
    """
    seeds = replicate_seeds(cfg)
    jobs = [(cfg, a, r, seeds[(a, r)]) for a in cfg.alpha_grid for r in range(cfg.replicates)]
    log.info("sweep: %d runs over %d alpha values, %d workers", len(jobs), len(cfg.alpha_grid), threads)

    if threads > 1:
        with Pool(threads) as pool:
            outcomes = pool.map(run_one, jobs, chunksize=1)
    else:
        outcomes = [run_one(job) for job in jobs]

    runs = pd.DataFrame([row for row, _ in outcomes])
    levels = pd.DataFrame([
        {"alpha": row["alpha"], "replicate": row["replicate"], "level": level, "mean_delta_cp": float(value)}
        for row, profile in outcomes
        for level, value in enumerate(profile, start=1)
    ], columns=["alpha", "replicate", "level", "mean_delta_cp"])
    return SweepResult(runs=runs, summary=summarize(runs), levels=levels)
