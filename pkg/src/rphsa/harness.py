"""Experiment harness: campaigns, statistics, accuracy probes, plots, CLI.

Campaign outputs are reproducible from (config, base_seed) alone: run seeds
are base_seed + run index, per-run convergence histories land in one CSV per
run (header ``run_id,fe,best_f``), and a campaign summary JSON collects
final statistics plus pairwise Wilcoxon rank-sum verdicts.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.stats import spearmanr

from .benchmarks import Problem, from_descriptor, make_problem
from .errors import EmptyInput, RphsaError
from .optimizer import (RphsaConfig, RunRecord, make_config, run_baseline_esao,
                        run_rphsa)
from .surrogate import TrainingSet, train_rbf

ALGORITHMS = {"rphsa": run_rphsa, "baseline": run_baseline_esao}

SIGNIFICANCE_LEVEL = 0.05
# Exact permutation enumeration is used when both samples are at most this size.
EXACT_LIMIT = 8


# ---------------------------------------------------------------------------
# Wilcoxon rank-sum test
# ---------------------------------------------------------------------------

def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def wilcoxon_ranksum(a, b) -> tuple[float, float]:
    """Two-sided Wilcoxon rank-sum test; returns (rank-sum of ``a``, p-value).

    Both samples of size at most ``EXACT_LIMIT`` trigger exact enumeration of
    all rank assignments (a permutation test on midranks); larger samples use
    the normal approximation with tie and continuity corrections.  Identical
    values across both samples yield p = 1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n1, n2 = len(a), len(b)
    if n1 < 2 or n2 < 2:
        raise ValueError("each sample needs at least 2 values")
    combined = np.concatenate([a, b])
    ranks = _midranks(combined)
    statistic = float(ranks[:n1].sum())
    if np.all(combined == combined[0]):
        return statistic, 1.0
    n = n1 + n2
    mu = n1 * (n + 1) / 2.0
    if n1 <= EXACT_LIMIT and n2 <= EXACT_LIMIT:
        deviation = abs(statistic - mu)
        hits = 0
        total = 0
        for subset in combinations(range(n), n1):
            total += 1
            if abs(ranks[list(subset)].sum() - mu) >= deviation - 1e-9:
                hits += 1
        return statistic, hits / total
    _, counts = np.unique(combined, return_counts=True)
    tie_term = float(np.sum(counts.astype(np.float64) ** 3 - counts))
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma_sq <= 0.0:
        return statistic, 1.0
    diff = statistic - mu
    correction = 0.5 * np.sign(diff)
    z = (diff - correction) / math.sqrt(sigma_sq)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return statistic, min(1.0, p)


def verdict(mean_self: float, mean_other: float, p: float) -> str:
    """"+" when self is significantly better (lower), "-" worse, "=" otherwise."""
    if p >= SIGNIFICANCE_LEVEL:
        return "="
    return "+" if mean_self < mean_other else "-"


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------

@dataclass
class Campaign:
    problems: list[tuple[str, int, int]]   # (id, dim, data_seed)
    algorithms: list[str]
    runs_per_cell: int
    budget: int = 1000
    base_seed: int = 0
    config: RphsaConfig = field(default_factory=RphsaConfig)
    out_dir: Path | str = "results"
    workers: int = 1

    def __post_init__(self):
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be at least 1")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
        self.out_dir = Path(self.out_dir)


def _cell_dir(out_dir: Path, pid: str, dim: int, data_seed: int, algo: str) -> Path:
    return out_dir / f"{pid}_{dim}d_ds{data_seed}" / algo


def _execute_run(problem_desc: dict, cfg: RphsaConfig, algorithm: str) -> RunRecord:
    problem = from_descriptor(problem_desc)
    return ALGORITHMS[algorithm](problem, cfg)


def write_run_csv(path: Path, run_id: str, record: RunRecord) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_id", "fe", "best_f"])
        for fe, best in zip(record.history_fe, record.history_best):
            writer.writerow([run_id, int(fe), repr(float(best))])


def run_campaign(campaign: Campaign):
    """Execute every (problem, algorithm) cell; returns (summary, records).

    ``summary`` follows the fixed JSON schema and is also written to
    ``campaign_summary.json``; ``records`` maps (problem_id, dim, data_seed,
    algorithm) to the list of run records.  Per-run failures are recorded
    and the campaign continues.
    """
    out_dir = Path(campaign.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records: dict[tuple, list[RunRecord]] = {}
    errors: list[dict] = []
    jobs = []
    for pid, dim, data_seed in campaign.problems:
        desc = make_problem(pid, dim, data_seed).descriptor()
        for algo in campaign.algorithms:
            for r in range(campaign.runs_per_cell):
                cfg = replace(campaign.config, budget=campaign.budget,
                              seed=campaign.base_seed + r)
                jobs.append(((pid, dim, data_seed, algo), r, desc, cfg))

    def finish(key, r, outcome):
        pid, dim, data_seed, algo = key
        if isinstance(outcome, Exception):
            errors.append({"problem": pid, "dim": dim, "algorithm": algo,
                           "run_index": r, "message": str(outcome)})
            return
        records.setdefault(key, []).append(outcome)
        run_id = f"{pid}_{dim}d_{algo}_r{r}"
        path = _cell_dir(out_dir, pid, dim, data_seed, algo) / f"run_{r:02d}.csv"
        write_run_csv(path, run_id, outcome)

    if campaign.workers > 1:
        with ProcessPoolExecutor(max_workers=campaign.workers) as pool:
            futures = [(key, r, pool.submit(_execute_run, desc, cfg))
                       for key, r, desc, cfg in jobs]
            for key, r, fut in futures:
                try:
                    finish(key, r, fut.result())
                except RphsaError as exc:
                    finish(key, r, exc)
    else:
        for key, r, desc, cfg in jobs:
            try:
                finish(key, r, _execute_run(desc, cfg))
            except RphsaError as exc:
                finish(key, r, exc)

    summary = summarize(records, campaign, errors)
    with open(out_dir / "campaign_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return summary, records


def summarize(records: dict, campaign: Campaign, errors: list[dict]) -> dict:
    cells = []
    for (pid, dim, data_seed, algo), recs in sorted(records.items()):
        finals = [rec.best.f for rec in recs]
        nls = [rec.nls for rec in recs]
        nti = [rec.nti for rec in recs]
        nls_mean = float(np.mean(nls))
        nti_mean = float(np.mean(nti))
        cell = {
            "problem": pid,
            "dim": dim,
            "algorithm": algo,
            "runs": len(recs),
            "mean": float(np.mean(finals)),
            "std": float(np.std(finals, ddof=1)) if len(finals) > 1 else 0.0,
            "finals": finals,
            "nls_mean": nls_mean,
            "nti_mean": nti_mean,
            "nti_over_nls": nti_mean / nls_mean if nls_mean > 0 else 0.0,
            "wilcoxon": None,
        }
        others = [(k, v) for k, v in records.items()
                  if k[:3] == (pid, dim, data_seed) and k[3] != algo]
        if len(others) == 1:
            other_key, other_recs = others[0]
            other_finals = [rec.best.f for rec in other_recs]
            if len(finals) >= 2 and len(other_finals) >= 2:
                _, p = wilcoxon_ranksum(finals, other_finals)
                cell["wilcoxon"] = {
                    "vs": other_key[3],
                    "p": p,
                    "verdict": verdict(cell["mean"], float(np.mean(other_finals)), p),
                }
        cells.append(cell)
    return {
        "budget": campaign.budget,
        "base_seed": campaign.base_seed,
        "runs_per_cell": campaign.runs_per_cell,
        "cells": cells,
        "errors": errors,
    }


# ---------------------------------------------------------------------------
# Accuracy probe
# ---------------------------------------------------------------------------

@dataclass
class ProbeResult:
    """Per-individual (true, plain-RBF, ensemble) fitness, sorted by truth."""

    true_fitness: np.ndarray
    plain_prediction: np.ndarray
    ensemble_prediction: np.ndarray
    spearman_plain: float
    spearman_ensemble: float
    fe_at_capture: int
    population_size: int


def accuracy_probe(problem: Problem, cfg: RphsaConfig, seed: int) -> ProbeResult:
    """Capture one mid-run local-search population and score both surrogates.

    The run proceeds until the first local phase after half the budget; its
    inner-DE population is then evaluated by the true function (on a fresh
    clone, so run accounting is untouched), by a traditional full-dimensional
    RBF sized by ``cfg.resolve_baseline_n`` (the baseline's sample rule), and
    by the ensemble itself.
    """
    cfg = replace(cfg, seed=seed)
    captured = {}

    def hook(info):
        if info.fe_used >= cfg.budget * 0.5:
            n_plain = min(cfg.resolve_baseline_n(problem.dim),
                          len(info.archive_fitness))
            order = np.argsort(info.archive_fitness, kind="stable")[:n_plain]
            captured["info"] = info
            captured["plain_x"] = info.archive_positions[order].T.copy()
            captured["plain_f"] = info.archive_fitness[order].copy()
            return True
        return False

    run_rphsa(problem, cfg, local_hook=hook)
    if "info" not in captured:
        raise RphsaError("run finished without a local phase in its second half")
    info = captured["info"]
    plain_model = train_rbf(TrainingSet(captured["plain_x"], captured["plain_f"]))
    truth = problem.clone()
    # The initial inner-DE population still spans the local region; the final
    # one has collapsed onto the surrogate optimum and carries no rank signal.
    population = info.inner_initial_population
    true_f = np.array([truth.evaluate(x) for x in population])
    ensemble_pred = np.asarray(info.predict(population), dtype=np.float64)
    plain_pred = np.asarray(plain_model.predict(population), dtype=np.float64)
    order = np.argsort(true_f, kind="stable")
    rho_plain = float(spearmanr(true_f, plain_pred).statistic)
    rho_ens = float(spearmanr(true_f, ensemble_pred).statistic)
    return ProbeResult(
        true_fitness=true_f[order],
        plain_prediction=plain_pred[order],
        ensemble_prediction=ensemble_pred[order],
        spearman_plain=rho_plain,
        spearman_ensemble=rho_ens,
        fe_at_capture=info.fe_used,
        population_size=population.shape[0],
    )


# ---------------------------------------------------------------------------
# Parameter sweep
# ---------------------------------------------------------------------------

def sweep(problem_id: str, dim: int, data_seed: int, k_values, n_values,
          runs: int, budget: int, base_seed: int, out_dir,
          config: RphsaConfig | None = None) -> dict:
    """Grid of mean final fitness over (k, n_local); m is re-derived per cell.

    Writes ``sweep.csv`` (one row per cell) and ``sweep_runs.csv`` (one row
    per run) under ``out_dir`` and returns the grid as a dict.
    """
    if not k_values or not n_values:
        raise ValueError("k_values and n_values must be nonempty")
    base_cfg = config if config is not None else RphsaConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = {}
    run_rows = []
    for k in k_values:
        for n in n_values:
            finals = []
            for r in range(runs):
                cfg = replace(base_cfg, k=k, n_local=n, m=None, budget=budget,
                              seed=base_seed + r)
                problem = make_problem(problem_id, dim, data_seed)
                record = run_rphsa(problem, cfg)
                finals.append(record.best.f)
                run_rows.append((k, n, r, base_seed + r, record.best.f))
            grid[(k, n)] = {
                "m": cfg.resolve_m(dim),
                "mean_final": float(np.mean(finals)),
                "finals": finals,
                "is_default": k == 50 and n == 100,
            }
    with open(out_dir / "sweep.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "n", "m", "runs", "mean_final", "is_default"])
        for (k, n), cell in grid.items():
            writer.writerow([k, n, cell["m"], runs, repr(cell["mean_final"]),
                             int(cell["is_default"])])
    with open(out_dir / "sweep_runs.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "n", "run_index", "seed", "final"])
        for k, n, r, seed, final in run_rows:
            writer.writerow([k, n, r, seed, repr(float(final))])
    return grid


# ---------------------------------------------------------------------------
# Convergence plots
# ---------------------------------------------------------------------------

def read_run_csv(path) -> tuple[np.ndarray, np.ndarray]:
    fes = []
    bests = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyInput(f"{path} is empty")
        for row in reader:
            fes.append(int(row[1]))
            bests.append(float(row[2]))
    if not fes:
        raise EmptyInput(f"{path} has no data rows")
    return np.asarray(fes), np.asarray(bests)


def _series_curve(paths) -> tuple[np.ndarray, np.ndarray]:
    """Mean best-so-far over runs on the union grid of evaluation indices."""
    runs = [read_run_csv(p) for p in paths]
    max_fe = max(int(fe.max()) for fe, _ in runs)
    grid = np.arange(1, max_fe + 1)
    stacked = np.empty((len(runs), max_fe))
    for i, (fe, best) in enumerate(runs):
        # Step-interpolate the best-so-far curve onto the full grid.
        idx = np.searchsorted(fe, grid, side="right") - 1
        idx = np.clip(idx, 0, len(fe) - 1)
        stacked[i] = best[idx]
    return grid, stacked.mean(axis=0)


def emit_convergence_plot(inputs, out_path, log_scale: bool = True):
    """Render mean convergence curves, one series per (label, csv paths) pair.

    Produces a self-contained vector graphic (format from the file suffix,
    SVG by default).
    """
    from matplotlib.figure import Figure

    if not inputs:
        raise EmptyInput("no input series")
    fig = Figure(figsize=(7, 5))
    ax = fig.add_subplot(111)
    for label, paths in inputs:
        if not paths:
            raise EmptyInput(f"series {label!r} has no CSV files")
        grid, curve = _series_curve(paths)
        ax.plot(grid, curve, label=label)
    ax.set_xlabel("true fitness evaluations")
    ax.set_ylabel("best fitness so far")
    if log_scale:
        ax.set_yscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, bbox_inches="tight")
    return out_path


# ---------------------------------------------------------------------------
# Directory comparison
# ---------------------------------------------------------------------------

def _finals_in_dir(directory: Path) -> list[float]:
    finals = []
    for path in sorted(directory.glob("*.csv")):
        _, best = read_run_csv(path)
        finals.append(float(best[-1]))
    if not finals:
        raise EmptyInput(f"no run CSVs found in {directory}")
    return finals


def compare_dirs(dir_a, dir_b) -> dict:
    """Wilcoxon comparison of final fitness between two run directories."""
    dir_a, dir_b = Path(dir_a), Path(dir_b)
    finals_a = _finals_in_dir(dir_a)
    finals_b = _finals_in_dir(dir_b)
    stat, p = wilcoxon_ranksum(finals_a, finals_b)
    mean_a, mean_b = float(np.mean(finals_a)), float(np.mean(finals_b))
    return {
        "a": {"dir": str(dir_a), "runs": len(finals_a), "mean": mean_a,
              "std": float(np.std(finals_a, ddof=1)) if len(finals_a) > 1 else 0.0},
        "b": {"dir": str(dir_b), "runs": len(finals_b), "mean": mean_b,
              "std": float(np.std(finals_b, ddof=1)) if len(finals_b) > 1 else 0.0},
        "statistic": stat,
        "p": p,
        "verdict_a_vs_b": verdict(mean_a, mean_b, p),
    }


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _campaign_from_args(args) -> Campaign:
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        cfg = make_config(**raw.get("overrides", {}))
        return Campaign(
            problems=[tuple(p) for p in raw["problems"]],
            algorithms=raw.get("algorithms", ["rphsa"]),
            runs_per_cell=raw.get("runs_per_cell", 30),
            budget=raw.get("budget", 1000),
            base_seed=raw.get("base_seed", 0),
            config=cfg,
            out_dir=args.out or raw.get("out_dir", "results"),
            workers=args.workers,
        )
    algorithms = ["rphsa", "baseline"] if args.algo == "both" else [args.algo]
    cfg = RphsaConfig(k=args.k, n_local=args.n_local,
                      m=None if args.m == "auto" else int(args.m),
                      init_size=args.init_size)
    return Campaign(
        problems=[(args.function, args.dim, args.data_seed)],
        algorithms=algorithms,
        runs_per_cell=args.runs,
        budget=args.budget,
        base_seed=args.seed,
        config=cfg,
        out_dir=args.out,
        workers=args.workers,
    )


def _cmd_run(args) -> int:
    campaign = _campaign_from_args(args)
    summary, _ = run_campaign(campaign)
    for cell in summary["cells"]:
        wil = cell["wilcoxon"]
        tail = f"  vs {wil['vs']}: p={wil['p']:.3g} {wil['verdict']}" if wil else ""
        print(f"{cell['problem']} {cell['dim']}D {cell['algorithm']}: "
              f"mean={cell['mean']:.6g} std={cell['std']:.3g} "
              f"runs={cell['runs']}{tail}")
    if summary["errors"]:
        for err in summary["errors"]:
            print(f"FAILED {err['problem']} {err['algorithm']} "
                  f"run {err['run_index']}: {err['message']}", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    grid = sweep(args.function, args.dim, args.data_seed,
                 _parse_int_list(args.k), _parse_int_list(args.n),
                 args.runs, args.budget, args.seed, args.out)
    for (k, n), cell in grid.items():
        flag = " (default)" if cell["is_default"] else ""
        print(f"k={k} n={n} m={cell['m']}: mean={cell['mean_final']:.6g}{flag}")
    return 0


def _cmd_probe(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for i in range(args.seeds):
        problem = make_problem(args.function, args.dim, args.data_seed)
        cfg = RphsaConfig(k=args.k, n_local=args.n_local, budget=args.budget)
        result = accuracy_probe(problem, cfg, seed=args.seed + i)
        path = out_dir / f"probe_{args.seed + i}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true_f", "plain_rbf_pred", "ensemble_pred"])
            for t, pl, en in zip(result.true_fitness, result.plain_prediction,
                                 result.ensemble_prediction):
                writer.writerow([repr(float(t)), repr(float(pl)), repr(float(en))])
        summary.append({
            "seed": args.seed + i,
            "spearman_plain": result.spearman_plain,
            "spearman_ensemble": result.spearman_ensemble,
            "fe_at_capture": result.fe_at_capture,
            "population_size": result.population_size,
        })
        print(f"seed {args.seed + i}: spearman ensemble="
              f"{result.spearman_ensemble:.4f} plain={result.spearman_plain:.4f}")
    with open(out_dir / "probe_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    wins = sum(1 for s in summary
               if s["spearman_ensemble"] >= s["spearman_plain"])
    print(f"ensemble ranked at least as well as plain RBF in {wins}/{len(summary)} probes")
    return 0


def _cmd_plot(args) -> int:
    inputs = []
    for item in args.inputs:
        path = Path(item)
        if path.is_dir():
            inputs.append((path.name, sorted(path.glob("*.csv"))))
        else:
            inputs.append((path.stem, [path]))
    emit_convergence_plot(inputs, args.out, log_scale=not args.linear)
    print(f"wrote {args.out}")
    return 0


def _cmd_compare(args) -> int:
    result = compare_dirs(args.dir_a, args.dir_b)
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rphsa",
        description="Surrogate-assisted optimizer experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a campaign of optimization runs")
    run_p.add_argument("--function", default="F1", help="benchmark id F1..F6")
    run_p.add_argument("--dim", type=int, default=100)
    run_p.add_argument("--budget", type=int, default=1000)
    run_p.add_argument("--runs", type=int, default=30)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--data-seed", type=int, default=0)
    run_p.add_argument("--k", type=int, default=50)
    run_p.add_argument("--n-local", type=int, default=100)
    run_p.add_argument("--m", default="auto")
    run_p.add_argument("--init-size", type=int, default=100)
    run_p.add_argument("--algo", choices=["rphsa", "baseline", "both"],
                       default="rphsa")
    run_p.add_argument("--out", default="results")
    run_p.add_argument("--workers", type=int, default=1)
    run_p.add_argument("--config", help="campaign config JSON file")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="grid over subspace dimension and sample count")
    sweep_p.add_argument("--function", default="F1")
    sweep_p.add_argument("--dim", type=int, default=100)
    sweep_p.add_argument("--data-seed", type=int, default=0)
    sweep_p.add_argument("--k", default="20,30,40,50,60")
    sweep_p.add_argument("--n", default="50,100,150,200")
    sweep_p.add_argument("--runs", type=int, default=5)
    sweep_p.add_argument("--budget", type=int, default=1000)
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("--out", default="sweep_results")
    sweep_p.set_defaults(func=_cmd_sweep)

    probe_p = sub.add_parser("probe", help="surrogate accuracy probe on a local population")
    probe_p.add_argument("--function", default="F1")
    probe_p.add_argument("--dim", type=int, default=100)
    probe_p.add_argument("--data-seed", type=int, default=0)
    probe_p.add_argument("--budget", type=int, default=1000)
    probe_p.add_argument("--k", type=int, default=50)
    probe_p.add_argument("--n-local", type=int, default=100)
    probe_p.add_argument("--seeds", type=int, default=10)
    probe_p.add_argument("--seed", type=int, default=0)
    probe_p.add_argument("--out", default="probe_results")
    probe_p.set_defaults(func=_cmd_probe)

    plot_p = sub.add_parser("plot", help="convergence plot from run CSVs")
    plot_p.add_argument("inputs", nargs="+",
                        help="run directories (one series each) or CSV files")
    plot_p.add_argument("--out", default="convergence.svg")
    plot_p.add_argument("--linear", action="store_true",
                        help="linear fitness axis instead of log")
    plot_p.set_defaults(func=_cmd_plot)

    cmp_p = sub.add_parser("compare", help="Wilcoxon comparison of two run directories")
    cmp_p.add_argument("dir_a")
    cmp_p.add_argument("dir_b")
    cmp_p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RphsaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
