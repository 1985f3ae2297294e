"""The hierarchical surrogate-assisted optimization loop.

One run alternates two phases under a hard budget of true fitness
evaluations.  The global phase evolves a DE population, prescreens all trial
vectors with an RBF trained on every archived evaluation, and spends a
single true evaluation on the most promising trial.  The local phase fits a
subspace RBF ensemble to the best archived points, minimizes it with an
inner DE restricted to the bounding box of those points, and spends one true
evaluation on the surrogate optimum.  A phase is abandoned as soon as it
fails to improve the incumbent.

Every truly evaluated point enters the archive, which is deduplicated at
1e-12 (infinity norm); a candidate that collides with an archived point is
rejected without spending an evaluation.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .benchmarks import Problem
from .de import DeParams, Solution, _evolve, generate_trials
from .errors import ArchiveExhausted, RphsaError
from .numerics import make_rng
from .projection import ProjectionMatrix, build_rp_rbf
from .sampling import olhs
from .surrogate import DUPLICATE_TOL, TrainingSet, train_rbf

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    threadpool_limits = None


def _single_threaded_blas():
    """Cap BLAS pools at one thread for the duration of a run.

    The run is dominated by many small GEMM/LU calls where OpenBLAS thread
    spin-up costs far more than it saves; run-level parallelism belongs to
    the campaign workers instead.
    """
    if threadpool_limits is None:
        return contextlib.nullcontext()
    return threadpool_limits(limits=1, user_api="blas")

PHASE_GLOBAL = "global"
PHASE_LOCAL = "local"

# Consecutive duplicate rejections tolerated before declaring stagnation.
MAX_CONSECUTIVE_REJECTIONS = 100

OUTCOME_IMPROVED = "improved"
OUTCOME_NO_IMPROVE = "no_improve"
OUTCOME_DUPLICATE = "duplicate"


class Archive:
    """Append-only store of all truly evaluated solutions."""

    def __init__(self, dim: int, capacity: int):
        self._x = np.empty((capacity, dim), dtype=np.float64)
        self._f = np.empty(capacity, dtype=np.float64)
        self.size = 0
        self.best_index = -1

    @property
    def positions(self) -> np.ndarray:
        return self._x[: self.size]

    @property
    def fitness(self) -> np.ndarray:
        return self._f[: self.size]

    @property
    def best(self) -> Solution:
        return Solution(x=self._x[self.best_index].copy(),
                        f=float(self._f[self.best_index]))

    def contains(self, x: np.ndarray, tol: float = DUPLICATE_TOL) -> bool:
        if self.size == 0:
            return False
        return bool(np.abs(self.positions - x).max(axis=1).min() <= tol)

    def append(self, x: np.ndarray, f: float) -> int:
        if self.size >= self._x.shape[0]:
            raise RphsaError("archive capacity exceeded")
        if self.contains(x):
            raise RphsaError("duplicate entry rejected by the archive")
        i = self.size
        self._x[i] = x
        self._f[i] = f
        self.size += 1
        # Strict comparison keeps the earliest entry on ties.
        if self.best_index < 0 or f < self._f[self.best_index]:
            self.best_index = i
        return i

    def n_best(self, n: int) -> np.ndarray:
        """Indices of the n lowest-fitness entries, ties by insertion order."""
        order = np.argsort(self.fitness, kind="stable")
        return order[: min(n, self.size)]


@dataclass
class RphsaConfig:
    """Run configuration; ``m`` defaults to 4 * ceil(d / k) when left unset.

    ``baseline_n_local`` sizes the traditional local RBF's training set in
    the baseline algorithm; when None the classic rule of 2 * dim samples
    applies (capped by the archive).  Set it to ``n_local`` for a
    like-for-like comparison of the two local models.
    """

    k: int = 50
    n_local: int = 100
    m: int | None = None
    budget: int = 1000
    init_size: int = 100
    seed: int = 0
    de: DeParams = field(default_factory=DeParams)
    inner_de: DeParams = field(default_factory=DeParams)
    inner_generations: int = 50
    baseline_n_local: int | None = None
    identity_projection: bool = False  # test hook: forces P = I (needs k = d, m = 1)

    def resolve_m(self, dim: int) -> int:
        if self.m is not None:
            return self.m
        return 4 * math.ceil(dim / self.k)

    def resolve_baseline_n(self, dim: int) -> int:
        if self.baseline_n_local is not None:
            return self.baseline_n_local
        return 2 * dim

    def validate(self, dim: int) -> None:
        if not 1 <= self.k <= dim:
            raise ValueError(f"k={self.k} must lie in [1, {dim}]")
        if self.n_local < 2:
            raise ValueError("n_local must be at least 2")
        if self.resolve_m(dim) < 1:
            raise ValueError("m must be at least 1")
        if self.init_size < 4:
            raise ValueError("init_size must be at least 4 (DE mutation)")
        if self.budget < self.init_size:
            raise ValueError("budget must cover the initial design")
        if self.identity_projection and (self.k != dim or self.resolve_m(dim) != 1):
            raise ValueError("identity projection hook requires k = dim and m = 1")

    def snapshot(self) -> dict:
        return asdict(self)


@dataclass
class RunRecord:
    """Everything observable about one run: history, counters, final point."""

    history_fe: np.ndarray
    history_best: np.ndarray
    best: Solution
    nls: int
    nti: int
    ngs: int
    dup_local: int
    dup_global: int
    init_size: int
    fe_used: int
    archive_size: int
    seed: int
    config: dict
    problem: dict
    algorithm: str
    phase_log: list[tuple[str, str]]

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "problem": self.problem,
            "seed": self.seed,
            "config": self.config,
            "final_fitness": self.best.f,
            "final_position": self.best.x.tolist(),
            "fe_used": self.fe_used,
            "archive_size": self.archive_size,
            "init_size": self.init_size,
            "nls": self.nls,
            "nti": self.nti,
            "ngs": self.ngs,
            "dup_local": self.dup_local,
            "dup_global": self.dup_global,
            "history": [[int(fe), float(bf)]
                        for fe, bf in zip(self.history_fe, self.history_best)],
            "phase_log": [list(entry) for entry in self.phase_log],
        }


@dataclass
class LocalStepInfo:
    """Snapshot handed to a local-step hook (used by the accuracy probe)."""

    fe_used: int
    train_x: np.ndarray   # (dim, n) columns are the selected archive points
    train_f: np.ndarray
    predict: object       # callable (q, dim) -> (q,)
    inner_initial_population: np.ndarray
    inner_final_population: np.ndarray
    inner_best: Solution
    archive_positions: np.ndarray  # live views; copy before the step returns
    archive_fitness: np.ndarray


def _rp_rbf_builder(cfg: RphsaConfig, dim: int):
    m = cfg.resolve_m(dim)

    def build(train_x, train_f, rng):
        data = TrainingSet(train_x, train_f)
        if cfg.identity_projection:
            ens = build_rp_rbf(data, dim, 1, rng,
                               projections=[ProjectionMatrix.identity(dim)])
        else:
            ens = build_rp_rbf(data, cfg.k, m, rng)
        return ens.predict

    return build


def _plain_rbf_builder(cfg: RphsaConfig, dim: int):
    def build(train_x, train_f, rng):
        model = train_rbf(TrainingSet(train_x, train_f))
        return model.predict

    return build


class RunState:
    """Mutable state of one run; drives the two phase steps.

    ``local_n`` is the number of best archive entries used to train the
    local surrogate (the subspace ensemble uses ``cfg.n_local``, the
    traditional baseline its own rule).
    """

    def __init__(self, problem: Problem, cfg: RphsaConfig, local_builder,
                 local_n: int | None = None):
        cfg.validate(problem.dim)
        if problem.eval_count != 0:
            raise ValueError("problem evaluation counter must start at zero")
        self.problem = problem
        self.cfg = cfg
        self.local_builder = local_builder
        self.local_n = cfg.n_local if local_n is None else local_n
        ss = np.random.SeedSequence(int(cfg.seed) & (2**63 - 1))
        init_ss, global_ss, local_ss, proj_ss = ss.spawn(4)
        self.rng_global = make_rng(global_ss)
        self.rng_local = make_rng(local_ss)
        self.rng_proj = make_rng(proj_ss)
        self.archive = Archive(problem.dim, cfg.budget)
        self.history_fe: list[int] = []
        self.history_best: list[float] = []
        self.nls = 0
        self.nti = 0
        self.ngs = 0
        self.dup_local = 0
        self.dup_global = 0
        self.consecutive_rejections = 0
        self.phase_log: list[tuple[str, str]] = []

        design = olhs(cfg.init_size, problem.dim, problem.lower, problem.upper,
                      make_rng(init_ss))
        for point in design.points:
            self._spend_fe(point)
        self.pop_x = design.points.copy()
        self.pop_f = self.archive.fitness[: cfg.init_size].copy()
        self.best = self.archive.best

    def _spend_fe(self, x: np.ndarray) -> float:
        f = self.problem.evaluate(x)
        self.archive.append(x, f)
        self.history_fe.append(self.problem.eval_count)
        self.history_best.append(self.archive.best.f)
        self.consecutive_rejections = 0
        return f

    def _reject_duplicate(self) -> None:
        self.consecutive_rejections += 1
        if self.consecutive_rejections >= MAX_CONSECUTIVE_REJECTIONS:
            raise ArchiveExhausted(
                f"{self.consecutive_rejections} consecutive candidates were duplicates"
            )

    def global_step(self) -> str:
        """DE offspring prescreened by the archive-wide RBF; one true FE."""
        trials = generate_trials(self.pop_x, self.best.x, self.problem.lower,
                                 self.problem.upper, self.cfg.de, self.rng_global)
        global_model = train_rbf(TrainingSet(self.archive.positions.T,
                                             self.archive.fitness))
        predictions = global_model.predict(trials)
        g = int(np.argmin(predictions))
        x_g = trials[g]
        if self.archive.contains(x_g):
            self.dup_global += 1
            self._reject_duplicate()
            self.phase_log.append((PHASE_GLOBAL, OUTCOME_DUPLICATE))
            return OUTCOME_DUPLICATE
        f_g = self._spend_fe(x_g)
        self.ngs += 1
        if f_g < self.pop_f[g]:
            self.pop_x[g] = x_g
            self.pop_f[g] = f_g
        if f_g < self.best.f:
            self.best = Solution(x=x_g.copy(), f=f_g)
            self.phase_log.append((PHASE_GLOBAL, OUTCOME_IMPROVED))
            return OUTCOME_IMPROVED
        self.phase_log.append((PHASE_GLOBAL, OUTCOME_NO_IMPROVE))
        return OUTCOME_NO_IMPROVE

    def local_step(self, hook=None) -> tuple[str, bool]:
        """Minimize the local surrogate over the bounding box of its samples.

        Returns the outcome plus a stop flag raised by the hook.  A surrogate
        optimum that duplicates an archived point costs no true evaluation
        and counts as a failed local search.
        """
        n = min(self.local_n, self.archive.size)
        idx = self.archive.n_best(n)
        train_points = self.archive.positions[idx]
        train_x = np.ascontiguousarray(train_points.T)
        train_f = self.archive.fitness[idx].copy()
        predict = self.local_builder(train_x, train_f, self.rng_proj)
        region_lo = train_points.min(axis=0)
        region_hi = train_points.max(axis=0)
        inner_best, inner_init, inner_final = _evolve(predict, region_lo, region_hi,
                                                      self.cfg.inner_de,
                                                      self.cfg.inner_generations,
                                                      self.rng_local)
        stop = False
        if hook is not None:
            stop = bool(hook(LocalStepInfo(
                fe_used=self.problem.eval_count,
                train_x=train_x,
                train_f=train_f,
                predict=predict,
                inner_initial_population=inner_init,
                inner_final_population=inner_final,
                inner_best=inner_best,
                archive_positions=self.archive.positions,
                archive_fitness=self.archive.fitness,
            )))
        x_l = inner_best.x
        self.nls += 1
        if self.archive.contains(x_l):
            self.dup_local += 1
            self._reject_duplicate()
            self.phase_log.append((PHASE_LOCAL, OUTCOME_DUPLICATE))
            return OUTCOME_DUPLICATE, stop
        f_l = self._spend_fe(x_l)
        if f_l < self.best.f:
            self.best = Solution(x=x_l.copy(), f=f_l)
            self.nti += 1
            self.pop_x = np.vstack([self.pop_x, x_l[None, :]])
            self.pop_f = np.append(self.pop_f, f_l)
            self.phase_log.append((PHASE_LOCAL, OUTCOME_IMPROVED))
            return OUTCOME_IMPROVED, stop
        self.phase_log.append((PHASE_LOCAL, OUTCOME_NO_IMPROVE))
        return OUTCOME_NO_IMPROVE, stop

    def record(self, algorithm: str) -> RunRecord:
        return RunRecord(
            history_fe=np.asarray(self.history_fe, dtype=np.int64),
            history_best=np.asarray(self.history_best, dtype=np.float64),
            best=self.archive.best,
            nls=self.nls,
            nti=self.nti,
            ngs=self.ngs,
            dup_local=self.dup_local,
            dup_global=self.dup_global,
            init_size=self.cfg.init_size,
            fe_used=self.problem.eval_count,
            archive_size=self.archive.size,
            seed=self.cfg.seed,
            config=self.cfg.snapshot(),
            problem=self.problem.descriptor(),
            algorithm=algorithm,
            phase_log=self.phase_log,
        )


def _run(problem: Problem, cfg: RphsaConfig, local_builder, algorithm: str,
         local_hook=None, local_n: int | None = None) -> RunRecord:
    with _single_threaded_blas():
        state = RunState(problem, cfg, local_builder, local_n=local_n)
        phase = PHASE_GLOBAL
        while problem.eval_count < cfg.budget:
            if phase == PHASE_GLOBAL:
                outcome = state.global_step()
                if outcome != OUTCOME_IMPROVED:
                    phase = PHASE_LOCAL
            else:
                outcome, stop = state.local_step(local_hook)
                if outcome != OUTCOME_IMPROVED:
                    phase = PHASE_GLOBAL
                if stop:
                    break
    return state.record(algorithm)


def run_rphsa(problem: Problem, cfg: RphsaConfig, local_hook=None) -> RunRecord:
    """Full run with the subspace-ensemble local surrogate."""
    return _run(problem, cfg, _rp_rbf_builder(cfg, problem.dim), "rphsa",
                local_hook=local_hook)


def run_baseline_esao(problem: Problem, cfg: RphsaConfig, local_hook=None) -> RunRecord:
    """Identical loop, but the local surrogate is one traditional RBF.

    The model is trained in the full d-dimensional space on the
    ``cfg.resolve_baseline_n`` best entries (the 2 * dim rule unless
    overridden), mirroring how such local models are conventionally sized.
    """
    return _run(problem, cfg, _plain_rbf_builder(cfg, problem.dim), "baseline",
                local_hook=local_hook,
                local_n=cfg.resolve_baseline_n(problem.dim))


def make_config(**overrides) -> RphsaConfig:
    """Convenience constructor accepting nested DE overrides as dicts."""
    de = overrides.pop("de", None)
    inner = overrides.pop("inner_de", None)
    cfg = RphsaConfig(**overrides)
    if de is not None:
        cfg = replace(cfg, de=de if isinstance(de, DeParams) else DeParams(**de))
    if inner is not None:
        cfg = replace(cfg, inner_de=inner if isinstance(inner, DeParams)
                      else DeParams(**inner))
    return cfg
