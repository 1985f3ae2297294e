"""Differential evolution: DE/best/1/bin operators and a standalone optimizer.

The standalone optimizer is used to locate the minimum of a cheap surrogate,
so the objective is called on whole generations at once: it must accept a
(q, dim) array and return (q,) values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidBounds, PopulationTooSmall
from .numerics import RngStream


@dataclass(frozen=True)
class Solution:
    """A decision vector with its (true or surrogate) fitness."""

    x: np.ndarray
    f: float


VARIANTS = ("best/1/bin", "rand/1/bin")


@dataclass
class DeParams:
    scale_f: float = 0.5
    crossover_cr: float = 0.9
    pop_size: int = 50
    variant: str = "best/1/bin"

    def __post_init__(self):
        if not 0.0 < self.scale_f <= 2.0:
            raise ValueError(f"scale_f must lie in (0, 2], got {self.scale_f}")
        if not 0.0 <= self.crossover_cr <= 1.0:
            raise ValueError(f"crossover_cr must lie in [0, 1], got {self.crossover_cr}")
        if self.pop_size < 4:
            raise PopulationTooSmall(f"pop_size must be >= 4, got {self.pop_size}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


@dataclass
class Population:
    """Candidate pool for the DE operators; one row per individual."""

    positions: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    generation: int = field(default=0)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.ndim != 2:
            raise DimensionMismatch("positions must be a (p, dim) array")
        if pos.shape[0] < 4:
            raise PopulationTooSmall(f"need at least 4 individuals, got {pos.shape[0]}")
        lo = np.broadcast_to(np.asarray(self.lower, dtype=np.float64), (pos.shape[1],))
        hi = np.broadcast_to(np.asarray(self.upper, dtype=np.float64), (pos.shape[1],))
        if np.any(lo >= hi):
            raise InvalidBounds("lower >= upper")
        if np.any(pos < lo) or np.any(pos > hi):
            raise InvalidBounds("individual outside the box")
        self.positions = pos
        self.lower = lo.copy()
        self.upper = hi.copy()

    @property
    def size(self) -> int:
        return self.positions.shape[0]


def mutate(pop: Population, target_index: int, best: Solution, params: DeParams,
           rng: RngStream) -> np.ndarray:
    """DE/best/1 mutant for one target: best + F * (x_r1 - x_r2), clamped.

    r1 and r2 are drawn without replacement from the population excluding
    the target.  Out-of-bounds coordinates are repaired by clamping.
    """
    p = pop.size
    if p < 4:
        raise PopulationTooSmall(f"need at least 4 individuals, got {p}")
    pool = np.delete(np.arange(p), target_index)
    r1, r2 = rng.choice(pool, size=2, replace=False)
    v = best.x + params.scale_f * (pop.positions[r1] - pop.positions[r2])
    return np.clip(v, pop.lower, pop.upper)


def crossover(parent: Solution, mutant: np.ndarray, params: DeParams,
              rng: RngStream) -> np.ndarray:
    """Binomial crossover with a forced coordinate j_rand from the mutant."""
    mutant = np.asarray(mutant, dtype=np.float64)
    if mutant.shape != parent.x.shape:
        raise DimensionMismatch(
            f"mutant shape {mutant.shape} does not match parent {parent.x.shape}"
        )
    d = mutant.shape[0]
    j_rand = int(rng.integers(d))
    mask = rng.random(d) < params.crossover_cr
    mask[j_rand] = True
    return np.where(mask, mutant, parent.x)


def _distinct_draws(p: int, count: int, rng: RngStream) -> list[np.ndarray]:
    """Per-target random index tuples, pairwise distinct and != target."""
    targets = np.arange(p)
    draws = [rng.integers(0, p, size=p) for _ in range(count)]

    def collisions():
        bad = np.zeros(p, dtype=bool)
        for i, a in enumerate(draws):
            bad |= a == targets
            for b in draws[:i]:
                bad |= a == b
        return bad

    bad = collisions()
    while bad.any():
        n_bad = int(bad.sum())
        for a in draws:
            a[bad] = rng.integers(0, p, size=n_bad)
        bad = collisions()
    return draws


def generate_trials(positions: np.ndarray, best_x: np.ndarray, lower: np.ndarray,
                    upper: np.ndarray, params: DeParams, rng: RngStream) -> np.ndarray:
    """One DE trial vector per row of ``positions`` (batched).

    best/1 mutates around ``best_x``; rand/1 around a random distinct base
    row (``best_x`` is then unused).  Binomial crossover with a forced
    coordinate follows either way.
    """
    p, d = positions.shape
    if p < 4:
        raise PopulationTooSmall(f"need at least 4 individuals, got {p}")
    if params.variant == "rand/1/bin":
        r0, r1, r2 = _distinct_draws(p, 3, rng)
        mutants = positions[r0] + params.scale_f * (positions[r1] - positions[r2])
    else:
        r1, r2 = _distinct_draws(p, 2, rng)
        mutants = best_x + params.scale_f * (positions[r1] - positions[r2])
    np.clip(mutants, lower, upper, out=mutants)
    j_rand = rng.integers(0, d, size=p)
    mask = rng.random((p, d)) < params.crossover_cr
    mask[np.arange(p), j_rand] = True
    return np.where(mask, mutants, positions)


def _evolve(objective, lower: np.ndarray, upper: np.ndarray, params: DeParams,
            generations: int, rng: RngStream):
    """Run DE; returns (best solution, initial positions, final positions)."""
    d = lower.shape[0]
    p = params.pop_size
    positions = lower + rng.random((p, d)) * (upper - lower)
    initial = positions.copy()
    fitness = np.asarray(objective(positions), dtype=np.float64)
    best_idx = int(np.argmin(fitness))
    for _ in range(generations):
        trials = generate_trials(positions, positions[best_idx], lower, upper, params, rng)
        trial_fitness = np.asarray(objective(trials), dtype=np.float64)
        adopt = trial_fitness < fitness
        positions[adopt] = trials[adopt]
        fitness[adopt] = trial_fitness[adopt]
        best_idx = int(np.argmin(fitness))
    best = Solution(x=positions[best_idx].copy(), f=float(fitness[best_idx]))
    return best, initial, positions


def de_optimize(objective, lower, upper, params: DeParams, generations: int,
                rng: RngStream) -> Solution:
    """Minimize ``objective`` over the box with DE/best/1/bin.

    ``objective`` receives a (q, dim) array and returns (q,) values.  The
    total number of evaluated points is exactly pop_size * (generations + 1)
    (one initialization batch plus one trial batch per generation); greedy
    one-to-one selection keeps the population best monotone.
    """
    lo = np.asarray(lower, dtype=np.float64)
    hi = np.asarray(upper, dtype=np.float64)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise DimensionMismatch("lower/upper must be 1-D arrays of equal length")
    if np.any(lo > hi):
        raise InvalidBounds("lower > upper")
    best, _, _ = _evolve(objective, lo, hi, params, generations, rng)
    return best
