"""Space-filling initial designs: Latin hypercube sampling with maximin selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .errors import InvalidBounds
from .numerics import RngStream

# Number of candidate hypercubes scored by the maximin criterion.
DEFAULT_CANDIDATES = 20


@dataclass(frozen=True)
class Design:
    """An initial design: ``points`` has one row per sample."""

    points: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


def _check_bounds(dim: int, lower, upper) -> tuple[np.ndarray, np.ndarray]:
    lo = np.broadcast_to(np.asarray(lower, dtype=np.float64), (dim,)).copy()
    hi = np.broadcast_to(np.asarray(upper, dtype=np.float64), (dim,)).copy()
    if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
        raise InvalidBounds("bounds must be finite")
    if np.any(lo >= hi):
        bad = int(np.argmax(lo >= hi))
        raise InvalidBounds(f"lower >= upper in dimension {bad}")
    return lo, hi


def latin_hypercube(n_points: int, dim: int, rng: RngStream) -> np.ndarray:
    """One plain Latin hypercube draw on the unit cube.

    Each of the ``n_points`` strata per dimension receives exactly one
    coordinate, placed uniformly at random within its stratum.
    """
    strata = np.empty((n_points, dim))
    for j in range(dim):
        strata[:, j] = rng.permutation(n_points)
    return (strata + rng.random((n_points, dim))) / n_points


def olhs(n_points: int, dim: int, lower, upper, rng: RngStream,
         candidates: int = DEFAULT_CANDIDATES) -> Design:
    """Maximin Latin hypercube design inside the box ``[lower, upper]``.

    Draws ``candidates`` independent Latin hypercubes and keeps the one
    whose minimum pairwise Euclidean distance (in the scaled box) is
    largest.  Preserves the Latin property: per dimension, exactly one
    point per stratum.
    """
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    lo, hi = _check_bounds(dim, lower, upper)
    width = hi - lo
    best_points = None
    best_score = -np.inf
    for _ in range(max(1, candidates)):
        pts = lo + latin_hypercube(n_points, dim, rng) * width
        score = pdist(pts).min()
        if score > best_score:
            best_score = score
            best_points = pts
    return Design(points=best_points, lower=lo, upper=hi)
