"""Interpolating radial basis function surrogate with a multiquadric basis.

Training solves the dense Gram system phi(||x_i - x_j||) w = f, so the model
reproduces every training fitness exactly (up to solver accuracy).  The basis
bias is fixed at 1.0; distances are computed on raw, unnormalized inputs.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTrainingSet, DimensionMismatch, SingularGram, SingularMatrix
from .numerics import solve_linear

# Two samples closer than this in the infinity norm count as duplicates.
DUPLICATE_TOL = 1e-12


def multiquadric(r):
    """Multiquadric basis sqrt(r^2 + 1); accepts scalars or arrays."""
    r = np.asarray(r, dtype=np.float64)
    out = np.sqrt(r * r + 1.0)
    return float(out) if out.ndim == 0 else out


def _sq_dists(queries: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances (q, n) via a BLAS-backed expansion.

    Both point sets are shifted by the center centroid before expanding
    ||a - b||^2 = |a|^2 + |b|^2 - 2 a.b, which keeps the cancellation error
    at the scale of the local point spread instead of the absolute
    coordinates.  Tiny negative results are clamped to zero.
    """
    mu = centers.mean(axis=0)
    q = queries - mu
    c = centers - mu
    d2 = (q * q).sum(axis=1)[:, None] + (c * c).sum(axis=1)[None, :]
    d2 -= 2.0 * (q @ c.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


@dataclass(frozen=True)
class TrainingSet:
    """Training data: ``samples`` is (dim, n) with one column per point."""

    samples: np.ndarray
    fitness: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        fitness = np.asarray(self.fitness, dtype=np.float64)
        if samples.ndim != 2:
            raise DimensionMismatch("samples must be a (dim, n) matrix")
        if fitness.ndim != 1 or fitness.shape[0] != samples.shape[1]:
            raise DimensionMismatch(
                f"fitness length {fitness.shape} does not match {samples.shape[1]} samples"
            )
        if samples.shape[1] < 2:
            raise DegenerateTrainingSet("need at least 2 training samples")
        if not (np.isfinite(samples).all() and np.isfinite(fitness).all()):
            raise ValueError("training data contains non-finite values")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "fitness", fitness)

    @property
    def dim(self) -> int:
        return self.samples.shape[0]

    @property
    def size(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class RbfModel:
    """Trained interpolant: centers (n, dim) rows, learned weights (n,)."""

    centers: np.ndarray
    weights: np.ndarray
    dim: int
    basis_bias: float = field(default=1.0)

    def predict(self, x):
        return predict_rbf(self, x)


def dedup_rows(points: np.ndarray, tol: float = DUPLICATE_TOL) -> np.ndarray:
    """Indices of rows to keep after greedy first-occurrence deduplication.

    A row is dropped when it lies within ``tol`` (infinity norm) of an
    earlier kept row.  Candidate matches are narrowed by the first
    coordinate so the common all-distinct case costs O(n log n).
    """
    n = points.shape[0]
    first = points[:, 0]
    kept: list[int] = []
    kept_keys: list[float] = []   # first coordinates of kept rows, sorted
    kept_order: list[int] = []    # kept row indices aligned with kept_keys
    for i in range(n):
        c = first[i]
        lo = bisect_left(kept_keys, c - tol)
        hi = bisect_right(kept_keys, c + tol)
        duplicate = False
        for j in range(lo, hi):
            if np.abs(points[i] - points[kept_order[j]]).max() <= tol:
                duplicate = True
                break
        if duplicate:
            continue
        pos = bisect_left(kept_keys, c)
        kept_keys.insert(pos, c)
        kept_order.insert(pos, i)
        kept.append(i)
    return np.asarray(kept, dtype=np.intp)


def train_rbf(data: TrainingSet) -> RbfModel:
    """Fit the interpolating RBF by solving the multiquadric Gram system.

    Duplicate samples (within ``DUPLICATE_TOL``, first occurrence kept) are
    removed before training.  A singular Gram matrix is retried once with a
    diagonal jitter of 1e-8 * trace(phi)/n; if that also fails,
    :class:`SingularGram` is raised.
    """
    points = data.samples.T
    keep = dedup_rows(np.ascontiguousarray(points))
    if keep.shape[0] < 2:
        raise DegenerateTrainingSet(
            f"only {keep.shape[0]} distinct samples after deduplication"
        )
    centers = np.ascontiguousarray(points[keep])
    f = data.fitness[keep]
    gram = np.sqrt(_sq_dists(centers, centers) + 1.0)
    try:
        weights = solve_linear(gram, f)
    except SingularMatrix:
        jitter = 1e-8 * np.trace(gram) / gram.shape[0]
        try:
            weights = solve_linear(gram + jitter * np.eye(gram.shape[0]), f)
        except SingularMatrix as exc:
            raise SingularGram(f"Gram matrix singular even with jitter {jitter:.3e}") from exc
    return RbfModel(centers=centers, weights=weights, dim=centers.shape[1])


def predict_rbf(model: RbfModel, x):
    """Evaluate the interpolant at ``x``: a point (dim,) or a batch (q, dim)."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != model.dim:
        raise DimensionMismatch(
            f"query has shape {np.shape(x)}, model dimension is {model.dim}"
        )
    values = np.sqrt(_sq_dists(arr, model.centers) + 1.0) @ model.weights
    return float(values[0]) if single else values
