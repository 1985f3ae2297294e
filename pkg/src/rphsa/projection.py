"""Random orthonormal projections and the subspace RBF ensemble.

The ensemble trains one RBF per random k-dimensional subspace on the same
samples and fitness vector, then predicts with the plain average of the
member predictions.  Projection matrices have orthonormal rows, so projected
distances never exceed the originals; no sqrt(d/k) rescaling is applied to
the projected data (the analysis helper :func:`jl_distortion` offers it as a
reporting option only).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .errors import DegenerateInput, DimensionMismatch, InvalidDims, RankDeficient, RphsaError
from .numerics import RngStream, as_matrix, gaussian_sample, orthonormalize_rows, spawn_streams
from .surrogate import DUPLICATE_TOL, RbfModel, TrainingSet, predict_rbf, train_rbf

GENERATION_RETRIES = 3


@dataclass(frozen=True)
class ProjectionMatrix:
    """A (k, d) matrix with orthonormal rows mapping R^d onto R^k."""

    matrix: np.ndarray
    k: int
    d: int

    @staticmethod
    def identity(d: int) -> "ProjectionMatrix":
        """The trivial square projection; used by tests and the reduction hook."""
        return ProjectionMatrix(matrix=np.eye(d), k=d, d=d)


def generate_projection(k: int, d: int, rng: RngStream) -> ProjectionMatrix:
    """Draw a standard-normal (k, d) matrix and orthonormalize its rows.

    Rank deficiency of a Gaussian draw has negligible probability; it is
    retried a few times before :class:`RankDeficient` propagates.
    """
    if k < 1 or k > d:
        raise InvalidDims(f"need 1 <= k <= d, got k={k}, d={d}")
    last_error: RankDeficient | None = None
    for _ in range(GENERATION_RETRIES):
        gauss = gaussian_sample(rng, k * d).reshape(k, d)
        try:
            return ProjectionMatrix(matrix=orthonormalize_rows(gauss), k=k, d=d)
        except RankDeficient as exc:
            last_error = exc
    raise last_error


def project(p: ProjectionMatrix, x) -> np.ndarray:
    """Apply the projection column-by-column: (d, n) samples -> (k, n)."""
    mat = as_matrix(x, "samples")
    if mat.shape[0] != p.d:
        raise DimensionMismatch(f"samples have {mat.shape[0]} rows, projection expects {p.d}")
    return p.matrix @ mat


@dataclass(frozen=True)
class DistortionReport:
    """Pairwise squared-distance ratios after projection (optionally d/k corrected)."""

    ratios: np.ndarray
    min: float
    max: float
    mean: float
    epsilon: float
    corrected: bool


def jl_distortion(p: ProjectionMatrix, x, scale_correction: bool = True) -> DistortionReport:
    """Measure how well the projection preserves pairwise squared distances.

    For every pair of distinct columns the ratio
    ``||P xi - P xj||^2 * (d/k if corrected) / ||xi - xj||^2`` is reported,
    together with the worst-case deviation ``epsilon = max |ratio - 1|``.
    """
    mat = as_matrix(x, "samples")
    if mat.shape[0] != p.d:
        raise DimensionMismatch(f"samples have {mat.shape[0]} rows, projection expects {p.d}")
    if mat.shape[1] < 2:
        raise DegenerateInput("need at least 2 columns")
    cols = mat.T
    if pdist(cols, "chebyshev").min() <= DUPLICATE_TOL:
        raise DegenerateInput("duplicate columns present")
    orig = pdist(cols, "sqeuclidean")
    proj = pdist((p.matrix @ mat).T, "sqeuclidean")
    ratios = proj / orig
    if scale_correction:
        ratios = ratios * (p.d / p.k)
    return DistortionReport(
        ratios=ratios,
        min=float(ratios.min()),
        max=float(ratios.max()),
        mean=float(ratios.mean()),
        epsilon=float(np.abs(ratios - 1.0).max()),
        corrected=scale_correction,
    )


@dataclass(frozen=True)
class RpRbfEnsemble:
    """m (projection, sub-model) pairs trained on the same samples and fitness."""

    members: tuple[tuple[ProjectionMatrix, RbfModel], ...]
    m: int
    d: int

    def predict(self, x):
        return predict_ensemble(self, x)


def build_rp_rbf(data: TrainingSet, k: int, m: int, rng: RngStream,
                 projections: list[ProjectionMatrix] | None = None) -> RpRbfEnsemble:
    """Train the subspace ensemble: m fresh projections, m projected RBF fits.

    ``projections`` overrides the random draw (test hook, e.g. the identity
    projection with k = d); when given it must contain exactly ``m``
    matrices of matching shape and the RNG stays untouched.
    """
    d = data.dim
    if k < 1 or k > d:
        raise InvalidDims(f"need 1 <= k <= d, got k={k}, d={d}")
    if m < 1:
        raise ValueError("need at least one subspace")
    if projections is None:
        # Independent child streams derived up front: member training can be
        # parallelized without changing the result.
        streams = spawn_streams(rng, m)
        projections = [generate_projection(k, d, s) for s in streams]
    else:
        if len(projections) != m:
            raise ValueError(f"expected {m} projections, got {len(projections)}")
        for p in projections:
            if p.d != d or p.k != k:
                raise DimensionMismatch(
                    f"projection is ({p.k}, {p.d}), expected ({k}, {d})"
                )
    members = []
    for i, p in enumerate(projections):
        try:
            model = train_rbf(TrainingSet(project(p, data.samples), data.fitness))
        except RphsaError as exc:
            raise type(exc)(f"ensemble member {i}: {exc}") from exc
        members.append((p, model))
    return RpRbfEnsemble(members=tuple(members), m=m, d=d)


def predict_ensemble(ens: RpRbfEnsemble, x):
    """Average the member predictions at ``x``: a point (d,) or a batch (q, d).

    Members are summed in index order so results are bit-reproducible.
    """
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != ens.d:
        raise DimensionMismatch(
            f"query has shape {np.shape(x)}, ensemble dimension is {ens.d}"
        )
    total = np.zeros(arr.shape[0])
    for p, model in ens.members:
        total += predict_rbf(model, arr @ p.matrix.T)
    total /= ens.m
    return float(total[0]) if single else total
