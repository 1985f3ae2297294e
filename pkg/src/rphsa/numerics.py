"""Dense linear algebra and seeded random-number streams.

Matrices are plain 2-D float64 numpy arrays (row-major); validation happens
at construction sites via :func:`as_matrix`.  Random streams are numpy
``Generator`` objects over PCG64, so a single integer seed reproduces every
draw in a run.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import DimensionMismatch, RankDeficient, SingularMatrix

# Relative pivot threshold below which LU is declared singular.
PIVOT_TOL = 1e-12
# Absolute residual threshold for a Gram-Schmidt row to count as dependent.
RANK_TOL = 1e-12

RngStream = np.random.Generator


def make_rng(seed: int) -> RngStream:
    """Create a deterministic random stream from a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_streams(rng: RngStream, count: int) -> list[RngStream]:
    """Derive ``count`` independent child streams from ``rng``.

    Children depend only on the parent's spawn counter, not on how much of
    its bit stream was consumed, so serial and parallel consumers see the
    same sequences.
    """
    return list(rng.spawn(count))


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite 2-D float64 array."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_vector(b, name: str = "vector") -> np.ndarray:
    arr = np.ascontiguousarray(b, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def solve_linear(a, b) -> np.ndarray:
    """Solve ``A x = b`` by LU factorization with partial pivoting.

    Raises :class:`SingularMatrix` when any pivot magnitude falls below
    ``PIVOT_TOL`` times the largest entry of ``A``.
    """
    mat = as_matrix(a, "A")
    rhs = as_vector(b, "b")
    n = mat.shape[0]
    if mat.shape[1] != n:
        raise DimensionMismatch(f"A must be square, got {mat.shape}")
    if rhs.shape[0] != n:
        raise DimensionMismatch(f"b has length {rhs.shape[0]}, expected {n}")
    scale = np.abs(mat).max()
    with warnings.catch_warnings():
        # Singularity is diagnosed from the pivots below.
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(mat, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or pivots.min() < PIVOT_TOL * scale:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below threshold {PIVOT_TOL * scale:.3e}"
        )
    return lu_solve((lu, piv), rhs, check_finite=False)


def orthonormalize_rows(a) -> np.ndarray:
    """Return a matrix with orthonormal rows spanning the rows of ``a``.

    Implemented as Householder QR of the transpose with the sign convention
    that reproduces Gram-Schmidt output (positive projection coefficients on
    the diagonal).  Raises :class:`RankDeficient` when the residual norm of
    some row after projecting out the previous ones drops below
    ``RANK_TOL``.
    """
    mat = as_matrix(a)
    k, d = mat.shape
    if k > d:
        raise DimensionMismatch(f"cannot orthonormalize {k} rows in dimension {d}")
    q, r = np.linalg.qr(mat.T)
    diag = np.diag(r).copy()
    if np.abs(diag).min() < RANK_TOL:
        raise RankDeficient(
            f"row residual {np.abs(diag).min():.3e} below {RANK_TOL:.0e}"
        )
    # QR fixes signs arbitrarily; flip columns so diag(R) > 0, which matches
    # the Gram-Schmidt result for the same input.
    q = q * np.sign(diag)
    return np.ascontiguousarray(q.T)


def gaussian_sample(rng: RngStream, count: int) -> np.ndarray:
    """Draw ``count`` i.i.d. standard normal variates from ``rng``."""
    return rng.standard_normal(int(count))
