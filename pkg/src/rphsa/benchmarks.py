"""Benchmark problems F1-F6 with fitness-evaluation accounting.

F1-F4 are the standard closed forms (Ellipsoid, Rosenbrock, Ackley,
Griewank).  F5 is a seeded shifted rotated Rastrigin with bias -330 and F6 a
seeded ten-component rotated hybrid composition with bias 10; both keep the
structural properties of their CEC2005 counterparts but draw shift and
rotation data from ``data_seed`` instead of the official data files.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, UnknownProblem
from .numerics import make_rng, orthonormalize_rows

DEFAULT_BOUNDS = {
    "F1": (-5.12, 5.12),
    "F2": (-2.048, 2.048),
    "F3": (-32.768, 32.768),
    "F4": (-600.0, 600.0),
    "F5": (-5.0, 5.0),
    "F6": (-5.0, 5.0),
}

_NAMES = {
    "F1": "Ellipsoid",
    "F2": "Rosenbrock",
    "F3": "Ackley",
    "F4": "Griewank",
    "F5": "Shifted Rotated Rastrigin",
    "F6": "Rotated Hybrid Composition",
}


class Problem:
    """A benchmark instance; ``eval_count`` increments once per evaluation."""

    def __init__(self, problem_id, dim, lower, upper, optimum_value,
                 optimum_position, fn, data_seed):
        self.id = problem_id
        self.name = _NAMES[problem_id]
        self.dim = dim
        self.lower = np.full(dim, lower, dtype=np.float64)
        self.upper = np.full(dim, upper, dtype=np.float64)
        self.optimum_value = float(optimum_value)
        self.optimum_position = np.asarray(optimum_position, dtype=np.float64)
        self.data_seed = data_seed
        self._fn = fn
        self.eval_count = 0

    def evaluate(self, x) -> float:
        arr = np.asarray(x, dtype=np.float64)
        if arr.shape != (self.dim,):
            raise DimensionMismatch(
                f"{self.id} expects dimension {self.dim}, got shape {arr.shape}"
            )
        self.eval_count += 1
        return float(self._fn(arr))

    def descriptor(self) -> dict:
        return {
            "id": self.id,
            "dim": self.dim,
            "data_seed": self.data_seed,
            "bounds": [float(self.lower[0]), float(self.upper[0])],
        }

    def clone(self) -> "Problem":
        """Fresh instance with the same data and a zeroed counter."""
        return make_problem(self.id, self.dim, self.data_seed,
                            bounds=(float(self.lower[0]), float(self.upper[0])))


def _ellipsoid(dim):
    weights = np.arange(1, dim + 1, dtype=np.float64)

    def fn(x):
        return weights @ (x * x)

    return fn


def _rosenbrock(x):
    head = x[:-1]
    return np.sum(100.0 * (x[1:] - head * head) ** 2 + (1.0 - head) ** 2)


def _ackley(x):
    return (-20.0 * np.exp(-0.2 * np.sqrt(np.mean(x * x)))
            - np.exp(np.mean(np.cos(2.0 * np.pi * x))) + 20.0 + np.e)


def _griewank(dim):
    roots = np.sqrt(np.arange(1, dim + 1, dtype=np.float64))

    def fn(x):
        return np.sum(x * x) / 4000.0 - np.prod(np.cos(x / roots)) + 1.0

    return fn


def _rastrigin(z):
    return np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z) + 10.0)


def _central_shift(rng, dim, lower, upper):
    # Uniform inside the central 80% of the box.
    width = upper - lower
    return lower + width * (0.1 + 0.8 * rng.random(dim))


def _random_rotation(rng, dim):
    return orthonormalize_rows(rng.standard_normal((dim, dim)))


def _shifted_rotated_rastrigin(dim, rng, lower, upper):
    shift = _central_shift(rng, dim, lower, upper)
    rotation = _random_rotation(rng, dim)

    def fn(x):
        z = rotation @ (x - shift)
        return _rastrigin(z) - 330.0

    return fn, shift, rotation


# Composition building blocks; every basic is zero at the origin so each
# component's optimum sits exactly on its shift.  Rosenbrock is evaluated at
# z + 1 to move its optimum to the origin (Weierstrass stand-in).
def _comp_sphere(z):
    return np.sum(z * z)


def _comp_rosenbrock(z):
    return _rosenbrock(z + 1.0)


def _comp_griewank_fn(dim):
    g = _griewank(dim)
    return g


def _hybrid_composition(dim, rng, lower, upper):
    """Ten-component weighted composition with component biases 0,100,...,900."""
    basics = [
        _comp_sphere,
        _rastrigin,
        _comp_griewank_fn(dim),
        _ackley,
        _comp_rosenbrock,
    ]
    lambdas = [5.0 / 100.0, 1.0, 5.0 / 60.0, 5.0 / 32.0, 5.0 / 10.0]
    n_comp = 10
    shifts = np.stack([_central_shift(rng, dim, lower, upper) for _ in range(n_comp)])
    rotations = [_random_rotation(rng, dim) for _ in range(n_comp)]
    comp_fns = [basics[i % 5] for i in range(n_comp)]
    comp_lambdas = np.array([lambdas[i % 5] for i in range(n_comp)])
    biases = 100.0 * np.arange(n_comp)
    sigma_sq = 1.0
    scale_c = 2000.0
    x_max = np.full(dim, upper)
    f_max = np.array([
        abs(comp_fns[i](rotations[i] @ (x_max / comp_lambdas[i])))
        for i in range(n_comp)
    ])

    def fn(x):
        diffs = x - shifts
        sq = np.einsum("ij,ij->i", diffs, diffs)
        w = np.exp(-sq / (2.0 * dim * sigma_sq))
        w_max = w.max()
        w = np.where(w == w_max, w, w * (1.0 - w_max ** 10))
        w /= w.sum()
        values = np.empty(n_comp)
        for i in range(n_comp):
            z = rotations[i] @ (diffs[i] / comp_lambdas[i])
            values[i] = scale_c * comp_fns[i](z) / f_max[i] + biases[i]
        return w @ values + 10.0

    return fn, shifts, rotations


def make_problem(problem_id: str, dim: int, data_seed: int = 0,
                 bounds: tuple[float, float] | None = None) -> Problem:
    """Build a deterministic benchmark instance.

    The same (id, dim, data_seed) always produces identical shift and
    rotation data.  ``bounds`` overrides the conventional domain.
    """
    pid = str(problem_id).upper()
    if pid not in DEFAULT_BOUNDS:
        raise UnknownProblem(f"unknown problem id {problem_id!r}")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    lower, upper = bounds if bounds is not None else DEFAULT_BOUNDS[pid]
    if pid == "F1":
        fn = _ellipsoid(dim)
        opt_pos = np.zeros(dim)
    elif pid == "F2":
        fn = _rosenbrock
        opt_pos = np.ones(dim)
    elif pid == "F3":
        fn = _ackley
        opt_pos = np.zeros(dim)
    elif pid == "F4":
        fn = _griewank(dim)
        opt_pos = np.zeros(dim)
    elif pid == "F5":
        rng = make_rng(np.random.SeedSequence([int(data_seed) & (2**63 - 1), 5]))
        fn, shift, rotation = _shifted_rotated_rastrigin(dim, rng, lower, upper)
        problem = Problem(pid, dim, lower, upper, -330.0, shift, fn, data_seed)
        problem.shift = shift
        problem.rotation = rotation
        return problem
    else:
        rng = make_rng(np.random.SeedSequence([int(data_seed) & (2**63 - 1), 6]))
        fn, shifts, rotations = _hybrid_composition(dim, rng, lower, upper)
        problem = Problem(pid, dim, lower, upper, 10.0, shifts[0], fn, data_seed)
        problem.shift = shifts[0]
        problem.component_shifts = shifts
        problem.component_rotations = rotations
        return problem
    optimum = 0.0
    return Problem(pid, dim, lower, upper, optimum, opt_pos, fn, data_seed)


def from_descriptor(desc: dict) -> Problem:
    """Rebuild a problem from its JSON descriptor."""
    return make_problem(desc["id"], int(desc["dim"]), int(desc["data_seed"]),
                        bounds=tuple(desc["bounds"]))
