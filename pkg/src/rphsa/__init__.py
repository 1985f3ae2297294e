"""Hierarchical surrogate-assisted evolutionary optimization with
random-projection RBF ensembles, plus benchmarks and an experiment harness.
"""

from . import errors
from .benchmarks import Problem, from_descriptor, make_problem
from .de import DeParams, Population, Solution, crossover, de_optimize, mutate
from .harness import (Campaign, ProbeResult, accuracy_probe, compare_dirs,
                      emit_convergence_plot, run_campaign, sweep,
                      wilcoxon_ranksum)
from .numerics import (RngStream, gaussian_sample, make_rng,
                       orthonormalize_rows, solve_linear, spawn_streams)
from .optimizer import (Archive, RphsaConfig, RunRecord, RunState, make_config,
                        run_baseline_esao, run_rphsa)
from .projection import (ProjectionMatrix, RpRbfEnsemble, build_rp_rbf,
                         generate_projection, jl_distortion, predict_ensemble,
                         project)
from .sampling import Design, latin_hypercube, olhs
from .surrogate import (RbfModel, TrainingSet, multiquadric, predict_rbf,
                        train_rbf)

__version__ = "0.1.0"

__all__ = [
    "Archive", "Campaign", "DeParams", "Design", "Population", "ProbeResult",
    "ProjectionMatrix", "Problem", "RbfModel", "RngStream", "RpRbfEnsemble",
    "RphsaConfig", "RunRecord", "RunState", "Solution", "TrainingSet",
    "accuracy_probe", "build_rp_rbf", "compare_dirs", "crossover",
    "de_optimize", "emit_convergence_plot", "errors", "from_descriptor",
    "gaussian_sample", "generate_projection", "jl_distortion",
    "latin_hypercube", "make_config", "make_problem", "make_rng",
    "multiquadric", "mutate", "olhs", "orthonormalize_rows",
    "predict_ensemble", "predict_rbf", "project", "run_baseline_esao",
    "run_campaign", "run_rphsa", "solve_linear", "spawn_streams", "sweep",
    "train_rbf", "wilcoxon_ranksum",
]
