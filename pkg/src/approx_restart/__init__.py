"""Accelerated proximal coordinate descent (APPROX) with restarts.

Main entry points:

- :func:`approx_run`, :func:`cd_run` run the solvers for a fixed number of
  iterations;
- :func:`restart_loop` restarts APPROX along a :class:`RestartSchedule`;
- :mod:`approx_restart.rates` evaluates the contraction factors of
  restarted APPROX;
- :class:`LassoProblem`, :class:`LogRegProblem` and
  :class:`QuadraticProblem` are the supported objectives.
"""
from .data_io import (
    Dataset,
    LibsvmFormatError,
    make_rng,
    normalize_columns,
    parse_libsvm,
    synth_lasso,
    synth_logreg,
    write_libsvm,
)
from .engine import NonFiniteError, RunInfo, SamplingConfig, TauNiceSampler, approx_run, cd_run, cd_solve, sample_subset
from .problems import (
    CompositeProblem,
    ErrorBoundEstimate,
    EsoVector,
    LassoProblem,
    LogRegProblem,
    QuadraticProblem,
    exact_mu_v,
)
from .rates import RateQuery, figure1_table, rho_bound, rho_exact, sigma_sequence
from .restart import (
    RestartPolicy,
    RestartResult,
    RestartSchedule,
    k_alpha,
    k_star,
    k_star_general,
    n_star,
    restart_loop,
    schedule_log_grid,
    schedule_variable,
    variable_complexity,
)
from .theta import ThetaSequence, theta_at, theta_bounds, theta_init
from .trace import ConvergenceTrace

__version__ = "0.1.0"
