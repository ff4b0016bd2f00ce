"""Restarted APPROX, restart schedules and restart-period calculators."""
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .engine import SamplingConfig, TauNiceSampler, approx_run
from .problems import ErrorBoundEstimate
from .theta import theta_init

__all__ = [
    "RestartSchedule",
    "RestartPolicy",
    "RestartResult",
    "schedule_variable",
    "schedule_log_grid",
    "restart_loop",
    "k_alpha",
    "k_star",
    "n_star",
    "variable_complexity",
    "k_star_general",
]


def _nu2(m):
    """Exponent of 2 in the positive integer ``m``."""
    return (m & -m).bit_length() - 1


class RestartSchedule:
    """A (possibly infinite) sequence of restart periods ``K_0, K_1, ...``.

    Use the constructors :meth:`fixed`, :meth:`variable`, :meth:`log_grid`
    and :meth:`explicit`.
    """

    def __init__(self, kind, params, length=None):
        self.kind = kind
        self.params = dict(params)
        self.length = length

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"RestartSchedule.{self.kind}({args})"

    # -- constructors ------------------------------------------------------
    @classmethod
    def fixed(cls, K):
        K = int(K)
        if K < 1:
            raise ValueError("restart period must be at least 1")
        return cls("fixed", {"K": K})

    @classmethod
    def fixed_from_estimate(cls, estimate: ErrorBoundEstimate, theta0):
        """Fixed period ``K*`` for a known error-bound constant."""
        if estimate.provenance == "unknown":
            raise ValueError("a fixed K* schedule needs mu; use a variable or log-grid schedule")
        return cls.fixed(k_star(estimate.mu_v, theta0))

    @classmethod
    def variable(cls, K0, double_every=None, truncate_after=None):
        """Ruler sequence ``K_r = 2**nu2(r + 1) * K0``.

        Parameters
        ----------
        K0 : int
        double_every : int, optional
            Multiply the base period by 2 after every ``double_every``
            restarts (regularization-path heuristic).
        truncate_after : int, optional
            Skip periods equal to the base once that many of them have been
            emitted (early-truncation heuristic, off by default).
        """
        K0 = int(K0)
        if K0 < 1:
            raise ValueError("K0 must be at least 1")
        if double_every is not None and int(double_every) < 1:
            raise ValueError("double_every must be positive")
        if truncate_after is not None and int(truncate_after) < 0:
            raise ValueError("truncate_after must be nonnegative")
        return cls("variable", {"K0": K0, "double_every": double_every, "truncate_after": truncate_after})

    @classmethod
    def log_grid(cls, N, unit=1):
        """``ceil(N / 2**i)`` copies of ``2**i * unit`` for ``i = 1, 2, ...``."""
        N = int(N)
        if N < 2:
            raise ValueError("N must be at least 2")
        if int(unit) < 1:
            raise ValueError("unit must be positive")
        return cls("log_grid", {"N": N, "unit": int(unit)})

    @classmethod
    def explicit(cls, periods):
        periods = [int(K) for K in periods]
        if not periods or min(periods) < 1:
            raise ValueError("explicit schedule needs positive periods")
        return cls("explicit", {"periods": periods}, length=len(periods))

    # -- access --------------------------------------------------------------
    def base_at(self, r):
        """Base period in effect at restart ``r`` (``K0`` for variable schedules)."""
        if self.kind != "variable":
            return self.period(r)
        D = self.params["double_every"]
        return self.params["K0"] << (r // D if D else 0)

    def _raw(self):
        kind, p = self.kind, self.params
        if kind == "fixed":
            return itertools.repeat(p["K"])
        if kind == "explicit":
            return iter(p["periods"])
        if kind == "log_grid":
            return self._log_grid_iter(p["N"], p["unit"])
        return (self.base_at(r) << _nu2(r + 1) for r in itertools.count())

    @staticmethod
    def _log_grid_iter(N, unit):
        for i in itertools.count(1):
            yield from itertools.repeat(unit << i, -(-N // (1 << i)))

    def __iter__(self):
        if self.kind == "variable" and self.params["truncate_after"] is not None:
            return self._truncated()
        return self._raw()

    def _truncated(self):
        limit = self.params["truncate_after"]
        seen = 0
        for r in itertools.count():
            K = self.base_at(r) << _nu2(r + 1)
            if K == self.base_at(r):
                seen += 1
                if seen > limit:
                    continue
            yield K

    def take(self, count):
        return list(itertools.islice(iter(self), count))

    def period(self, r):
        r = int(r)
        if r < 0:
            raise IndexError("restart index must be nonnegative")
        if self.kind == "fixed":
            return self.params["K"]
        if self.kind == "variable" and self.params["truncate_after"] is None:
            return self.base_at(r) << _nu2(r + 1)
        if self.length is not None and r >= self.length:
            raise IndexError("explicit schedule exhausted")
        return next(itertools.islice(iter(self), r, None))


def schedule_variable(K0, **kwargs):
    return RestartSchedule.variable(K0, **kwargs)


def schedule_log_grid(N, unit=1):
    return RestartSchedule.log_grid(N, unit)


@dataclass(frozen=True)
class RestartPolicy:
    """``guarantee_decrease`` keeps the better of the new and the previous point."""

    guarantee_decrease: bool = True

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        if value in ("decrease", True):
            return cls(True)
        if value in ("plain", False):
            return cls(False)
        raise ValueError(f"unknown restart policy {value!r}; expected 'plain' or 'decrease'")

    @property
    def name(self):
        return "decrease" if self.guarantee_decrease else "plain"


@dataclass
class RestartResult:
    x: np.ndarray
    F: float
    gap: float | None
    status: str             # converged | budget | max_restarts | schedule_exhausted
    restarts: int
    iterations: int
    coord_updates: int
    nnz_touched: int
    last_base: int
    periods: list = field(default_factory=list)
    F_history: list = field(default_factory=list)


def restart_loop(problem, eso, x0, schedule, policy="decrease", *, eps=None, max_updates=None,
                 max_restarts=None, sampling=None, trace=None, stride=None, theta=None,
                 offsets=(0, 0), on_restart=None):
    """APPROX restarted at the end of every period of ``schedule``.

    Parameters
    ----------
    problem, eso, x0
        As for :func:`approx_run`.
    schedule : RestartSchedule
    policy : RestartPolicy or {"plain", "decrease"}
        With ``"decrease"`` the kept point after a period is the candidate
        only if its objective is not larger than the previous kept point.
        The comparison uses :meth:`CompositeProblem.F_difference`, which
        resolves differences far below the rounding error of ``F`` itself.
    eps : float, optional
        Stop as soon as the duality gap of the kept point is ``<= eps``. The
        gap is checked before the first period and at every restart.
    max_updates : int, optional
        Budget of coordinate updates; the last period is cut to fit it.
    max_restarts : int, optional
    sampling : SamplingConfig or TauNiceSampler
        One random stream is shared by all periods.
    trace : ConvergenceTrace, optional
        Receives iteration records from the engine (with global counters)
        and one restart record per period.
    on_restart : callable, optional
        ``on_restart(problem, r, x_before, x_after, kept)`` after every
        period, where ``x_after`` is the point kept for the next period.

    Returns
    -------
    RestartResult
    """
    if eps is None and max_updates is None and max_restarts is None and schedule.length is None:
        raise ValueError("set eps, max_updates or max_restarts (or use a finite schedule)")
    if eps is not None and not eps > 0:
        raise ValueError("eps must be positive")
    pol = RestartPolicy.parse(policy)
    p = problem
    n = p.n
    if sampling is None:
        sampling = SamplingConfig(n, eso.tau, 0)
    sampler = sampling if isinstance(sampling, TauNiceSampler) else sampling.sampler()
    tau = sampler.tau
    if theta is None:
        theta = theta_init(tau, n)

    x = np.array(x0, dtype=float)
    F = p.F_value(x)
    gap = p.duality_gap(x) if eps is not None else None
    iters, used, nnz = offsets[0], offsets[1], 0
    used0 = offsets[1]
    periods, F_hist = [], [F]
    status = "schedule_exhausted"
    last_base = schedule.base_at(0)
    if trace is not None and not trace.rows:
        trace.record(iters, used, F, gap if trace.with_gap else None)
    if gap is not None and gap <= eps:
        return RestartResult(x, F, gap, "converged", 0, 0, 0, 0, last_base, periods, F_hist)

    for r, K in enumerate(schedule):
        if max_restarts is not None and r >= max_restarts:
            status = "max_restarts"
            break
        if max_updates is not None:
            K = min(K, (max_updates - (used - used0)) // tau)
            if K <= 0:
                status = "budget"
                break
        last_base = schedule.base_at(r)
        info = approx_run(p, eso, x, K, sampler, trace, stride=stride, theta=theta,
                          offsets=(iters, used), return_info=True)
        iters += K
        used += K * tau
        nnz += info.nnz_touched
        periods.append(K)
        F_cand = p.F_value(info.x, info.Ax)
        x_before = x
        if pol.guarantee_decrease and p.F_difference(info.x, x) > 0.0:
            kept = "previous"
        else:
            kept = "candidate"
            x, F = info.x, F_cand
        F_hist.append(F)
        if on_restart is not None:
            on_restart(p, r, x_before, x, kept)
        if trace is not None:
            trace.record_restart(r, K, used, F_hist[-2], F, kept)
        if eps is not None:
            gap = p.duality_gap(x)
            if gap <= eps:
                status = "converged"
                break
    else:
        status = "schedule_exhausted"
    if status == "schedule_exhausted" and max_updates is not None and used - used0 >= max_updates:
        status = "budget"

    return RestartResult(x, F, gap, status, len(periods), iters - offsets[0], used - used0, nnz,
                         last_base, periods, F_hist)


# -- calculators ---------------------------------------------------------------

def _check_pos(**kw):
    for name, val in kw.items():
        if not val > 0:
            raise ValueError(f"{name} must be positive")


def k_alpha(mu_v, theta0, alpha):
    """Restart period that contracts the conditional suboptimality by ``alpha``."""
    _check_pos(mu_v=mu_v, theta0=theta0, alpha=alpha)
    if not alpha < 1:
        raise ValueError("alpha must be below 1")
    return math.ceil(2.0 / theta0 * (math.sqrt((1.0 + mu_v) / (alpha * mu_v)) - 1.0) + 1.0)


def k_star(mu_v, theta0):
    """Fixed restart period ``ceil(2e/theta0 (sqrt((1+mu)/mu) - 1) + 1)``."""
    _check_pos(mu_v=mu_v, theta0=theta0)
    return math.ceil(2.0 * math.e / theta0 * (math.sqrt((1.0 + mu_v) / mu_v) - 1.0) + 1.0)


def n_star(mu_v, theta0, delta0, eps):
    """Iteration bound ``ln(delta0 / eps) K*`` for fixed restarts (real-valued)."""
    _check_pos(delta0=delta0, eps=eps)
    if not eps < delta0:
        raise ValueError("eps must be below delta0")
    return math.log(delta0 / eps) * k_star(mu_v, theta0)


def variable_complexity(K0, k_star_value, delta0, eps):
    """Number of doublings ``J`` and the total-iteration bound of variable restarts.

    Returns
    -------
    (J, bound) : (int, float)
    """
    _check_pos(K0=K0, k_star=k_star_value, delta0=delta0, eps=eps)
    L = math.log(delta0 / eps)
    if L <= 1.0:
        raise ValueError(f"ln(delta0/eps) = {L:.3g} <= 1; the bound's logarithms are degenerate")
    head = math.ceil(max(math.log2(k_star_value / K0), 0.0))
    J = head + math.ceil(math.log2(L / 2.0))
    bound = (head + math.ceil(math.log2(L)) + 1) * L * max(k_star_value, K0)
    return J, bound


def k_star_general(C_F, C_d, mu, a=0.0):
    """``ceil(sqrt(C_F + C_d / mu) / e - a)`` for a method with a generic sublinear guarantee."""
    _check_pos(C_F=C_F, mu=mu)
    if C_d < 0 or a < 0:
        raise ValueError("C_d and a must be nonnegative")
    return math.ceil(math.sqrt(C_F + C_d / mu) / math.e - a)
