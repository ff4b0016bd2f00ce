"""APPROX and plain proximal coordinate descent.

The accelerated method keeps the pair ``(u, z)`` with

    y_k = theta_k**2 u_k + z_k,     x_k = theta_{k-1}**2 u_k + z_k,

so that an iteration touches only the sampled coordinates of ``u`` and ``z``
and the matching rows of the cached products ``A u`` and ``A z``. The caches
are rebuilt from scratch every ``refresh`` iterations (default ``10 n``).
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data_io import make_rng
from .problems import CompositeProblem, EsoVector
from .theta import ThetaSequence, theta_init

__all__ = [
    "SamplingConfig",
    "TauNiceSampler",
    "sample_subset",
    "RunInfo",
    "NonFiniteError",
    "approx_run",
    "cd_run",
    "cd_solve",
]

GENERATOR = "numpy.random.Philox"
_CHUNK = 1 << 15


class NonFiniteError(FloatingPointError):
    """A solver produced a non-finite coordinate value."""

    def __init__(self, iteration, coordinate):
        super().__init__(f"non-finite value at iteration {iteration}, coordinate {coordinate}")
        self.iteration = iteration
        self.coordinate = coordinate


@dataclass(frozen=True)
class SamplingConfig:
    """tau-nice sampling of ``tau`` out of ``n`` coordinates."""

    n: int
    tau: int = 1
    seed: int = 0
    scheme: str = "tau-nice"

    def __post_init__(self):
        if self.scheme != "tau-nice":
            raise ValueError(f"unsupported sampling scheme {self.scheme!r}")
        if not 1 <= self.tau <= self.n:
            raise ValueError(f"need 1 <= tau <= n, got tau={self.tau}, n={self.n}")

    def sampler(self):
        return TauNiceSampler(self.n, self.tau, self.seed)


class TauNiceSampler:
    """Stream of uniformly random ``tau``-subsets driven by a Philox generator.

    Draws are reproducible for a given seed and do not depend on how the
    stream is split into calls of :meth:`draw`.
    """

    generator = GENERATOR

    def __init__(self, n, tau, seed):
        SamplingConfig(n, tau, seed)
        self.n, self.tau, self.seed = int(n), int(tau), seed
        self.rng = make_rng(seed)
        self._perm = np.arange(self.n, dtype=np.int64)

    def draw(self, count):
        """Array of shape ``(count, tau)``; each row is one subset."""
        if self.tau == self.n:
            return np.broadcast_to(np.arange(self.n, dtype=np.int64), (count, self.n))
        out = np.empty((count, self.tau), dtype=np.int64)
        _kernels.sample_block(self._perm, self.rng.random((count, self.tau)), out)
        return out


def sample_subset(cfg, rng):
    """One tau-nice subset drawn with the generator ``rng`` (sorted)."""
    if cfg.tau == cfg.n:
        return np.arange(cfg.n)
    perm = np.arange(cfg.n, dtype=np.int64)
    out = np.empty((1, cfg.tau), dtype=np.int64)
    _kernels.sample_block(perm, rng.random((1, cfg.tau)), out)
    return np.sort(out[0])


@dataclass
class RunInfo:
    """Final state of a solver run."""

    x: np.ndarray
    Ax: np.ndarray          # effective A x (with centering correction)
    z: np.ndarray | None
    iterations: int
    coord_updates: int
    nnz_touched: int


def _model_args(p):
    A = p.A
    return (A.data, A.indices, A.indptr, p.offset, p.colsum, p.has_offset, p.b, p.sum_b,
            p.loss, p.scale, p.lam)


def _as_sampler(sampling, n, tau):
    if isinstance(sampling, TauNiceSampler):
        s = sampling
    elif isinstance(sampling, SamplingConfig):
        s = sampling.sampler()
    else:
        raise TypeError("sampling must be a SamplingConfig or TauNiceSampler")
    if s.n != n:
        raise ValueError(f"sampler is for n={s.n}, problem has n={n}")
    if s.tau != tau:
        raise ValueError(f"ESO vector is for tau={tau}, sampler draws tau={s.tau}")
    return s


def _check_inputs(p, eso, x0, K):
    if not isinstance(p, CompositeProblem):
        raise TypeError("problem must be a CompositeProblem")
    if not isinstance(eso, EsoVector):
        raise TypeError("eso must be an EsoVector")
    if len(eso) != p.n:
        raise ValueError("ESO vector length does not match the problem")
    if int(K) < 0:
        raise ValueError("K must be nonnegative")
    x0 = np.array(x0, dtype=float)
    if x0.shape != (p.n,) or not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be a finite vector of length n")
    return x0, int(K)


def _schedule(K, stride, refresh):
    """Boundaries where the driver has to stop the kernel."""
    stops = {K}
    for every in (stride, refresh):
        if every:
            stops.update(range(every, K, every))
    return sorted(stops)


def approx_run(problem, eso, x0, K, sampling, trace=None, *, stride=None, refresh=None,
               theta=None, callback=None, offsets=(0, 0), return_info=False):
    """Run ``K`` iterations of APPROX from ``x0``.

    Parameters
    ----------
    problem : CompositeProblem
    eso : EsoVector
        Weights admissible for the sampling (same ``tau``).
    x0 : array
    K : int
    sampling : SamplingConfig or TauNiceSampler
        A config starts a fresh stream; a sampler continues its stream.
    trace : ConvergenceTrace, optional
        Receives ``F(x_k)`` (and the duality gap if ``trace.with_gap``) every
        ``stride`` iterations and at ``k = K``.
    stride : int, optional
        Record interval; defaults to ``trace.stride`` or ``n``.
    refresh : int, optional
        Iterations between full recomputations of the cached products.
    theta : ThetaSequence, optional
        Shared cache of momentum coefficients (must start at ``tau / n``).
    callback : callable, optional
        ``callback(k, x_k, z_k)`` at ``k = 0`` and at the same points as the
        trace.
    offsets : (int, int)
        Iteration and coordinate-update counts added to trace records.
    return_info : bool
        Return a :class:`RunInfo` instead of ``x_K``.
    """
    p = problem
    x0, K = _check_inputs(p, eso, x0, K)
    n = p.n
    sampler = _as_sampler(sampling, n, eso.tau)
    tau = sampler.tau
    if theta is None:
        theta = theta_init(tau, n)
    elif not isinstance(theta, ThetaSequence) or theta.theta0 != tau / n:
        raise ValueError("theta sequence must start at tau / n")
    if refresh is None:
        refresh = 10 * n
    if stride is None and (trace is not None or callback is not None):
        stride = (trace.stride if trace is not None else None) or n
    thetas = theta.prefix(K + 1)

    A = p.A
    u = np.zeros(n)
    z = x0.copy()
    ru = np.zeros(p.m)
    rz = A @ z
    scal = np.array([0.0, rz.sum(), 0.0, float(p.offset @ z)])
    grads = np.empty(tau)
    counters = _kernels.empty_counters()
    info = np.zeros(2, dtype=np.int64)
    args = _model_args(p)
    n_over_tau = n / tau

    def refresh_caches():
        ru[:] = A @ u
        rz[:] = A @ z
        scal[:] = (ru.sum(), rz.sum(), float(p.offset @ u), float(p.offset @ z))

    def current(k):
        if k == 0:
            return z.copy(), (rz - scal[3]).copy()
        t2 = thetas[k - 1] ** 2
        x = t2 * u + z
        Ax = t2 * (ru - scal[2]) + (rz - scal[3])
        return x, Ax

    def emit(k, to_trace=True):
        x, Ax = current(k)
        if trace is not None and to_trace:
            gap = p.duality_gap(x) if trace.with_gap else None
            trace.record(offsets[0] + k, offsets[1] + k * tau, p.F_value(x, Ax), gap)
        if callback is not None:
            callback(k, x, z.copy())

    if stride and K > 0:
        # the start point is recorded once per trace, but always reported to the callback
        emit(0, to_trace=offsets == (0, 0) and trace is not None and not trace.rows)

    k = 0
    for stop in _schedule(K, stride, refresh):
        while k < stop:
            step = min(stop - k, _CHUNK)
            coords = sampler.draw(step)
            status = _kernels.approx_steps(*args, eso.v, n_over_tau, thetas[k:k + step], coords,
                                           u, z, ru, rz, scal, grads, counters, info)
            if status:
                raise NonFiniteError(k + int(info[0]), int(info[1]))
            k += step
        if refresh and k % refresh == 0 and k < K:
            refresh_caches()
        if stride and (k % stride == 0 or k == K):
            emit(k)

    x, Ax = current(K)
    if not return_info:
        return x
    return RunInfo(x, Ax, z.copy(), K, K * tau, int(counters[0]))


def cd_run(problem, eso, x0, K, sampling, trace=None, *, stride=None, refresh=None,
           callback=None, offsets=(0, 0), return_info=False):
    """``K`` iterations of randomized proximal coordinate descent.

    Each sampled coordinate takes the step
    ``x_i <- prox_{psi_i / v_i}(x_i - grad_i f(x) / v_i)``. With ``tau = 1``
    and ``v`` the coordinate Lipschitz constants, ``F`` never increases.
    Arguments are as in :func:`approx_run`; ``callback(k, x, None)``.
    """
    p = problem
    x0, K = _check_inputs(p, eso, x0, K)
    n = p.n
    sampler = _as_sampler(sampling, n, eso.tau)
    tau = sampler.tau
    if refresh is None:
        refresh = 10 * n
    if stride is None and (trace is not None or callback is not None):
        stride = (trace.stride if trace is not None else None) or n

    A = p.A
    x = x0.copy()
    rx = A @ x
    scal = np.array([rx.sum(), float(p.offset @ x)])
    grads = np.empty(tau)
    counters = _kernels.empty_counters()
    info = np.zeros(2, dtype=np.int64)
    args = _model_args(p)

    def emit(k, to_trace=True):
        Ax = rx - scal[1]
        if trace is not None and to_trace:
            gap = p.duality_gap(x) if trace.with_gap else None
            trace.record(offsets[0] + k, offsets[1] + k * tau, p.F_value(x, Ax), gap)
        if callback is not None:
            callback(k, x.copy(), None)

    if stride and K > 0:
        emit(0, to_trace=offsets == (0, 0) and trace is not None and not trace.rows)

    k = 0
    for stop in _schedule(K, stride, refresh):
        while k < stop:
            step = min(stop - k, _CHUNK)
            coords = sampler.draw(step)
            status = _kernels.cd_steps(*args, eso.v, coords, x, rx, scal, grads, counters, info)
            if status:
                raise NonFiniteError(k + int(info[0]), int(info[1]))
            k += step
        if refresh and k % refresh == 0 and k < K:
            rx[:] = A @ x
            scal[:] = (rx.sum(), float(p.offset @ x))
        if stride and (k % stride == 0 or k == K):
            emit(k)

    if not return_info:
        return x
    return RunInfo(x, rx - scal[1], None, K, K * tau, int(counters[0]))


def cd_solve(problem, eso, x0, sampling, *, eps=None, max_updates=None, check_every=None,
             trace=None, offsets=(0, 0)):
    """Coordinate descent until the duality gap is ``<= eps`` or the budget runs out.

    The gap is checked every ``check_every`` iterations (default ``n``, one
    epoch for ``tau = 1``). Returns ``(x, gap, status, coord_updates)`` with
    ``status`` in ``{"converged", "budget"}``.
    """
    if eps is None and max_updates is None:
        raise ValueError("set eps or max_updates")
    p = problem
    sampler = _as_sampler(sampling if not isinstance(sampling, SamplingConfig) else sampling.sampler(),
                          p.n, eso.tau)
    tau = sampler.tau
    every = check_every or p.n
    x = np.array(x0, dtype=float)
    used = 0
    gap = p.duality_gap(x) if eps is not None else None
    while eps is None or gap > eps:
        K = every
        if max_updates is not None:
            K = min(K, (max_updates - used) // tau)
            if K <= 0:
                return x, gap, "budget", used
        x = cd_run(p, eso, x, K, sampler, trace, stride=every,
                   offsets=(offsets[0] + used // tau, offsets[1] + used))
        used += K * tau
        if eps is not None:
            gap = p.duality_gap(x)
    return x, gap, "converged", used
