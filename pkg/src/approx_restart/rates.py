"""Worst-case contraction of APPROX under strong convexity.

For a ``mu``-strongly convex objective (in the ``||.||_v`` norm) one run of
``K`` APPROX iterations contracts the Lyapunov quantity

    Delta(x) = (1 - theta0)/theta0**2 (F(x) - F*) + 1/(2 theta0**2) dist_v(x, X*)**2

by a factor ``rho_K`` in expectation. :func:`rho_exact` evaluates the exact
factor obtained from saturating the supermartingale inequalities,
:func:`rho_bound` the simpler closed-form upper bound.
"""
from collections import namedtuple
import csv
import io
import math

import numpy as np

from .theta import ThetaSequence

__all__ = [
    "RateQuery",
    "sigma_sequence",
    "rho_exact",
    "rho_exact_all",
    "rho_bound",
    "rho_bound_all",
    "rho_recursive",
    "d_bounds",
    "lyapunov",
    "cd_rate_default",
    "per_iter_rates",
    "figure1_table",
    "improvement_window",
    "write_rates_csv",
    "RATES_HEADER",
]

RATES_HEADER = ("K", "one_minus_rate_restart_bound", "one_minus_rate_restart_exact", "one_minus_rate_cd")

# products of (1 - sigma) switch to log space past this length
_LOG_SPACE_K = 10_000

_theta_cache = {}


def _thetas(theta0, count):
    seq = _theta_cache.get(theta0)
    if seq is None:
        seq = _theta_cache[theta0] = ThetaSequence(theta0)
    return seq.prefix(count)


class RateQuery(namedtuple("RateQuery", "theta0 mu K")):
    """Parameters of one contraction query: ``0 < theta0 < 1``, ``mu > 0``, ``K >= 1``."""

    __slots__ = ()

    def __new__(cls, theta0, mu, K):
        theta0, mu, K = float(theta0), float(mu), int(K)
        if not 0.0 < theta0 < 1.0:
            raise ValueError("theta0 must lie in (0, 1); theta_{-1} is undefined at 1")
        if not mu > 0.0:
            raise ValueError("mu must be positive")
        if K < 1:
            raise ValueError("K must be at least 1")
        return super().__new__(cls, theta0, mu, K)

    @property
    def theta_minus1_sq(self):
        return self.theta0 ** 2 / (1.0 - self.theta0)


def _sigma_interior(theta, theta0, mu):
    """sigma_k for 1 <= k < K (independent of K); ``theta`` holds theta_0..theta_{k}."""
    prev, cur = theta[:-1], theta[1:]
    num = 1.0 - (cur / prev) * (1.0 - theta0) / (1.0 - cur)
    return num / (1.0 + prev / (theta0 * mu))


def _sigma_last(theta_last, theta0, mu):
    """sigma_K^K as a function of theta_{K-1}."""
    return (1.0 - (theta_last / theta0) * (1.0 - theta0)) / (1.0 + theta_last / (theta0 * mu))


def sigma_sequence(q):
    """``sigma^K_1, ..., sigma^K_K`` as an array of length ``K``."""
    q = RateQuery(*q)
    theta = _thetas(q.theta0, q.K)
    sig = np.empty(q.K)
    sig[:-1] = _sigma_interior(theta, q.theta0, q.mu)
    sig[-1] = _sigma_last(theta[-1], q.theta0, q.mu)
    return sig


def rho_exact(q):
    """Exact contraction factor ``rho_K`` by direct evaluation of its sum-product form."""
    q = RateQuery(*q)
    K = q.K
    theta = _thetas(q.theta0, K)
    sig = sigma_sequence(q)
    t2m1 = q.theta_minus1_sq
    # suffix[l] = prod_{j=l+1}^{K} (1 - sigma_j), l = 0..K-1
    if K > _LOG_SPACE_K:
        logs = np.log1p(-sig)
        suffix = np.exp(np.cumsum(logs[::-1])[::-1])
    else:
        suffix = np.cumprod((1.0 - sig)[::-1])[::-1]
    full = suffix[0]
    total = full + t2m1 * float(np.sum(suffix / theta[:K]))
    return theta[K - 1] ** 2 / t2m1 * total


def rho_exact_all(theta0, mu, K_max):
    """``rho_1, ..., rho_{K_max}`` in O(K_max).

    Uses that ``sigma^K_k`` does not depend on ``K`` for ``k < K``, so the
    products and the weighted sum can be carried forward in ``K``.
    """
    q = RateQuery(theta0, mu, K_max)
    theta = _thetas(q.theta0, K_max)
    t2m1 = q.theta_minus1_sq
    sig_in = _sigma_interior(theta, q.theta0, q.mu)  # sigma_1..sigma_{K_max-1}
    sig_last = _sigma_last(theta, q.theta0, q.mu)  # sigma^K_K for K = 1..K_max
    out = np.empty(K_max)
    T = 1.0  # prod_{j=1}^{K-1} (1 - sigma_j)
    S = 1.0 / theta[0]  # sum_{l<K} (1/theta_l) prod_{j=l+1}^{K-1} (1 - sigma_j)
    for K in range(1, K_max + 1):
        out[K - 1] = theta[K - 1] ** 2 / t2m1 * (1.0 - sig_last[K - 1]) * (T + t2m1 * S)
        if K < K_max:
            f = 1.0 - sig_in[K - 1]
            T *= f
            S = f * S + 1.0 / theta[K]
    return out


def rho_recursive(theta0, mu, K_max):
    """``rho_1..rho_{K_max}`` from the one-step recursion in ``K``:

        rho_{K+1} = (1 - th_K) (1 + a (1 - theta0)) / (1 + a) rho_K
                    + (1 + (1 - theta0) mu) th_K / (1 + a),   a = theta0 mu / th_K.
    """
    q = RateQuery(theta0, mu, K_max)
    theta = _thetas(q.theta0, K_max)
    out = np.empty(K_max)
    rho = (1.0 + (1.0 - theta0) * mu) / (1.0 + mu)
    out[0] = rho
    for K in range(1, K_max):
        t = theta[K]
        a = theta0 * mu / t
        rho = (1.0 - t) * (1.0 + a * (1.0 - theta0)) / (1.0 + a) * rho + (1.0 + (1.0 - theta0) * mu) * t / (1.0 + a)
        out[K] = rho
    return out


def rho_bound(q):
    """``(1 + (1 - theta0) mu) / (1 + theta0**2 mu / (2 theta_{K-1}**2))``.

    Unlike :func:`rho_exact` this is defined at ``theta0 = 1``.
    """
    theta0, mu, K = float(q[0]), float(q[1]), int(q[2])
    if not 0.0 < theta0 <= 1.0 or mu < 0 or K < 1:
        raise ValueError("need 0 < theta0 <= 1, mu >= 0, K >= 1")
    t = _thetas(theta0, K)[K - 1]
    return (1.0 + (1.0 - theta0) * mu) / (1.0 + theta0 ** 2 * mu / (2.0 * t * t))


def rho_bound_all(theta0, mu, K_max):
    theta = _thetas(float(theta0), int(K_max))
    return (1.0 + (1.0 - theta0) * mu) / (1.0 + theta0 ** 2 * mu / (2.0 * theta * theta))


def d_bounds(q):
    """Upper and lower bounds on ``d_k`` for ``k = 1..K-1`` (with ``b_0 = 1``).

    A feasible ``d`` sequence exists iff ``upper >= lower`` entrywise. The
    upper bound at ``k = 1`` is ``inf``.
    """
    q = RateQuery(*q)
    K = q.K
    theta = _thetas(q.theta0, K)
    sig = sigma_sequence(q)
    th0 = q.theta0
    # b_k = prod_{l=0}^{k-1} 1 / ((1 - theta_l)(1 - sigma_{l+1})), k = 0..K
    b = np.concatenate(([1.0], np.cumprod(1.0 / ((1.0 - theta) * (1.0 - sig)))))
    k = np.arange(1, K)
    r_prev = theta[k - 1] / th0
    with np.errstate(divide="ignore"):
        upper = b[k] * (1.0 - sig[k - 1]) * r_prev / (1.0 - r_prev)
    upper[r_prev >= 1.0] = np.inf
    r = theta[k] / th0
    lower = b[k + 1] * (1.0 - sig[k]) * (1.0 - theta[k]) * r * (1.0 - th0) / (1.0 - r)
    return upper, lower


def lyapunov(problem, x, x_star, F_star, v, theta0):
    """``Delta(x)`` for a problem with a unique minimiser ``x_star``."""
    v = getattr(v, "v", v)
    d = np.asarray(x) - x_star
    gap = problem.F_value(x) - F_star
    return (1.0 - theta0) / theta0 ** 2 * gap + float(np.dot(v, d * d)) / (2.0 * theta0 ** 2)


def cd_rate_default(theta0, mu):
    """Per-iteration contraction ``1 - theta0 mu / (1 + mu)`` of randomized CD."""
    return 1.0 - theta0 * mu / (1.0 + mu)


Rates = namedtuple("Rates", "approx_bound approx_exact cd")


def per_iter_rates(q, cd_model=cd_rate_default, exact=True):
    """Per-iteration rates ``rho**(1/K)`` of restarted APPROX and of the CD model."""
    q = RateQuery(*q)
    bound = rho_bound(q) ** (1.0 / q.K)
    ex = rho_exact(q) ** (1.0 / q.K) if exact else float("nan")
    return Rates(bound, ex, cd_model(q.theta0, q.mu))


def _one_minus_root(rho, K):
    # 1 - rho**(1/K) without cancellation
    return -np.expm1(np.log(rho) / K)


def figure1_table(mu, n, tau, K_grid, cd_model=cd_rate_default, exact=True):
    """Rows ``(K, 1 - rate_bound, 1 - rate_exact, 1 - rate_cd)`` over ``K_grid``."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not 1 <= tau < n:
        raise ValueError("need 1 <= tau < n (theta0 < 1)")
    theta0 = tau / n
    K_grid = [int(K) for K in K_grid]
    if not K_grid or min(K_grid) < 1:
        raise ValueError("K_grid must hold positive integers")
    K_max = max(K_grid)
    bound = rho_bound_all(theta0, mu, K_max)
    ex = rho_exact_all(theta0, mu, K_max) if exact else None
    cd = 1.0 - cd_model(theta0, mu)
    rows = []
    for K in K_grid:
        rows.append((
            K,
            float(_one_minus_root(bound[K - 1], K)),
            float(_one_minus_root(ex[K - 1], K)) if exact else float("nan"),
            float(cd),
        ))
    return rows


def improvement_window(mu, n, tau, K_max, cd_model=cd_rate_default, use="bound"):
    """Largest contiguous range of ``K <= K_max`` where restarted APPROX beats CD.

    Returns ``(K_lo, K_hi)`` or ``None``. ``use`` selects the bound or the
    exact factor.
    """
    theta0 = tau / n
    if use == "bound":
        rho = rho_bound_all(theta0, mu, K_max)
    elif use == "exact":
        rho = rho_exact_all(theta0, mu, K_max)
    else:
        raise ValueError("use must be 'bound' or 'exact'")
    K = np.arange(1, K_max + 1)
    better = np.log(rho) / K < math.log(cd_model(theta0, mu))
    if not better.any():
        return None
    # longest run of True
    edges = np.diff(np.concatenate(([0], better.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    best = int(np.argmax(ends - starts))
    return int(K[starts[best]]), int(K[ends[best] - 1])


def write_rates_csv(rows, fh=None):
    """Write rate-table rows as CSV to ``fh`` (or return the text)."""
    out = io.StringIO() if fh is None else fh
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RATES_HEADER)
    for K, a, e, c in rows:
        w.writerow([K, repr(a), repr(e), repr(c)])
    return out.getvalue() if fh is None else None
