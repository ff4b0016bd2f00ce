"""Momentum coefficients of APPROX.

The sequence starts at ``theta_0 = tau / n`` and follows

    theta_{k+1} = (sqrt(theta_k**4 + 4 theta_k**2) - theta_k**2) / 2,

i.e. ``theta_{k+1}`` is the positive root of ``X**2 + theta_k**2 X - theta_k**2``.
"""
import math
import threading

import numpy as np

__all__ = ["ThetaSequence", "theta_init", "theta_at", "theta_bounds", "next_theta"]


def next_theta(theta):
    """One step of the recurrence, in cancellation-free form.

    ``2 theta / (theta + sqrt(theta**2 + 4))`` equals the textbook expression
    but does not subtract nearly equal numbers when theta is small.
    """
    return 2.0 * theta / (theta + math.sqrt(theta * theta + 4.0))


class ThetaSequence:
    """Lazily extended, cached sequence ``theta_0, theta_1, ...``.

    Parameters
    ----------
    theta0 : float
        Initial value in ``(0, 1]``.
    """

    def __init__(self, theta0):
        theta0 = float(theta0)
        if not 0.0 < theta0 <= 1.0:
            raise ValueError(f"theta0 must lie in (0, 1], got {theta0!r}")
        self.theta0 = theta0
        self._cache = [theta0]
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._cache)

    def __repr__(self):
        return f"ThetaSequence(theta0={self.theta0!r}, cached={len(self._cache)})"

    def _extend(self, k):
        with self._lock:
            cache = self._cache
            t = cache[-1]
            for _ in range(len(cache), k + 1):
                t = next_theta(t)
                cache.append(t)

    def __getitem__(self, k):
        k = int(k)
        if k < 0:
            raise IndexError("theta index must be nonnegative")
        if k >= len(self._cache):
            self._extend(k)
        return self._cache[k]

    def prefix(self, count):
        """Return ``theta_0 .. theta_{count-1}`` as a float array."""
        if count > len(self._cache):
            self._extend(count - 1)
        return np.array(self._cache[:count], dtype=float)

    @property
    def theta_minus1_sq(self):
        """``theta_{-1}**2 = theta_0**2 / (1 - theta_0)``, the value preceding theta_0."""
        if self.theta0 >= 1.0:
            raise ValueError("theta_{-1} is undefined for theta0 = 1 (full sampling)")
        return self.theta0 ** 2 / (1.0 - self.theta0)


def theta_init(tau, n):
    """Build the sequence used by APPROX with ``tau`` of ``n`` coordinates per step."""
    if int(tau) != tau or int(n) != n:
        raise TypeError("tau and n must be integers")
    tau, n = int(tau), int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if not 1 <= tau <= n:
        raise ValueError(f"need 1 <= tau <= n, got tau={tau}, n={n}")
    return ThetaSequence(tau / n)


def theta_at(seq, k):
    return seq[k]


def theta_bounds(theta0, k):
    """Analytic sandwich ``lower <= theta_k <= upper``."""
    theta0 = float(theta0)
    if not 0.0 < theta0 <= 1.0:
        raise ValueError("theta0 must lie in (0, 1]")
    lower = (2.0 - theta0) / (k + (2.0 - theta0) / theta0)
    upper = 2.0 / (k + 2.0 / theta0)
    return lower, upper
