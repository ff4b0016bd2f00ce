"""Compiled inner loops for the coordinate methods.

All kernels operate on the shared model layout of
:class:`approx_restart.problems.CompositeProblem`: CSC arrays of ``A``, a
column offset (centering) vector, responses ``b``, a loss code, a loss scale
``c`` and the l1 weight ``lam``. They never allocate; state lives in arrays
owned by the Python driver.

Status codes returned by the step kernels: ``0`` ok, ``1`` non-finite value.
``info[0]``/``info[1]`` then hold the offending iteration and coordinate.
"""
import math

import numpy as np
from numba import njit

SQUARED = 0
LOGISTIC = 1


@njit(cache=True)
def sample_block(perm, uniforms, out):
    """tau-nice subsets by partial Fisher-Yates on a persistent permutation.

    ``uniforms`` has shape (count, tau); row ``t`` of ``out`` receives a
    uniformly random tau-subset of ``range(n)``.
    """
    n = perm.shape[0]
    count, tau = uniforms.shape
    for t in range(count):
        for j in range(tau):
            r = j + int(uniforms[t, j] * (n - j))
            if r >= n:
                r = n - 1
            tmp = perm[j]
            perm[j] = perm[r]
            perm[r] = tmp
            out[t, j] = perm[j]


@njit(cache=True, inline="always")
def _dloss(loss, a, bj):
    if loss == SQUARED:
        return a - bj
    # logistic with +b inside the exponential: b * sigmoid(b a)
    t = bj * a
    if t >= 0:
        return bj / (1.0 + math.exp(-t))
    e = math.exp(t)
    return bj * e / (1.0 + e)


@njit(cache=True, inline="always")
def _prox(point, thresh):
    if thresh == 0.0:
        return point
    if point > thresh:
        return point - thresh
    if point < -thresh:
        return point + thresh
    return 0.0


@njit(cache=True)
def approx_steps(data, indices, indptr, offset, colsum, has_offset, b, sum_b,
                 loss, c, lam, v, n_over_tau, thetas, coords,
                 u, z, ru, rz, scal, grads, counters, info):
    """Run ``len(thetas)`` APPROX iterations in the (u, z) representation.

    ``y_k = theta_k**2 u + z`` and ``x_{k+1} = theta_k**2 u_{k+1} + z_{k+1}``.
    ``ru = A u`` and ``rz = A z`` (uncentered); ``scal`` holds
    ``[sum(ru), sum(rz), offset.u, offset.z]``.
    """
    m = ru.shape[0]
    n_it, tau = coords.shape
    for t in range(n_it):
        th = thetas[t]
        th2 = th * th
        Su, Sz, pu, pz = scal[0], scal[1], scal[2], scal[3]
        sum_d = 0.0
        if has_offset:
            sum_d = th2 * (Su - m * pu) + (Sz - m * pz) - sum_b
        for s in range(tau):
            i = coords[t, s]
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                a = th2 * (ru[j] - pu) + (rz[j] - pz)
                acc += data[p] * _dloss(loss, a, b[j])
            counters[0] += indptr[i + 1] - indptr[i]
            if has_offset:
                acc -= offset[i] * sum_d
            grads[s] = c * acc
        coef = -(1.0 - n_over_tau * th) / th2
        for s in range(tau):
            i = coords[t, s]
            w = th * n_over_tau * v[i]
            znew = _prox(z[i] - grads[s] / w, lam / w)
            if not math.isfinite(znew):
                info[0] = t
                info[1] = i
                return 1
            dz = znew - z[i]
            if dz == 0.0:
                continue
            du = coef * dz
            z[i] = znew
            u[i] += du
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                rz[j] += dz * data[p]
                ru[j] += du * data[p]
            counters[0] += 2 * (indptr[i + 1] - indptr[i])
            scal[0] += du * colsum[i]
            scal[1] += dz * colsum[i]
            scal[2] += du * offset[i]
            scal[3] += dz * offset[i]
        counters[1] += tau
    return 0


@njit(cache=True)
def cd_steps(data, indices, indptr, offset, colsum, has_offset, b, sum_b,
             loss, c, lam, v, coords, x, rx, scal, grads, counters, info):
    """Proximal coordinate descent; ``rx = A x`` (uncentered), ``scal = [sum(rx), offset.x]``.

    With ``tau > 1`` all partial derivatives of a block are taken at the same
    point before any coordinate moves.
    """
    m = rx.shape[0]
    n_it, tau = coords.shape
    for t in range(n_it):
        Sx, px = scal[0], scal[1]
        sum_d = 0.0
        if has_offset:
            sum_d = (Sx - m * px) - sum_b
        for s in range(tau):
            i = coords[t, s]
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                acc += data[p] * _dloss(loss, rx[j] - px, b[j])
            counters[0] += indptr[i + 1] - indptr[i]
            if has_offset:
                acc -= offset[i] * sum_d
            grads[s] = c * acc
        for s in range(tau):
            i = coords[t, s]
            w = v[i]
            xnew = _prox(x[i] - grads[s] / w, lam / w)
            if not math.isfinite(xnew):
                info[0] = t
                info[1] = i
                return 1
            dx = xnew - x[i]
            if dx == 0.0:
                continue
            x[i] = xnew
            for p in range(indptr[i], indptr[i + 1]):
                rx[indices[p]] += dx * data[p]
            counters[0] += indptr[i + 1] - indptr[i]
            scal[0] += dx * colsum[i]
            scal[1] += dx * offset[i]
        counters[1] += tau
    return 0


def empty_counters():
    """``[nonzeros touched, coordinate updates]``."""
    return np.zeros(2, dtype=np.int64)
