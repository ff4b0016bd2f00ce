"""Composite objectives ``F = f + psi`` for coordinate methods.

Every model here has the form

    f(x) = c * sum_j loss((A x)_j, b_j),      psi(x) = lam * ||x||_1,

with ``A`` column-compressed (optionally with a centering offset, see
:mod:`approx_restart.data_io`). This shared layout is what the compiled
coordinate kernels consume; the Python methods below are the reference
evaluations used for traces, stopping tests and checks.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.special import expit, xlogy

from .data_io import Dataset, as_csc, make_rng

__all__ = [
    "SQUARED",
    "LOGISTIC",
    "EsoVector",
    "ErrorBoundEstimate",
    "CompositeProblem",
    "LassoProblem",
    "LogRegProblem",
    "QuadraticProblem",
    "soft_threshold",
    "dist_v",
    "mu_v_bounds",
    "exact_mu_v",
]

SQUARED = 0
LOGISTIC = 1


def soft_threshold(u, thresh):
    return np.sign(u) * np.maximum(np.abs(u) - thresh, 0.0)


def _sum(values):
    # compensated summation on long vectors keeps traces comparable across runs
    if values.size > 100_000:
        return math.fsum(values)
    return float(np.sum(values))


@dataclass(frozen=True)
class EsoVector:
    """Curvature weights ``v`` valid for tau-nice sampling of size ``tau``."""

    v: np.ndarray
    tau: int

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 1 or not np.all(v > 0) or not np.all(np.isfinite(v)):
            raise ValueError("ESO weights must be a finite positive vector")
        object.__setattr__(self, "v", v)

    def __len__(self):
        return self.v.size

    def norm_sq(self, h):
        """``||h||_v**2 = sum_i v_i h_i**2``."""
        return float(np.dot(self.v, h * h))


@dataclass(frozen=True)
class ErrorBoundEstimate:
    """Quadratic-growth constant in the ``||.||_v`` geometry.

    ``provenance`` is one of ``"exact"``, ``"user"`` or ``"unknown"``; with
    ``"unknown"`` the value is ``None``.
    """

    mu_v: float | None
    provenance: str = "user"

    def __post_init__(self):
        if self.provenance not in ("exact", "user", "unknown"):
            raise ValueError(f"bad provenance {self.provenance!r}")
        if self.provenance == "unknown":
            if self.mu_v is not None:
                raise ValueError("unknown estimate carries no value")
        elif not (self.mu_v is not None and self.mu_v > 0):
            raise ValueError("mu_v must be positive")


def dist_v(x, y, v):
    """Weighted distance ``||x - y||_v``."""
    d = np.asarray(x) - np.asarray(y)
    v = v.v if isinstance(v, EsoVector) else np.asarray(v)
    return math.sqrt(float(np.dot(v, d * d)))


def mu_v_bounds(mu, v):
    """Range ``[min_i mu / v_i, max_i mu / v_i]`` for the ``v``-norm constant
    given the Euclidean one."""
    v = v.v if isinstance(v, EsoVector) else np.asarray(v, dtype=float)
    return float(mu / v.max()), float(mu / v.min())


class CompositeProblem:
    """Base class: holds the design, responses and penalty weight.

    Subclasses set ``loss`` and ``scale`` and may override the evaluations.
    Instances are treated as immutable.
    """

    loss = SQUARED

    def __init__(self, A, b, lam, scale=1.0, offset=None):
        self.A = as_csc(A)
        self.m, self.n = self.A.shape
        self.b = np.ascontiguousarray(b, dtype=float)
        if self.b.shape != (self.m,):
            raise ValueError(f"b must have length {self.m}")
        if lam < 0:
            raise ValueError("regularisation weight must be nonnegative")
        self.lam = float(lam)
        self.scale = float(scale)
        self.offset = np.zeros(self.n) if offset is None else np.ascontiguousarray(offset, dtype=float)
        if self.offset.shape != (self.n,):
            raise ValueError("offset must have one entry per column")
        self.has_offset = bool(np.any(self.offset != 0.0))
        if self.has_offset and self.loss != SQUARED:
            raise ValueError("centering offsets are only supported for the squared loss")
        self.colsum = np.asarray(self.A.sum(axis=0)).ravel()
        self.sum_b = float(self.b.sum())

    # -- linear algebra with the implicit centering correction ---------------
    def matvec(self, x):
        out = self.A @ x
        if self.has_offset:
            out = out - float(self.offset @ x)
        return out

    def rmatvec(self, r):
        out = self.A.T @ r
        if self.has_offset:
            out = out - self.offset * float(r.sum())
        return out

    def column(self, i):
        """Effective column ``i`` as a dense vector."""
        col = self.A[:, [i]].toarray().ravel()
        return col - self.offset[i]

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"x must have shape ({self.n},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("x has non-finite components")
        return x

    def _check_index(self, i):
        if not 0 <= int(i) < self.n:
            raise IndexError(f"coordinate {i} out of range for n={self.n}")
        return int(i)

    # -- loss on the vector a = A x -----------------------------------------
    def loss_value(self, Ax):
        raise NotImplementedError

    def loss_deriv(self, Ax):
        """``d f / d(Ax)``, so that ``grad f(x) = A^T loss_deriv(Ax)``."""
        raise NotImplementedError

    # -- objective -----------------------------------------------------------
    def f_value(self, x, Ax=None):
        x = self._check(x)
        return self.loss_value(self.matvec(x) if Ax is None else Ax)

    def psi_value(self, x):
        x = self._check(x)
        return self.lam * _sum(np.abs(x))

    def F_value(self, x, Ax=None):
        return self.f_value(x, Ax) + self.psi_value(x)

    def grad(self, x, Ax=None):
        x = self._check(x)
        return self.rmatvec(self.loss_deriv(self.matvec(x) if Ax is None else Ax))

    def loss_difference(self, Ax, Ad):
        """``loss(Ax + Ad) - loss(Ax)`` with error proportional to ``Ad``."""
        raise NotImplementedError

    def F_difference(self, x1, x2):
        """``F(x1) - F(x2)`` without subtracting the two objective values.

        Near the optimum both values agree to all printed digits; this form
        keeps the sign meaningful down to differences of order
        ``eps * ||x1 - x2||``.
        """
        x1, x2 = self._check(x1), self._check(x2)
        d = self.matvec(x1 - x2)
        dpsi = np.abs(x1) - np.abs(x2)
        return self.loss_difference(self.matvec(x2), d) + self.lam * math.fsum(dpsi)

    def partial_grad(self, i, x, Ax=None):
        """``df/dx^i``; pass ``Ax`` to reuse a cached product."""
        i = self._check_index(i)
        if Ax is None:
            Ax = self.matvec(self._check(x))
        d = self.loss_deriv(Ax)
        lo, hi = self.A.indptr[i], self.A.indptr[i + 1]
        g = float(self.A.data[lo:hi] @ d[self.A.indices[lo:hi]])
        if self.has_offset:
            g -= self.offset[i] * float(d.sum())
        return g

    def prox_coord(self, i, point, weight):
        """``argmin_z  psi^i(z) + weight/2 (z - point)**2``.

        The coordinate step ``argmin g z + w/2 (z - z0)**2 + psi^i(z)`` is this
        map evaluated at ``point = z0 - g / w``.
        """
        self._check_index(i)
        if not weight > 0:
            raise ValueError("prox weight must be positive")
        if self.lam == 0.0:
            return float(point)
        return float(soft_threshold(point, self.lam / weight))

    # -- curvature -------------------------------------------------------------
    def coordinate_lipschitz(self):
        """Coordinate-wise Lipschitz constants of ``grad f``."""
        raise NotImplementedError

    def max_row_nnz(self):
        """``omega``: the largest number of nonzeros in a row of the effective matrix."""
        if self.has_offset:
            return self.n
        counts = np.bincount(self.A.indices, minlength=self.m)
        return int(counts.max()) if counts.size else 0

    def eso_vector(self, tau=1, zero_columns="raise"):
        """ESO weights for tau-nice sampling.

        ``tau = 1`` gives the coordinate Lipschitz constants; larger ``tau``
        inflates them by ``1 + (tau - 1)(omega - 1) / max(n - 1, 1)``.
        Zero columns are rejected unless ``zero_columns="warn"``, in which case
        they get weight 1 (their partial derivative is identically zero).
        """
        tau = int(tau)
        if not 1 <= tau <= self.n:
            raise ValueError(f"need 1 <= tau <= n, got tau={tau}, n={self.n}")
        L = np.array(self.coordinate_lipschitz(), dtype=float)
        zero = L <= 0.0
        if np.any(zero):
            bad = np.flatnonzero(zero).tolist()
            if zero_columns == "raise":
                raise ValueError(f"zero column(s) give v_i = 0: {bad[:20]}")
            warnings.warn(f"zero columns {bad[:20]} decoupled with weight 1", stacklevel=2)
            L[zero] = 1.0
        if tau > 1:
            omega = self.max_row_nnz()
            L = L * (1.0 + (tau - 1) * (omega - 1) / max(self.n - 1, 1))
        return EsoVector(L, tau)

    def duality_gap(self, x):
        raise NotImplementedError

    def lambda_max(self):
        """Smallest ``lam`` for which ``x = 0`` is optimal."""
        raise NotImplementedError


class LassoProblem(CompositeProblem):
    """``1/2 ||A x - b||**2 + lam ||x||_1``."""

    loss = SQUARED

    def __init__(self, A, b, lam, offset=None):
        super().__init__(A, b, lam, scale=1.0, offset=offset)

    @classmethod
    def from_dataset(cls, ds: Dataset, lam):
        return cls(ds.matrix, ds.labels, lam, offset=ds.col_offset)

    def with_lambda(self, lam):
        return LassoProblem(self.A, self.b, lam, offset=self.offset)

    def loss_value(self, Ax):
        r = Ax - self.b
        return 0.5 * _sum(r * r)

    def loss_deriv(self, Ax):
        return Ax - self.b

    def loss_difference(self, Ax, Ad):
        return math.fsum(Ad * ((Ax - self.b) + 0.5 * Ad))

    def coordinate_lipschitz(self):
        sq = np.asarray(self.A.multiply(self.A).sum(axis=0)).ravel()
        if self.has_offset:
            sq = sq - 2.0 * self.offset * self.colsum + self.m * self.offset ** 2
        return np.maximum(sq, 0.0)

    def lambda_max(self):
        return float(np.max(np.abs(self.rmatvec(self.b)), initial=0.0))

    def duality_gap(self, x):
        """Gap with the rescaled residual as dual point (always >= F(x) - F*)."""
        x = self._check(x)
        r = self.matvec(x) - self.b
        corr = float(np.max(np.abs(self.rmatvec(r)), initial=0.0))
        s = 1.0 if corr <= self.lam else self.lam / corr
        u = s * r
        primal = 0.5 * _sum(r * r) + self.lam * _sum(np.abs(x))
        dual = -0.5 * _sum(u * u) - float(self.b @ u)
        return max(primal - dual, 0.0)


class LogRegProblem(CompositeProblem):
    """``lam1 / ||A^T b||_inf * sum_j log(1 + exp(b_j a_j^T x)) + lam ||x||_1``.

    The sign inside the exponential is ``+b_j``; labels must be +-1.
    """

    loss = LOGISTIC

    def __init__(self, A, b, lam1, lam=1.0):
        A = as_csc(A)
        b = np.asarray(b, dtype=float)
        if not np.all(np.abs(b) == 1.0):
            raise ValueError("logistic labels must be -1 or +1")
        denom = float(np.max(np.abs(A.T @ b), initial=0.0))
        if denom == 0.0:
            raise ValueError("||A^T b||_inf is zero; the loss scaling is undefined")
        if lam1 <= 0:
            raise ValueError("lam1 must be positive")
        self.lam1 = float(lam1)
        super().__init__(A, b, lam, scale=self.lam1 / denom)

    @classmethod
    def from_dataset(cls, ds: Dataset, lam1, lam=1.0):
        if ds.centered:
            raise ValueError("centered datasets are not supported for logistic regression")
        ds = ds.binary()
        return cls(ds.matrix, ds.labels, lam1, lam)

    def with_lambda(self, lam):
        return LogRegProblem(self.A, self.b, self.lam1, lam)

    def loss_value(self, Ax):
        return self.scale * _sum(np.logaddexp(0.0, self.b * Ax))

    def loss_deriv(self, Ax):
        return self.scale * self.b * expit(self.b * Ax)

    def loss_difference(self, Ax, Ad):
        # log(1 + e^(t + s)) - log(1 + e^t) = log1p(sigmoid(t) expm1(s))
        t, s = self.b * Ax, self.b * Ad
        return self.scale * math.fsum(np.log1p(expit(t) * np.expm1(s)))

    def coordinate_lipschitz(self):
        sq = np.asarray(self.A.multiply(self.A).T @ (self.b * self.b)).ravel()
        return 0.25 * self.scale * sq

    def lambda_max(self):
        # in units of the l1 weight: x = 0 optimal iff lam >= ||grad f(0)||_inf
        return float(np.max(np.abs(self.rmatvec(0.5 * self.scale * self.b)), initial=0.0))

    def duality_gap(self, x):
        """Fenchel gap with dual point built from the per-sample sigmoids."""
        x = self._check(x)
        a = self.matvec(x)
        sig = expit(self.b * a)
        y = self.scale * self.b * sig
        corr = float(np.max(np.abs(self.rmatvec(y)), initial=0.0))
        s = 1.0 if corr <= self.lam else self.lam / corr
        w = s * sig
        neg_entropy = xlogy(w, w) + xlogy(1.0 - w, 1.0 - w)
        dual = -self.scale * _sum(neg_entropy)
        primal = self.loss_value(a) + self.lam * _sum(np.abs(x))
        return max(primal - dual, 0.0)


class QuadraticProblem(LassoProblem):
    """``1/2 (x - x*)^T Q (x - x*) + lam ||x||_1`` with ``Q`` positive definite.

    Stored as a least-squares problem with ``A = L^T`` (``Q = L L^T``) and
    ``b = A x*`` so it runs through the same kernels.
    """

    loss = SQUARED

    def __init__(self, Q, x_star, lam=0.0):
        Q = np.array(Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("Q must be square")
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-12 * np.abs(Q).max()):
            raise ValueError("Q must be symmetric")
        Q = 0.5 * (Q + Q.T)
        try:
            L = np.linalg.cholesky(Q)
        except np.linalg.LinAlgError:
            raise ValueError("Q is not positive definite") from None
        self.Q = Q
        self.x_star = np.array(x_star, dtype=float)
        A = L.T
        CompositeProblem.__init__(self, A, A @ self.x_star, lam)

    @classmethod
    def random(cls, n, mu, seed=0, spread=1.0, lam=0.0):
        """Random instance whose scaled Hessian ``D^-1/2 Q D^-1/2`` (``D = diag Q``)
        has unit diagonal and smallest eigenvalue exactly ``mu`` up to rounding.

        Diagonal entries are ``exp(U(-spread, spread))**2``.
        """
        if not 0 < mu < 1:
            raise ValueError("mu must lie in (0, 1)")
        rng = make_rng(seed)
        W = rng.standard_normal((n, n - 1))
        G = W @ W.T
        d = np.sqrt(np.diag(G))
        B = G / np.outer(d, d)
        M = (1.0 - mu) * B + mu * np.eye(n)
        s = np.exp(rng.uniform(-spread, spread, size=n))
        Q = M * np.outer(s, s)
        x_star = rng.standard_normal(n)
        return cls(Q, x_star, lam)

    @property
    def F_star(self):
        if self.lam != 0.0:
            raise ValueError("F* has no closed form when lam > 0")
        return 0.0

    def f_value(self, x, Ax=None):
        x = self._check(x)
        d = x - self.x_star
        return 0.5 * float(d @ self.Q @ d)

    def with_lambda(self, lam):
        return QuadraticProblem(self.Q, self.x_star, lam)

    def grad(self, x, Ax=None):
        x = self._check(x)
        return self.Q @ (x - self.x_star)

    def partial_grad(self, i, x, Ax=None):
        i = self._check_index(i)
        x = self._check(x)
        return float(self.Q[i] @ (x - self.x_star))

    def coordinate_lipschitz(self):
        return np.diag(self.Q).copy()

    def lambda_max(self):
        return float(np.max(np.abs(self.Q @ self.x_star)))


def exact_mu_v(p: QuadraticProblem, v):
    """Largest ``mu`` with ``F(x) - F* >= mu/2 ||x - x*||_v**2`` for all ``x``."""
    if not isinstance(p, QuadraticProblem):
        raise TypeError("exact constants are only available for QuadraticProblem")
    if p.lam != 0.0:
        raise ValueError("exact_mu_v requires psi = 0")
    vv = v.v if isinstance(v, EsoVector) else np.asarray(v, dtype=float)
    s = 1.0 / np.sqrt(vv)
    M = p.Q * np.outer(s, s)
    mu = float(scipy.linalg.eigvalsh(M, subset_by_index=[0, 0])[0])
    if not mu > 0:
        raise ValueError("Q is not positive definite")
    return ErrorBoundEstimate(mu, "exact")
