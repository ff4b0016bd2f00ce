"""Sparse datasets: LibSVM text I/O, column normalisation and synthetic instances.

Matrices are stored column-compressed (``scipy.sparse.csc_matrix``) with
sorted row indices and no explicit zeros. Column centering is never applied
to the stored entries; instead a per-column offset is kept and the effective
matrix is ``A - 1 offset^T``, which every matrix-vector product accounts for
with a rank-one correction.
"""
from dataclasses import dataclass, field, replace
import os

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Dataset",
    "LibsvmFormatError",
    "as_csc",
    "parse_libsvm",
    "write_libsvm",
    "normalize_columns",
    "synth_lasso",
    "synth_logreg",
    "make_rng",
]


class LibsvmFormatError(ValueError):
    """Raised for unparsable LibSVM input; the message carries the line number."""


def make_rng(seed):
    """Counter-based generator (Philox) used for every random draw in the package."""
    return np.random.Generator(np.random.Philox(seed))


def as_csc(A):
    """Canonical CSC copy: float64, sorted indices, explicit zeros removed."""
    if sp.issparse(A):
        A = sp.csc_matrix(A, dtype=float, copy=True)
    else:
        A = sp.csc_matrix(np.atleast_2d(np.asarray(A, dtype=float)))
    A.eliminate_zeros()
    A.sort_indices()
    return A


@dataclass(frozen=True)
class Dataset:
    """Design matrix, responses and normalisation record.

    ``col_scale[i]`` is the factor the stored column was multiplied by and
    ``col_offset[i]`` the value subtracted from every entry of the (scaled)
    column to obtain the effective column.
    """

    matrix: sp.csc_matrix
    labels: np.ndarray
    col_scale: np.ndarray = field(default=None)
    col_offset: np.ndarray = field(default=None)

    def __post_init__(self):
        A = self.matrix
        if not sp.isspmatrix_csc(A):
            object.__setattr__(self, "matrix", as_csc(A))
        m, n = self.matrix.shape
        labels = np.asarray(self.labels, dtype=float)
        if labels.shape != (m,):
            raise ValueError(f"labels must have length {m}, got shape {labels.shape}")
        object.__setattr__(self, "labels", labels)
        if self.col_scale is None:
            object.__setattr__(self, "col_scale", np.ones(n))
        if self.col_offset is None:
            object.__setattr__(self, "col_offset", np.zeros(n))

    @property
    def n_rows(self):
        return self.matrix.shape[0]

    @property
    def n_cols(self):
        return self.matrix.shape[1]

    @property
    def centered(self):
        return bool(np.any(self.col_offset != 0.0))

    def matvec(self, x):
        """Effective ``A x`` including the centering correction."""
        out = self.matrix @ x
        if self.centered:
            out = out - self.col_offset @ x
        return out

    def rmatvec(self, r):
        """Effective ``A^T r``."""
        out = self.matrix.T @ r
        if self.centered:
            out = out - self.col_offset * r.sum()
        return out

    def dense(self):
        """Effective matrix as a dense array (small instances only)."""
        return self.matrix.toarray() - self.col_offset[None, :]

    def binary(self):
        """Copy with labels mapped to {-1, +1}; {0, 1} labels are remapped."""
        y = self.labels
        values = set(np.unique(y).tolist())
        if values <= {-1.0, 1.0}:
            return self
        if values <= {0.0, 1.0}:
            return replace(self, labels=np.where(y > 0, 1.0, -1.0))
        raise ValueError(f"labels are not binary: {sorted(values)[:5]}")


def _parse_line(line, lineno):
    parts = line.split()
    try:
        label = float(parts[0])
    except ValueError:
        raise LibsvmFormatError(f"line {lineno}: bad label {parts[0]!r}") from None
    cols, vals = [], []
    last = 0
    for tok in parts[1:]:
        idx, sep, val = tok.partition(":")
        if not sep:
            raise LibsvmFormatError(f"line {lineno}: expected idx:val, got {tok!r}")
        try:
            j = int(idx)
            x = float(val)
        except ValueError:
            raise LibsvmFormatError(f"line {lineno}: malformed pair {tok!r}") from None
        if j < 1:
            raise LibsvmFormatError(f"line {lineno}: indices are 1-based, got {j}")
        if j == last:
            raise LibsvmFormatError(f"line {lineno}: duplicate index {j}")
        if j < last:
            raise LibsvmFormatError(f"line {lineno}: non-monotone index {j} after {last}")
        if not np.isfinite(x):
            raise LibsvmFormatError(f"line {lineno}: non-finite value {val!r}")
        last = j
        cols.append(j - 1)
        vals.append(x)
    return label, cols, vals


def parse_libsvm(path, n_features=None, binary=False):
    """Read a LibSVM/SVMlight text file.

    Lines look like ``label idx:val idx:val ...`` with strictly increasing
    1-based indices. Blank lines and ``#`` comments are ignored. The feature
    count is the largest index seen unless ``n_features`` is larger.
    """
    labels, rows, cols, vals = [], [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            label, c, v = _parse_line(line, lineno)
            rows.extend([len(labels)] * len(c))
            cols.extend(c)
            vals.extend(v)
            labels.append(label)
    width = (max(cols) + 1) if cols else 0
    if n_features is not None:
        if n_features < width:
            raise LibsvmFormatError(f"file uses {width} features, more than n_features={n_features}")
        width = n_features
    A = sp.csc_matrix((vals, (rows, cols)), shape=(len(labels), width), dtype=float)
    ds = Dataset(as_csc(A), np.array(labels, dtype=float))
    return ds.binary() if binary else ds


def write_libsvm(ds, path):
    """Write the stored matrix (without centering offsets) in LibSVM format.

    Values are printed with ``repr`` so that a parse round trip is exact.
    """
    A = sp.csr_matrix(ds.matrix)
    A.sort_indices()
    with open(path, "w") as fh:
        for i in range(A.shape[0]):
            lo, hi = A.indptr[i], A.indptr[i + 1]
            pairs = " ".join(f"{j + 1}:{float(x)!r}" for j, x in zip(A.indices[lo:hi], A.data[lo:hi]) if x != 0.0)
            label = ds.labels[i]
            head = repr(int(label)) if float(label).is_integer() else repr(float(label))
            fh.write(f"{head} {pairs}".rstrip() + "\n")
    return os.fspath(path)


def normalize_columns(ds, center=False):
    """Scale every effective column to unit Euclidean norm.

    With ``center=True`` columns are first mean-shifted; the shift is stored in
    ``col_offset`` rather than applied, so the matrix stays sparse.
    """
    if ds.centered:
        raise ValueError("dataset already carries centering offsets")
    A = as_csc(ds.matrix)
    m = A.shape[0]
    sq = np.asarray(A.multiply(A).sum(axis=0)).ravel()
    if center:
        mean = np.asarray(A.sum(axis=0)).ravel() / m
        sq = sq - m * mean ** 2
        sq[sq < 0] = 0.0
    else:
        mean = np.zeros(A.shape[1])
    norms = np.sqrt(sq)
    tiny = norms <= 1e-14 * max(1.0, float(np.max(norms, initial=0.0)))
    if np.any(tiny):
        bad = np.flatnonzero(tiny)
        raise ValueError(f"zero column(s) after preprocessing: {bad.tolist()[:20]}")
    scale = 1.0 / norms
    scale[np.isclose(norms, 1.0, rtol=0, atol=1e-15) & (mean == 0)] = 1.0
    A = A @ sp.diags(scale)
    A = as_csc(A)
    return Dataset(A, ds.labels.copy(), col_scale=ds.col_scale * scale, col_offset=mean * scale)


def _random_sparse(rng, m, n, density, corr=0.0):
    mask = rng.random((m, n)) < density
    # every column gets at least one entry, otherwise v_i = 0
    empty = np.flatnonzero(~mask.any(axis=0))
    mask[rng.integers(0, m, size=empty.size), empty] = True
    values = rng.standard_normal((m, n))
    if corr:
        # shared row factor: pairwise column correlation ``corr`` on common rows
        values = np.sqrt(1.0 - corr) * values + np.sqrt(corr) * rng.standard_normal((m, 1))
    return as_csc(np.where(mask, values, 0.0))


def _planted(rng, n, support=None):
    k = support if support is not None else max(1, n // 10)
    x = np.zeros(n)
    idx = rng.choice(n, size=min(k, n), replace=False)
    x[idx] = rng.standard_normal(idx.size)
    return x


def synth_lasso(n, m, density=1.0, noise=0.0, seed=0, support=None, corr=0.0):
    """Synthetic Lasso data ``b = A x* + noise * N(0, I)``.

    Returns ``(dataset, x_planted)``; the planted vector has ``support``
    nonzeros (default ``max(1, n // 10)``). ``corr`` in ``[0, 1)`` adds a
    shared row factor that makes the columns correlated (ill-conditioned
    designs). Bit-identical for a fixed seed.
    """
    if not 0.0 < density <= 1.0:
        raise ValueError("density must lie in (0, 1]")
    if not 0.0 <= corr < 1.0:
        raise ValueError("corr must lie in [0, 1)")
    rng = make_rng(seed)
    A = _random_sparse(rng, m, n, density, corr)
    x = _planted(rng, n, support)
    b = A @ x + noise * rng.standard_normal(m)
    return Dataset(A, b), x


def synth_logreg(n, m, density=1.0, flip=0.1, seed=0):
    """Synthetic binary classification data with labels in {-1, +1}.

    Labels are ``sign(A x*)`` with a fraction ``flip`` of them inverted, which
    keeps the classes from being separable.
    """
    if not 0.0 < density <= 1.0:
        raise ValueError("density must lie in (0, 1]")
    rng = make_rng(seed)
    A = _random_sparse(rng, m, n, density)
    x = _planted(rng, n, max(1, n // 3))
    y = np.where(A @ x >= 0, 1.0, -1.0)
    y[rng.random(m) < flip] *= -1.0
    return Dataset(A, y), x
