import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from approx_restart.data_io import (
    Dataset,
    LibsvmFormatError,
    normalize_columns,
    parse_libsvm,
    synth_lasso,
    synth_logreg,
    write_libsvm,
)


def _write(tmp_path, text):
    path = tmp_path / "d.svm"
    path.write_text(text)
    return path


def test_parse_basic(tmp_path):
    path = _write(tmp_path, "# header\n1 1:0.5 3:-2\n\n-1 2:1e-3  # trailing\n0\n")
    ds = parse_libsvm(path)
    assert ds.matrix.shape == (3, 3)
    assert np.array_equal(ds.labels, [1, -1, 0])
    assert np.allclose(ds.matrix.toarray(), [[0.5, 0, -2], [0, 1e-3, 0], [0, 0, 0]])


def test_parse_n_features(tmp_path):
    path = _write(tmp_path, "1 2:1\n")
    assert parse_libsvm(path, n_features=5).matrix.shape == (1, 5)
    with pytest.raises(LibsvmFormatError):
        parse_libsvm(path, n_features=1)


@pytest.mark.parametrize("text, needle", [
    ("1 1:1\n1 2:1 2:3\n", "line 2: duplicate"),
    ("1 3:1 2:1\n", "line 1: non-monotone"),
    ("1 0:1\n", "1-based"),
    ("1 1:abc\n", "malformed"),
    ("x 1:1\n", "bad label"),
    ("1 1\n", "idx:val"),
    ("1 1:nan\n", "non-finite"),
])
def test_parse_errors_carry_line_numbers(tmp_path, text, needle):
    with pytest.raises(LibsvmFormatError, match=needle):
        parse_libsvm(_write(tmp_path, text))


def test_binary_labels(tmp_path):
    ds = parse_libsvm(_write(tmp_path, "1 1:1\n0 1:2\n"), binary=True)
    assert np.array_equal(ds.labels, [1, -1])
    with pytest.raises(ValueError):
        Dataset(sp.eye(2, format="csc"), [0.5, 2.0]).binary()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2 ** 31), st.floats(0.05, 1.0))
def test_roundtrip_is_exact(tmp_path_factory, m, n, seed, density):
    rng = np.random.default_rng(seed)
    A = sp.random(m, n, density=density, random_state=rng, format="csc") * 1e3 - 0.0
    y = rng.integers(-3, 4, size=m).astype(float)
    path = tmp_path_factory.mktemp("rt") / "x.svm"
    write_libsvm(Dataset(A, y), path)
    back = parse_libsvm(path, n_features=n)
    assert np.array_equal(back.matrix.toarray(), Dataset(A, y).matrix.toarray())
    assert np.array_equal(back.labels, y)


def test_normalize_scale_and_center():
    ds, _ = synth_lasso(8, 20, density=0.5, seed=3)
    unit = normalize_columns(ds)
    assert np.allclose(np.linalg.norm(unit.dense(), axis=0), 1.0)
    assert not unit.centered
    cen = normalize_columns(ds, center=True)
    D = cen.dense()
    assert np.allclose(D.mean(axis=0), 0.0, atol=1e-14)
    assert np.allclose(np.linalg.norm(D, axis=0), 1.0)
    # sparsity pattern of the stored matrix is unchanged
    assert cen.matrix.nnz == ds.matrix.nnz
    x = np.arange(8.0)
    r = np.linspace(-1, 1, 20)
    assert np.allclose(cen.matvec(x), D @ x)
    assert np.allclose(cen.rmatvec(r), D.T @ r)
    with pytest.raises(ValueError):
        normalize_columns(cen)


def test_normalize_rejects_zero_columns():
    A = sp.csc_matrix(np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(ValueError, match="zero column"):
        normalize_columns(Dataset(A, [1.0, 2.0]))
    const = sp.csc_matrix(np.array([[1.0, 1.0], [2.0, 1.0]]))
    with pytest.raises(ValueError, match="zero column"):
        normalize_columns(Dataset(const, [1.0, 2.0]), center=True)


def test_synth_deterministic_and_well_formed():
    a, xa = synth_lasso(30, 40, density=0.1, noise=0.2, seed=5)
    b, xb = synth_lasso(30, 40, density=0.1, noise=0.2, seed=5)
    assert (a.matrix != b.matrix).nnz == 0 and np.array_equal(a.labels, b.labels)
    assert np.array_equal(xa, xb)
    assert np.all(np.diff(a.matrix.indptr) > 0)  # no empty column
    assert np.count_nonzero(xa) == 3
    c, _ = synth_lasso(30, 40, density=0.1, noise=0.2, seed=6)
    assert not np.array_equal(a.labels, c.labels)
    clean, x = synth_lasso(10, 15, seed=1)
    assert np.allclose(clean.matvec(x), clean.labels)


def test_synth_corr():
    ds, _ = synth_lasso(20, 4000, corr=0.8, seed=2)
    C = np.corrcoef(ds.dense(), rowvar=False)
    off = C[~np.eye(20, dtype=bool)]
    assert abs(off.mean() - 0.8) < 0.05
    with pytest.raises(ValueError):
        synth_lasso(3, 3, corr=1.0)


def test_synth_logreg_labels():
    ds, _ = synth_logreg(5, 50, flip=0.2, seed=1)
    assert set(np.unique(ds.labels)) == {-1.0, 1.0}
