import itertools

import numpy as np
import pytest
from scipy import stats

from oracles import naive_approx, naive_cd
from tiny_problems import tiny_lasso, tiny_logreg

from approx_restart import ConvergenceTrace, LassoProblem, QuadraticProblem, normalize_columns, synth_lasso
from approx_restart.engine import (
    GENERATOR,
    NonFiniteError,
    SamplingConfig,
    TauNiceSampler,
    approx_run,
    cd_run,
    cd_solve,
    sample_subset,
)
from approx_restart.theta import ThetaSequence


def _sparse_lasso(n=30, m=50, density=0.2, lam=0.1, seed=0, center=False):
    ds, _ = synth_lasso(n, m, density=density, noise=0.1, seed=seed)
    if center:
        ds = normalize_columns(ds, center=True)
    return LassoProblem.from_dataset(ds, lam)


def test_sampling_config_validation():
    with pytest.raises(ValueError):
        SamplingConfig(5, 6)
    with pytest.raises(ValueError):
        SamplingConfig(5, 0)
    with pytest.raises(ValueError):
        SamplingConfig(5, 1, scheme="independent")
    assert TauNiceSampler.generator == GENERATOR == "numpy.random.Philox"


def test_full_sampling_is_whole_set():
    s = SamplingConfig(7, 7).sampler()
    assert np.array_equal(s.draw(3), np.tile(np.arange(7), (3, 1)))
    assert np.array_equal(sample_subset(SamplingConfig(7, 7), np.random.default_rng()), np.arange(7))


def test_single_coordinate_frequencies():
    n, draws = 13, 1_000_000
    counts = np.bincount(TauNiceSampler(n, 1, 0).draw(draws)[:, 0], minlength=n)
    p = 1.0 / n
    sd = np.sqrt(draws * p * (1 - p))
    assert np.all(np.abs(counts - draws * p) < 5 * sd)
    assert stats.chisquare(counts).pvalue > 1e-4


def test_pair_census():
    draws = 600_000
    rows = np.sort(TauNiceSampler(4, 2, 1).draw(draws), axis=1)
    assert np.all(rows[:, 0] < rows[:, 1])
    keys = rows[:, 0] * 4 + rows[:, 1]
    pairs = [a * 4 + b for a, b in itertools.combinations(range(4), 2)]
    counts = np.array([np.sum(keys == k) for k in pairs])
    assert counts.sum() == draws
    assert stats.chisquare(counts).pvalue > 1e-4


def test_subsets_are_distinct_with_uniform_marginals():
    n, tau, draws = 9, 4, 200_000
    rows = TauNiceSampler(n, tau, 2).draw(draws)
    assert all(len(set(r)) == tau for r in rows[:1000])
    counts = np.bincount(rows.ravel(), minlength=n)
    p = tau / n
    assert np.all(np.abs(counts - draws * p) < 5 * np.sqrt(draws * p * (1 - p)))


def test_sample_subset_sorted_and_sized():
    rng = np.random.default_rng(0)
    s = sample_subset(SamplingConfig(10, 3), rng)
    assert len(s) == 3 and np.all(np.diff(s) > 0)


def test_draws_do_not_depend_on_chunking():
    a = TauNiceSampler(20, 3, 7).draw(1000)
    s = TauNiceSampler(20, 3, 7)
    b = np.vstack([s.draw(1), s.draw(333), s.draw(666)])
    assert np.array_equal(a, b)
    assert not np.array_equal(a, TauNiceSampler(20, 3, 8).draw(1000))


@pytest.mark.parametrize("center", [False, True])
@pytest.mark.parametrize("tau", [1, 3])
def test_matches_naive_reference(center, tau):
    p = _sparse_lasso(n=50, m=40, density=0.3, center=center)
    v = p.eso_vector(tau)
    K = 1000
    coords = TauNiceSampler(50, tau, 4).draw(K)
    x0 = np.random.default_rng(1).standard_normal(50) * 0.1
    ref, got = {}, {}
    naive_approx(p, v.v, x0, coords, lambda k, x, z: ref.__setitem__(k, x))
    approx_run(p, v, x0, K, SamplingConfig(50, tau, 4), stride=1,
               callback=lambda k, x, z: got.__setitem__(k, x))
    assert sorted(got) == list(range(K + 1))
    for k in range(K + 1):
        assert np.allclose(got[k], ref[k], rtol=1e-8, atol=1e-10 * (1 + np.abs(ref[k]).max()))


def test_logistic_matches_naive_reference():
    p = tiny_logreg()
    v = p.eso_vector(2)
    coords = TauNiceSampler(p.n, 2, 0).draw(400)
    ref = naive_approx(p, v.v, np.zeros(p.n), coords)
    got = approx_run(p, v, np.zeros(p.n), 400, SamplingConfig(p.n, 2, 0))
    assert np.allclose(got, ref, rtol=1e-8, atol=1e-12)


def test_one_step_scalar():
    p = QuadraticProblem(np.array([[3.0]]), np.array([1.0]))
    v = p.eso_vector(1)
    x0 = np.array([2.5])
    x1 = approx_run(p, v, x0, 1, SamplingConfig(1, 1))
    assert x1[0] == pytest.approx(x0[0] - p.grad(x0)[0] / v.v[0])


def test_stationary_start_stays_fixed():
    p = QuadraticProblem.random(6, 0.1, seed=0)
    v = p.eso_vector(2)
    for run in (approx_run, cd_run):
        x = run(p, v, p.x_star, 300, SamplingConfig(6, 2, 3))
        assert np.allclose(x, p.x_star, atol=1e-12)


def test_cd_scalar_rate():
    p = QuadraticProblem(np.array([[2.0]]), np.array([0.0]))
    v = p.eso_vector(1)
    v.v[0] = 5.0
    x = cd_run(p, v, np.array([1.0]), 7, SamplingConfig(1, 1))
    assert x[0] == pytest.approx((1 - 2.0 / 5.0) ** 7)


def test_cd_matches_naive_reference():
    p = _sparse_lasso(center=True)
    v = p.eso_vector(2)
    coords = TauNiceSampler(p.n, 2, 9).draw(500)
    ref = naive_cd(p, v.v, np.zeros(p.n), coords)
    got = cd_run(p, v, np.zeros(p.n), 500, SamplingConfig(p.n, 2, 9))
    assert np.allclose(got, ref, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("build", [lambda: _sparse_lasso(center=True), tiny_logreg])
def test_cd_monotone(build):
    p = build()
    F = []
    cd_run(p, p.eso_vector(1), np.zeros(p.n), 2000, SamplingConfig(p.n, 1, 0), stride=1,
           callback=lambda k, x, z: F.append(p.F_value(x)))
    assert len(F) == 2001
    assert np.all(np.diff(F) <= 1e-12 * np.abs(F[:-1]))


def test_expected_objective_decreases():
    p = _sparse_lasso(n=10, m=20, density=0.5)
    v = p.eso_vector(1)
    x0 = np.ones(10)
    F = np.zeros(41)
    seeds = 200
    for s in range(seeds):
        def cb(k, x, z):
            F[k // 5] += p.F_value(x) / seeds
        approx_run(p, v, x0, 200, SamplingConfig(10, 1, s), stride=5, callback=cb)
    assert np.all(np.diff(F) <= 0.02 * np.abs(F[:-1]))


def test_work_counters():
    # with lam = 0 every sampled coordinate moves, so counts are exact
    p = _sparse_lasso(lam=0.0)
    nnz = np.diff(p.A.indptr)
    c = TauNiceSampler(p.n, 1, 5).draw(500)[:, 0]
    a = approx_run(p, p.eso_vector(1), np.zeros(p.n), 500, SamplingConfig(p.n, 1, 5), return_info=True)
    d = cd_run(p, p.eso_vector(1), np.zeros(p.n), 500, SamplingConfig(p.n, 1, 5), return_info=True)
    assert a.nnz_touched == 3 * nnz[c].sum()
    # plain CD may leave a coordinate exactly in place after a repeated draw
    assert nnz[c].sum() < d.nnz_touched <= 2 * nnz[c].sum()
    assert a.coord_updates == d.coord_updates == 500


def test_cached_products_stay_accurate():
    p = _sparse_lasso(center=True)
    for run in (approx_run, cd_run):
        for refresh in (None, 0):
            info = run(p, p.eso_vector(1), np.zeros(p.n), 5000, SamplingConfig(p.n, 1, 1),
                       refresh=refresh, return_info=True)
            exact = p.matvec(info.x)
            assert np.linalg.norm(info.Ax - exact) <= 1e-8 * np.linalg.norm(exact)


def test_non_finite_aborts():
    p = _sparse_lasso()
    v = p.eso_vector(1)
    x0 = np.zeros(p.n)
    bad = p.eso_vector(1)
    bad.v[:] = 1e-320
    with pytest.raises(NonFiniteError) as err:
        cd_run(p.with_lambda(0.0), bad, x0, 100, SamplingConfig(p.n, 1, 0))
    assert err.value.iteration >= 0 and 0 <= err.value.coordinate < p.n
    with pytest.raises(ValueError):
        approx_run(p, v, np.full(p.n, np.inf), 1, SamplingConfig(p.n, 1))
    with pytest.raises(ValueError):
        approx_run(p, v, x0, 1, SamplingConfig(p.n, 2))
    with pytest.raises(ValueError):
        approx_run(p, v, x0, 1, SamplingConfig(p.n, 1), theta=ThetaSequence(0.5))


def test_deterministic_given_seed():
    p = _sparse_lasso()
    v = p.eso_vector(2)
    a = approx_run(p, v, np.zeros(p.n), 3000, SamplingConfig(p.n, 2, 11))
    b = approx_run(p, v, np.zeros(p.n), 3000, SamplingConfig(p.n, 2, 11), stride=7)
    assert np.array_equal(a, b)


def test_sampler_continues_stream():
    p = _sparse_lasso()
    v = p.eso_vector(1)
    s = TauNiceSampler(p.n, 1, 3)
    theta = ThetaSequence(1 / p.n)
    approx_run(p, v, np.zeros(p.n), 100, s, theta=theta)
    rest = s.draw(5)
    fresh = TauNiceSampler(p.n, 1, 3)
    fresh.draw(100)
    assert np.array_equal(rest, fresh.draw(5))


def test_trace_records():
    p = tiny_lasso()
    tr = ConvergenceTrace(p.n, run_id="t", stride=p.n)
    approx_run(p, p.eso_vector(1), np.zeros(p.n), 5 * p.n + 3, SamplingConfig(p.n, 1), tr)
    ks = tr.column("k")
    assert ks == [0, 20, 40, 60, 80, 100, 103]
    assert tr.column("epoch")[-1] == pytest.approx(103 / 20)
    assert all(g >= 0 for g in tr.column("duality_gap"))


def test_cd_solve_converges_and_respects_budget():
    p = tiny_lasso()
    v = p.eso_vector(1)
    x, gap, status, used = cd_solve(p, v, np.zeros(p.n), SamplingConfig(p.n, 1, 0), eps=1e-8)
    assert status == "converged" and gap <= 1e-8 and used % p.n == 0
    x, gap, status, used = cd_solve(p, v, np.zeros(p.n), SamplingConfig(p.n, 1, 0), eps=1e-14,
                                    max_updates=95)
    assert status == "budget" and used == 95
    with pytest.raises(ValueError):
        cd_solve(p, v, np.zeros(p.n), SamplingConfig(p.n, 1, 0))
