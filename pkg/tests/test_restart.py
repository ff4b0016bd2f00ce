import math

import numpy as np
import pytest

from tiny_problems import tiny_lasso

from approx_restart import ConvergenceTrace, QuadraticProblem
from approx_restart.engine import SamplingConfig, approx_run
from approx_restart.problems import ErrorBoundEstimate, exact_mu_v
from approx_restart.restart import (
    RestartPolicy,
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


def test_variable_example():
    assert schedule_variable(1).take(8) == [1, 2, 1, 4, 1, 2, 1, 8]
    assert schedule_variable(3).take(4) == [3, 6, 3, 12]


@pytest.mark.parametrize("K0", [1, 3, 10])
def test_variable_satisfies_doubling_clauses(K0):
    s = schedule_variable(K0)
    periods = s.take((1 << 12) - 1)
    assert periods[0] >= 1
    for J in range(1, 13):
        assert s.period((1 << J) - 1) == (1 << J) * K0
        head = periods[: (1 << J) - 1]
        for j in range(J):
            assert head.count((1 << j) * K0) == 1 << (J - 1 - j)
        # sum over r = 0 .. 2^J - 1
        assert sum(head) + s.period((1 << J) - 1) == (J + 2) * (1 << (J - 1)) * K0


def test_variable_period_matches_iteration():
    s = schedule_variable(5, double_every=4)
    assert [s.period(r) for r in range(40)] == s.take(40)
    assert s.base_at(0) == 5 and s.base_at(4) == 10 and s.base_at(9) == 20


def test_variable_truncation():
    s = schedule_variable(1, truncate_after=2)
    assert s.take(6) == [1, 2, 1, 4, 2, 8]
    assert 1 not in s.take(50)[3:]


def test_log_grid_examples():
    assert schedule_log_grid(4).take(5) == [2, 2, 4, 8, 16]
    assert schedule_log_grid(2).take(3) == [2, 4, 8]
    got = schedule_log_grid(10).take(12)
    assert got == [2] * 5 + [4] * 3 + [8] * 2 + [16, 32]
    assert all(K & (K - 1) == 0 for K in schedule_log_grid(37).take(100))
    with pytest.raises(ValueError):
        schedule_log_grid(1)


def test_fixed_and_explicit():
    assert RestartSchedule.fixed(7).take(3) == [7, 7, 7]
    s = RestartSchedule.explicit([3, 1])
    assert list(s) == [3, 1] and s.length == 2
    with pytest.raises(IndexError):
        s.period(2)
    with pytest.raises(ValueError):
        RestartSchedule.explicit([])
    with pytest.raises(ValueError):
        RestartSchedule.fixed(0)


def test_fixed_needs_mu():
    with pytest.raises(ValueError, match="mu"):
        RestartSchedule.fixed_from_estimate(ErrorBoundEstimate(None, "unknown"), 0.1)
    s = RestartSchedule.fixed_from_estimate(ErrorBoundEstimate(1e-3, "user"), 0.1)
    assert s.take(2) == [1667, 1667]


def test_policy_parse():
    assert RestartPolicy.parse("plain").name == "plain"
    assert RestartPolicy.parse(True).guarantee_decrease
    with pytest.raises(ValueError):
        RestartPolicy.parse("sometimes")


def test_calculator_examples():
    assert k_star(1e-3, 0.1) == 1667
    assert k_star(1.0, 1.0) == 4
    assert n_star(1e-3, 0.1, math.e, 1.0) == pytest.approx(1667)
    assert k_alpha(1e300, 0.1, 0.25) == math.ceil(20 * (2 - 1) + 1)
    # the ceiling argument sits just above 1 unless alpha rounds the root to 1
    assert k_alpha(1e300, 0.5, 1 - 2.0 ** -53) == 1
    assert k_alpha(1e300, 0.5, 0.999999) == 2
    assert k_star_general(1.0, 0.0, 1.0) == 1
    assert k_star_general(16.0, 1e-9, 1e12, a=0.5) == math.ceil(4 / math.e - 0.5)
    assert k_star_general(16.0, 24.0 * 7.0, 0.01) == math.ceil(math.sqrt(16 + 16800) / math.e)
    with pytest.raises(ValueError):
        k_alpha(1.0, 0.1, 1.0)
    with pytest.raises(ValueError):
        n_star(1.0, 0.1, 1.0, 2.0)


@pytest.mark.parametrize("mu", [1e-4, 1e-3, 0.1, 1.0, 30.0])
@pytest.mark.parametrize("theta0", [1e-3, 0.01, 0.1, 0.5])
def test_k_alpha_vs_k_star_identity(mu, theta0):
    # the two ceiling arguments differ by exactly 2 (e - 1) / theta0
    arg_a = 2 / theta0 * (math.sqrt((1 + mu) / (math.exp(-2) * mu)) - 1) + 1
    arg_s = 2 * math.e / theta0 * (math.sqrt((1 + mu) / mu) - 1) + 1
    assert arg_a - arg_s == pytest.approx(2 * (math.e - 1) / theta0, rel=1e-9)
    assert k_alpha(mu, theta0, math.exp(-2)) == math.ceil(arg_a)
    assert k_star(mu, theta0) == math.ceil(arg_s)


def test_variable_complexity():
    J, bound = variable_complexity(100, 100, math.exp(8), 1.0)
    assert bound == pytest.approx(3200)
    assert J == 0 + 2
    J2, bound2 = variable_complexity(400, 100, math.exp(8), 1.0)
    assert J2 == 2 and bound2 == pytest.approx(4 * 8 * 400)
    J3, _ = variable_complexity(10, 100, math.exp(8), 1.0)
    assert J3 == 4 + 2
    with pytest.raises(ValueError, match="degenerate"):
        variable_complexity(1, 1, math.e, 1.0)


def _quad(seed=0, n=10, mu=0.05):
    return QuadraticProblem.random(n, mu, seed=seed)


def test_decrease_policy_never_increases():
    p = tiny_lasso()
    v = p.eso_vector(1)
    seen = []
    res = restart_loop(p, v, np.zeros(p.n), schedule_variable(3), "decrease", max_restarts=60,
                       sampling=SamplingConfig(p.n, 1, 4),
                       on_restart=lambda q, r, xb, xa, kept: seen.append(q.F_difference(xa, xb)))
    assert len(seen) == 60 and all(d <= 0 for d in seen)
    # rounded F values may wobble by an ulp where the exact comparison does not
    assert all(a <= b * (1 + 1e-14) for b, a in zip(res.F_history, res.F_history[1:]))
    assert res.status == "max_restarts" and res.restarts == 60


def test_plain_policy_always_takes_candidate():
    p = tiny_lasso()
    kept = []
    restart_loop(p, p.eso_vector(1), np.zeros(p.n), RestartSchedule.fixed(2), "plain", max_restarts=50,
                 on_restart=lambda q, r, xb, xa, k: kept.append(k))
    assert set(kept) == {"candidate"}


def test_one_period_equals_plain_run():
    p = _quad()
    v = p.eso_vector(1)
    x0 = np.ones(p.n)
    res = restart_loop(p, v, x0, RestartSchedule.explicit([137]), "plain", sampling=SamplingConfig(p.n, 1, 8))
    assert res.status == "schedule_exhausted"
    assert np.array_equal(res.x, approx_run(p, v, x0, 137, SamplingConfig(p.n, 1, 8)))


def test_conditional_contraction():
    # one period of length K(alpha) contracts the mean suboptimality by alpha
    p = _quad(seed=1)
    v = p.eso_vector(1)
    mu = exact_mu_v(p, v).mu_v
    alpha = 0.25
    K = k_alpha(mu, 1 / p.n, alpha)
    x0 = np.ones(p.n)
    F0 = p.F_value(x0) - p.F_star
    vals = [p.F_value(approx_run(p, v, x0, K, SamplingConfig(p.n, 1, s))) - p.F_star for s in range(100)]
    assert np.mean(vals) <= 1.1 * alpha * F0


def test_variable_schedule_meets_complexity_bound():
    p = _quad(seed=2, mu=0.02)
    v = p.eso_vector(1)
    theta0 = 1 / p.n
    mu = exact_mu_v(p, v).mu_v
    Ks = k_star(mu, theta0)
    x0 = np.ones(p.n)
    # delta0 with dist_v(x0)^2 <= 2 (F - F*) / mu
    delta0 = (1 - theta0) * (p.F_value(x0) - p.F_star) + (p.F_value(x0) - p.F_star) / mu
    eps = 1e-8 * delta0
    _, bound = variable_complexity(Ks // 4, Ks, delta0, eps)
    finals = []
    for s in range(50):
        res = restart_loop(p, v, x0, schedule_variable(Ks // 4), "decrease", max_updates=int(bound),
                           sampling=SamplingConfig(p.n, 1, s))
        finals.append(res.F - p.F_star)
    assert np.mean(finals) <= eps


def test_eps_stop_and_budget_truncation():
    p = tiny_lasso()
    v = p.eso_vector(1)
    res = restart_loop(p, v, np.zeros(p.n), schedule_variable(40), eps=1e-9)
    assert res.status == "converged" and res.gap <= 1e-9
    assert p.duality_gap(res.x) == pytest.approx(res.gap)
    res = restart_loop(p, v, np.zeros(p.n), RestartSchedule.fixed(30), max_updates=100)
    assert res.periods == [30, 30, 30, 10] and res.coord_updates == 100 and res.status == "budget"
    with pytest.raises(ValueError):
        restart_loop(p, v, np.zeros(p.n), RestartSchedule.fixed(30))


def test_converged_at_start():
    p = tiny_lasso()
    big = p.with_lambda(p.lambda_max())
    res = restart_loop(big, big.eso_vector(1), np.zeros(p.n), schedule_variable(5), eps=1e-12)
    assert res.status == "converged" and res.restarts == 0 and res.coord_updates == 0


def test_restart_records():
    p = tiny_lasso()
    tr = ConvergenceTrace(p.n, run_id="r", stride=10)
    res = restart_loop(p, p.eso_vector(2), np.zeros(p.n), schedule_variable(10), max_restarts=7,
                       sampling=SamplingConfig(p.n, 2, 0), trace=tr)
    assert [row[1] for row in tr.restarts] == list(range(7))
    assert [row[2] for row in tr.restarts] == [10, 20, 10, 40, 10, 20, 10]
    assert tr.restarts[-1][3] == res.coord_updates == 2 * 120
    ks = tr.column("k")
    assert ks[0] == 0 and ks == sorted(ks) and ks[-1] == 120
    assert tr.column("coord_updates")[-1] == 240
    header = tr.restarts_to_csv().splitlines()[0]
    assert header == "run_id,restart_index,K_r,coord_updates,F_before,F_after,kept"
