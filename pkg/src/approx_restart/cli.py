"""Command-line drivers.

Subcommands::

    solve     one problem, one algorithm; trace CSV + summary JSON
    path      Lasso regularization path with warm starts
    rates     restart-rate table against the coordinate-descent model
    schedule  print restart periods
    gen       write a synthetic dataset in LibSVM format

Every subcommand accepts ``--config FILE`` with a flat JSON object whose keys
are option names (``lambda``, ``tau``, ``schedule``, ...); flags given on the
command line win.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, asdict
import datetime
import importlib.resources
import json
import math
import os
import sys
import time

import numpy as np

from .data_io import normalize_columns, parse_libsvm, synth_lasso, synth_logreg, write_libsvm
from .engine import GENERATOR, SamplingConfig, approx_run, cd_run, cd_solve
from .problems import LassoProblem, LogRegProblem, QuadraticProblem
from .rates import figure1_table, improvement_window, write_rates_csv
from .restart import RestartSchedule, restart_loop
from .theta import theta_init
from .trace import ConvergenceTrace

__all__ = [
    "main",
    "build_parser",
    "RunConfig",
    "parse_schedule",
    "cmd_solve",
    "cmd_path",
    "cmd_rates",
    "cmd_schedule",
    "cmd_gen",
    "lasso_path",
    "SUMMARY_SCHEMA",
    "PATH_COLUMNS",
]

SUMMARY_SCHEMA = json.loads(
    importlib.resources.files(__package__).joinpath("summary_schema.json").read_text()
)

PATH_COLUMNS = (
    "t", "lambda", "lambda_ratio", "status", "coord_updates", "total_coord_updates", "restarts",
    "K0", "F", "duality_gap", "nnz_x", "elapsed_seconds",
)

DEFAULT_EPS = 1e-6
DEFAULT_BUDGET = 10 ** 8


class ConfigError(ValueError):
    """Invalid command-line or config-file input (exit status 2)."""


# -- configuration ---------------------------------------------------------------

def parse_schedule(text, theta0=None):
    """``fixed:K``, ``variable:K0`` or ``loggrid:N`` to a :class:`RestartSchedule`.

    ``variable`` without a value uses ``K0 = ceil(20 e / theta0)``.
    """
    kind, _, value = str(text).partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "variable" and value == "":
            if theta0 is None:
                raise ConfigError("variable schedule without K0 needs theta0")
            return RestartSchedule.variable(math.ceil(20 * math.e / theta0))
        num = int(value)
        if kind == "fixed":
            return RestartSchedule.fixed(num)
        if kind == "variable":
            return RestartSchedule.variable(num)
        if kind in ("loggrid", "log_grid"):
            return RestartSchedule.log_grid(num)
    except ValueError as exc:
        raise ConfigError(f"bad schedule {text!r}: {exc}") from None
    raise ConfigError(f"bad schedule {text!r}; expected fixed:K, variable:K0 or loggrid:N")


def _schedule_text(s):
    if s.kind == "fixed":
        return f"fixed:{s.params['K']}"
    if s.kind == "variable":
        return f"variable:{s.params['K0']}"
    if s.kind == "log_grid":
        return f"loggrid:{s.params['N']}"
    return "explicit:" + ",".join(map(str, s.params["periods"]))


def _parse_synth(text, need_m=True):
    parts = str(text).split(",")
    try:
        n = int(parts[0])
        m = int(parts[1]) if len(parts) > 1 else 0
    except ValueError:
        raise ConfigError(f"--synth expects 'n,m', got {text!r}") from None
    if len(parts) > 2 or n < 1 or (need_m and m < 1):
        raise ConfigError(f"--synth expects positive sizes 'n,m', got {text!r}")
    return n, m


def _parse_seeds(text):
    try:
        seeds = [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"--seed expects an integer or a comma list, got {text!r}") from None
    if not seeds:
        raise ConfigError("no seed given")
    return seeds


@dataclass
class RunConfig:
    """Everything one ``solve`` run needs; picklable for worker processes."""

    model: str = "lasso"
    data: str | None = None
    synth: str | None = None
    density: float = 1.0
    noise: float = 0.1
    corr: float = 0.0
    mu: float = 1e-2
    data_seed: int = 0
    normalize: str = "none"
    lam: float | None = None
    lambda_ratio: float | None = None
    algo: str = "approx-restart"
    tau: int = 1
    seed: int = 0
    schedule: str | None = None
    policy: str = "decrease"
    eps: float | None = DEFAULT_EPS
    budget: int | None = DEFAULT_BUDGET
    stride: int | None = None
    fref: float | None = None
    out: str | None = None
    trace_gap: bool = True
    run_id: str | None = None

    def validate(self):
        if (self.data is None) == (self.synth is None) and self.model != "quadratic":
            raise ConfigError("give exactly one of --data and --synth")
        if self.model == "quadratic" and self.data is not None:
            raise ConfigError("the quadratic model is synthetic only (use --synth n,0)")
        if self.eps is None and self.budget is None:
            raise ConfigError("set --eps or --budget")
        if self.eps is not None and not self.eps > 0:
            raise ConfigError("--eps must be positive")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("--budget must be positive")
        if self.lam is not None and self.lambda_ratio is not None:
            raise ConfigError("give at most one of --lambda and --lambda-ratio")


def load_dataset(cfg):
    if cfg.data is not None:
        try:
            ds = parse_libsvm(cfg.data)
        except OSError as exc:
            raise ConfigError(f"cannot read {cfg.data}: {exc.strerror}") from None
    else:
        n, m = _parse_synth(cfg.synth)
        if cfg.model == "logreg":
            ds, _ = synth_logreg(n, m, cfg.density, seed=cfg.data_seed)
        else:
            ds, _ = synth_lasso(n, m, cfg.density, cfg.noise, seed=cfg.data_seed, corr=cfg.corr)
    if cfg.model == "logreg":
        ds = ds.binary()
    if cfg.normalize == "scale":
        ds = normalize_columns(ds)
    elif cfg.normalize == "center":
        ds = normalize_columns(ds, center=True)
    elif cfg.normalize != "none":
        raise ConfigError(f"unknown normalization {cfg.normalize!r}")
    return ds


def build_problem(cfg):
    """Problem instance for a config; returns ``(problem, F_ref)``."""
    if cfg.model == "quadratic":
        n = _parse_synth(cfg.synth, need_m=False)[0] if cfg.synth else 10
        p = QuadraticProblem.random(n, cfg.mu, seed=cfg.data_seed)
        return p, 0.0
    ds = load_dataset(cfg)
    if cfg.model == "lasso":
        p = LassoProblem.from_dataset(ds, 0.0)
        lam = cfg.lam
        if lam is None:
            lam = (cfg.lambda_ratio if cfg.lambda_ratio is not None else 0.1) * p.lambda_max()
        return p.with_lambda(lam), cfg.fref
    if cfg.model == "logreg":
        lam1 = cfg.lam if cfg.lam is not None else 10.0
        try:
            return LogRegProblem.from_dataset(ds, lam1), cfg.fref
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown model {cfg.model!r}")


# -- solve -------------------------------------------------------------------------

def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def solve_one(cfg: RunConfig):
    """Run one configuration; returns the summary dict (files written if ``cfg.out``)."""
    cfg.validate()
    p, F_ref = build_problem(cfg)
    n = p.n
    if not 1 <= cfg.tau <= n:
        raise ConfigError(f"tau must lie in [1, n] = [1, {n}], got {cfg.tau}")
    eso = p.eso_vector(cfg.tau)
    sampling = SamplingConfig(n, cfg.tau, cfg.seed)
    run_id = cfg.run_id or f"{cfg.algo}-s{cfg.seed}"
    stride = cfg.stride or max(n // cfg.tau, 1)
    trace = ConvergenceTrace(n, run_id, F_ref=F_ref, stride=stride, with_gap=cfg.trace_gap,
                             metadata={"generator": GENERATOR, "seed": cfg.seed})
    t0 = time.perf_counter()
    schedule_text = policy = None
    restarts = nnz = 0
    if cfg.algo == "cd":
        x, gap, status, used = cd_solve(p, eso, np.zeros(n), sampling, eps=cfg.eps,
                                        max_updates=cfg.budget, check_every=stride, trace=trace)
    elif cfg.algo == "approx":
        if cfg.budget is None:
            raise ConfigError("plain approx runs a fixed number of iterations; set --budget")
        K = cfg.budget // cfg.tau
        info = approx_run(p, eso, np.zeros(n), K, sampling, trace, stride=stride, return_info=True)
        x, used, nnz, status = info.x, info.coord_updates, info.nnz_touched, "done"
        gap = p.duality_gap(x) if cfg.eps is not None else None
    elif cfg.algo == "approx-restart":
        theta0 = theta_init(cfg.tau, n).theta0
        schedule = parse_schedule(cfg.schedule or "variable", theta0)
        schedule_text, policy = _schedule_text(schedule), cfg.policy
        res = restart_loop(p, eso, np.zeros(n), schedule, cfg.policy, eps=cfg.eps,
                           max_updates=cfg.budget, sampling=sampling, trace=trace, stride=stride)
        x, gap, status, used = res.x, res.gap, res.status, res.coord_updates
        restarts, nnz = res.restarts, res.nnz_touched
    else:
        raise ConfigError(f"unknown algorithm {cfg.algo!r}")
    elapsed = time.perf_counter() - t0

    summary = {
        "run_id": run_id,
        "command": "solve",
        "model": cfg.model,
        "algorithm": cfg.algo,
        "n": n,
        "m": p.m,
        "lambda": p.lam1 if cfg.model == "logreg" else p.lam,
        "tau": cfg.tau,
        "seed": cfg.seed,
        "generator": GENERATOR,
        "schedule": schedule_text,
        "policy": policy,
        "eps": cfg.eps,
        "budget": cfg.budget,
        "status": status,
        "F": p.F_value(x),
        "duality_gap": gap,
        "coord_updates": int(used),
        "epochs": used / n,
        "restarts": int(restarts),
        "nnz_touched": int(nnz),
        "elapsed_seconds": elapsed,
        "finished_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "trace_file": None,
        "restart_file": None,
    }
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        summary["trace_file"] = os.path.join(cfg.out, "trace.csv")
        _write(summary["trace_file"], trace.to_csv())
        if cfg.algo == "approx-restart":
            summary["restart_file"] = os.path.join(cfg.out, "restarts.csv")
            _write(summary["restart_file"], trace.restarts_to_csv())
        _write(os.path.join(cfg.out, "summary.json"), json.dumps(summary, indent=2) + "\n")
    return summary


def cmd_solve(cfg: RunConfig, seeds=None, jobs=1):
    """Solve for each seed (concurrently with ``jobs > 1``); returns the summaries.

    With several seeds every run writes into ``<out>/seed-<s>/``.
    """
    seeds = seeds or [cfg.seed]
    cfgs = []
    for s in seeds:
        c = RunConfig(**asdict(cfg))
        c.seed = s
        if cfg.out and len(seeds) > 1:
            c.out = os.path.join(cfg.out, f"seed-{s}")
        cfgs.append(c)
    if jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(solve_one, cfgs))
    return [solve_one(c) for c in cfgs]


# -- path --------------------------------------------------------------------------

def lasso_path(problem, eps=DEFAULT_EPS, T=10, ratio=1e-3, algo="approx-restart", tau=1, seed=0,
               policy="decrease", budget=None, double_every=None, warmup=None, on_restart=None):
    """Pathwise optimization over ``lam_t = lam_0 alpha**t``, ``t = 0..T``.

    ``lam_0`` is the smallest weight with ``x = 0`` optimal and
    ``alpha = ratio**(1/T)``. Each point is warm started from the previous
    solution and solved to duality gap ``eps``.

    ``algo="approx-restart"`` first runs ``warmup`` (default ``10 n``)
    iterations of coordinate descent at the first point that needs any work,
    then variable restarts with ``K0 = 10 n``; the base period doubles after
    every ``double_every`` restarts (default ``ceil(log2(1/eps))``) and is
    carried over to the next point. ``algo="cd"`` runs coordinate descent
    with the gap checked every epoch. ``on_restart`` is passed to
    :func:`restart_loop`.

    Returns a list of dicts with keys :data:`PATH_COLUMNS`.
    """
    p0 = problem
    n = p0.n
    lam0 = p0.lambda_max()
    alpha = ratio ** (1.0 / T)
    sampler = SamplingConfig(n, tau, seed).sampler()
    if double_every is None:
        double_every = max(1, math.ceil(math.log2(1.0 / eps)))
    warmup = 10 * n if warmup is None else warmup
    K0 = 10 * n
    warmed = False
    x = np.zeros(n)
    total = 0
    rows = []
    for t in range(T + 1):
        t0 = time.perf_counter()
        lam = lam0 * alpha ** t
        p = p0.with_lambda(lam)
        eso = p.eso_vector(tau)
        used = restarts = 0
        K0_in = K0
        if algo == "cd":
            x, gap, status, used = cd_solve(p, eso, x, sampler, eps=eps, max_updates=budget)
        elif algo == "approx-restart":
            gap = p.duality_gap(x)
            status = "converged"
            if gap > eps:
                if not warmed and warmup:
                    K = warmup if budget is None else min(warmup, budget // tau)
                    x = cd_run(p, eso, x, K, sampler)
                    used += K * tau
                    warmed = True
                left = None if budget is None else budget - used
                res = restart_loop(p, eso, x, RestartSchedule.variable(K0, double_every=double_every),
                                   policy, eps=eps, max_updates=left, sampling=sampler,
                                   on_restart=on_restart)
                x, gap, status = res.x, res.gap, res.status
                used += res.coord_updates
                restarts = res.restarts
                K0 = res.last_base
        else:
            raise ConfigError(f"path supports algo 'approx-restart' or 'cd', got {algo!r}")
        total += used
        rows.append({
            "t": t, "lambda": lam, "lambda_ratio": lam / lam0, "status": status,
            "coord_updates": used, "total_coord_updates": total, "restarts": restarts,
            "K0": K0_in if algo != "cd" else None, "F": p.F_value(x), "duality_gap": gap,
            "nnz_x": int(np.count_nonzero(x)), "elapsed_seconds": time.perf_counter() - t0,
        })
    return rows


def write_path_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(PATH_COLUMNS)
    for row in rows:
        w.writerow(["" if row[c] is None else (repr(row[c]) if isinstance(row[c], float) else row[c])
                    for c in PATH_COLUMNS])


def cmd_path(cfg: RunConfig, T=10, ratio=1e-3, double_every=None, on_restart=None):
    if cfg.model != "lasso":
        raise ConfigError("the path driver supports the lasso model")
    if cfg.eps is None:
        raise ConfigError("the path driver needs --eps")
    if cfg.normalize == "none":
        cfg = RunConfig(**{**asdict(cfg), "normalize": "center"})
    ds = load_dataset(cfg)
    p = LassoProblem.from_dataset(ds, 0.0)
    if not 1 <= cfg.tau <= p.n:
        raise ConfigError(f"tau must lie in [1, n] = [1, {p.n}], got {cfg.tau}")
    algo = "cd" if cfg.algo == "cd" else "approx-restart"
    return lasso_path(p, cfg.eps, T, ratio, algo, cfg.tau, cfg.seed, cfg.policy,
                      cfg.budget, double_every, on_restart=on_restart)


# -- rates, schedule, gen ----------------------------------------------------------

def default_k_grid(K_max=10 ** 6, per_decade=10):
    grid = np.unique(np.round(np.logspace(0, math.log10(K_max), per_decade * round(math.log10(K_max)) + 1)))
    return [int(K) for K in grid]


def cmd_rates(mu, n, tau=1, K_grid=None, exact=True, fh=None):
    """Write the rate table as CSV; returns ``(rows, window)``."""
    K_grid = K_grid or default_k_grid()
    rows = figure1_table(mu, n, tau, K_grid, exact=exact)
    window = improvement_window(mu, n, tau, max(K_grid))
    write_rates_csv(rows, fh if fh is not None else sys.stdout)
    return rows, window


def cmd_schedule(text, count, theta0=None):
    periods = parse_schedule(text, theta0).take(count)
    return " ".join(map(str, periods))


def cmd_gen(model, n, m, density, noise, seed, path, corr=0.0, flip=0.1):
    if model == "logreg":
        ds, x = synth_logreg(n, m, density, flip, seed)
    elif model == "lasso":
        ds, x = synth_lasso(n, m, density, noise, seed, corr=corr)
    else:
        raise ConfigError("gen supports the lasso and logreg models")
    write_libsvm(ds, path)
    return ds, x


# -- argument parsing --------------------------------------------------------------

def _add_problem_args(ap):
    g = ap.add_argument_group("problem")
    g.add_argument("--data", help="LibSVM file")
    g.add_argument("--synth", help="synthetic instance 'n,m'")
    g.add_argument("--model", choices=("lasso", "logreg", "quadratic"), default="lasso")
    g.add_argument("--lambda", dest="lam", type=float,
                   help="l1 weight (lasso) or loss weight lambda1 (logreg)")
    g.add_argument("--lambda-ratio", type=float, help="lasso l1 weight as a fraction of lambda_max")
    g.add_argument("--density", type=float, default=1.0)
    g.add_argument("--noise", type=float, default=0.1)
    g.add_argument("--corr", type=float, default=0.0, help="column correlation of synthetic lasso data")
    g.add_argument("--mu", type=float, default=1e-2, help="error-bound constant of the quadratic model")
    g.add_argument("--data-seed", type=int, default=0)
    g.add_argument("--normalize", choices=("none", "scale", "center"), default="none")


def _add_solver_args(ap, path=False):
    g = ap.add_argument_group("solver")
    algos = ("approx-restart", "cd") if path else ("approx-restart", "approx", "cd")
    g.add_argument("--algo", choices=algos, default="approx-restart")
    g.add_argument("--tau", type=int, default=1)
    g.add_argument("--seed", default="0", help="integer, or comma list for several runs")
    if not path:
        g.add_argument("--schedule", help="fixed:K | variable:K0 | loggrid:N (default variable, K0 = ceil(20e/theta0))")
    g.add_argument("--policy", choices=("plain", "decrease"), default="decrease")
    g.add_argument("--eps", type=float, default=DEFAULT_EPS, help="duality-gap tolerance")
    g.add_argument("--budget", type=int, default=None if path else DEFAULT_BUDGET,
                   help="maximum coordinate updates" + (" per lambda" if path else ""))
    g.add_argument("--out", help="output directory")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for several seeds")


def build_parser():
    ap = argparse.ArgumentParser(prog="approx-restart", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one problem")
    _add_problem_args(s)
    _add_solver_args(s)
    s.add_argument("--stride", type=int, help="iterations between trace records (default n/tau)")
    s.add_argument("--fref", type=float, help="reference optimum for the F_minus_Fref column")
    s.add_argument("--no-trace-gap", dest="trace_gap", action="store_false",
                   help="skip the duality gap at trace points")

    s = sub.add_parser("path", help="lasso regularization path")
    _add_problem_args(s)
    _add_solver_args(s, path=True)
    s.add_argument("--T", type=int, default=10, help="number of steps after lambda_0")
    s.add_argument("--ratio", type=float, default=1e-3, help="lambda_T / lambda_0")
    s.add_argument("--double-every", type=int, help="restarts between doublings of K0 (default ceil(log2(1/eps)))")

    s = sub.add_parser("rates", help="restart rate table")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--tau", type=int, default=1)
    s.add_argument("--K", help="comma list of restart periods (default log grid up to 1e6)")
    s.add_argument("--K-max", type=int, default=10 ** 6)
    s.add_argument("--no-exact", dest="exact", action="store_false")
    s.add_argument("--out", help="CSV file (default stdout)")

    s = sub.add_parser("schedule", help="print restart periods")
    s.add_argument("--schedule", required=True, help="fixed:K | variable:K0 | loggrid:N")
    s.add_argument("--count", type=int, default=16)

    s = sub.add_parser("gen", help="write a synthetic dataset")
    s.add_argument("--model", choices=("lasso", "logreg"), default="lasso")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--density", type=float, default=1.0)
    s.add_argument("--noise", type=float, default=0.1)
    s.add_argument("--corr", type=float, default=0.0)
    s.add_argument("--flip", type=float, default=0.1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output LibSVM file")

    for p in sub.choices.values():
        p.add_argument("--config", help="JSON file of option defaults")
    ap.subcommands = sub.choices
    return ap


def parse_args(argv=None):
    """Parse ``argv``; values from ``--config`` fill in options not given as flags."""
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            ap.error(f"cannot load config {args.config}: {exc}")
        if not isinstance(values, dict):
            ap.error("config file must hold a JSON object")
        sub = ap.subcommands[args.command]
        dests = {a.dest: a for a in sub._actions}
        aliases = {"lambda": "lam", "no_trace_gap": "trace_gap"}
        defaults = {}
        for key, val in values.items():
            dest = aliases.get(key.replace("-", "_"), key.replace("-", "_"))
            if dest not in dests or dest in ("help", "config"):
                ap.error(f"unknown config key {key!r} for {args.command}")
            defaults[dest] = val
        sub.set_defaults(**defaults)
        args = ap.parse_args(argv)
    return args


def _config_from_args(args):
    fields = RunConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(args).items() if k in fields and k != "seed"}
    seeds = _parse_seeds(args.seed)
    return RunConfig(seed=seeds[0], **kw), seeds


def main(argv=None):
    args = parse_args(argv)
    try:
        if args.command == "solve":
            cfg, seeds = _config_from_args(args)
            summaries = cmd_solve(cfg, seeds, args.jobs)
            for s in summaries:
                gap = "n/a" if s["duality_gap"] is None else f"{s['duality_gap']:.3e}"
                print(f"{s['run_id']}: status={s['status']} F={s['F']!r} gap={gap} "
                      f"updates={s['coord_updates']} epochs={s['epochs']:.2f}")
            return 0 if all(s["status"] in ("converged", "done") for s in summaries) else 1
        if args.command == "path":
            cfg, seeds = _config_from_args(args)
            cfg.seed = seeds[0]
            rows = cmd_path(cfg, args.T, args.ratio, args.double_every)
            if cfg.out:
                os.makedirs(cfg.out, exist_ok=True)
                with open(os.path.join(cfg.out, "path.csv"), "w", newline="") as fh:
                    write_path_csv(rows, fh)
            write_path_csv(rows, sys.stdout)
            return 0 if all(r["status"] == "converged" for r in rows) else 1
        if args.command == "rates":
            grid = [int(k) for k in args.K.split(",")] if args.K else default_k_grid(args.K_max)
            if args.out:
                with open(args.out, "w", newline="") as fh:
                    _, window = cmd_rates(args.mu, args.n, args.tau, grid, args.exact, fh)
            else:
                _, window = cmd_rates(args.mu, args.n, args.tau, grid, args.exact)
            print(f"window: {window}", file=sys.stderr)
            return 0
        if args.command == "schedule":
            print(cmd_schedule(args.schedule, args.count))
            return 0
        if args.command == "gen":
            ds, _ = cmd_gen(args.model, args.n, args.m, args.density, args.noise, args.seed,
                            args.out, args.corr, args.flip)
            print(f"wrote {args.out}: m={ds.n_rows} n={ds.n_cols} nnz={ds.matrix.nnz}")
            return 0
    except (ConfigError, ValueError) as exc:
        print(f"approx-restart {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
