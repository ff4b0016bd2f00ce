"""Warm-started Lasso path with restarted APPROX and with coordinate descent.

The regularization weight shrinks geometrically from the smallest value
where ``x = 0`` is optimal down to a thousandth of it. The restarted solver
keeps its base period from one weight to the next.

Run with ``python3 demos/lasso_path.py``.
"""
from approx_restart import LassoProblem, normalize_columns, synth_lasso
from approx_restart.cli import lasso_path

EPS = 1e-6


def main():
    ds, _ = synth_lasso(100, 200, density=1.0, noise=0.1, seed=0, corr=0.95)
    p = LassoProblem.from_dataset(normalize_columns(ds, center=True), 0.0)
    runs = {algo: lasso_path(p, EPS, algo=algo) for algo in ("approx-restart", "cd")}
    print(f"{'t':>2}  {'lambda':>10}  {'nnz':>4}  {'restart epochs':>14}  {'cd epochs':>10}")
    for a, c in zip(runs["approx-restart"], runs["cd"]):
        print(f"{a['t']:>2}  {a['lambda']:10.4g}  {a['nnz_x']:>4}  "
              f"{a['coord_updates'] / p.n:14.1f}  {c['coord_updates'] / p.n:10.1f}")
    totals = {k: v[-1]["total_coord_updates"] / p.n for k, v in runs.items()}
    print(f"total epochs: restart {totals['approx-restart']:.1f}, cd {totals['cd']:.1f}")


if __name__ == "__main__":
    main()
