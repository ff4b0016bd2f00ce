"""Per-iteration rate of restarted APPROX as a function of the restart period.

Prints ``1 - rate`` for a range of periods next to the coordinate-descent
rate model, then the range of periods for which restarting beats plain
coordinate descent. Small periods restart before momentum builds up; very
long ones lose the linear rate.

Run with ``python3 demos/rate_window.py``.
"""
from approx_restart import figure1_table, k_star
from approx_restart.rates import improvement_window

MU, N, TAU = 1e-3, 10, 1


def main():
    grid = [1, 5, 10, 50, 100, 500, 1000, 5000, 10_000, 50_000, 100_000, 500_000]
    print(f"{'K':>8}  {'bound':>10}  {'exact':>10}  {'cd':>10}")
    for K, bound, exact, cd in figure1_table(MU, N, TAU, grid):
        mark = "*" if bound > cd else " "
        print(f"{K:>8}  {bound:10.3e}  {exact:10.3e}  {cd:10.3e} {mark}")
    lo, hi = improvement_window(MU, N, TAU, 10 ** 6)
    print(f"restarting beats coordinate descent for K in [{lo}, {hi}] (marked *)")
    print(f"fixed period K* for this mu: {k_star(MU, TAU / N)}")


if __name__ == "__main__":
    main()
