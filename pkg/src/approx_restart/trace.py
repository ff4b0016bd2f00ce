"""Convergence traces and their CSV form."""
import csv
import io
import math
import time

__all__ = ["ConvergenceTrace", "TRACE_COLUMNS", "RESTART_COLUMNS"]

TRACE_COLUMNS = (
    "run_id", "k", "coord_updates", "epoch", "F", "F_minus_Fref", "duality_gap", "elapsed_seconds",
)
RESTART_COLUMNS = ("run_id", "restart_index", "K_r", "coord_updates", "F_before", "F_after", "kept")
TIMING_COLUMNS = ("elapsed_seconds",)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


class ConvergenceTrace:
    """Collects per-iteration and per-restart records from one producer.

    Parameters
    ----------
    n : int
        Problem dimension, used to convert coordinate updates to epochs.
    run_id : str
    F_ref : float, optional
        Reference optimum; fills the ``F_minus_Fref`` column.
    stride : int, optional
        Default number of iterations between records for the solvers.
    with_gap : bool
        Whether solvers should evaluate the duality gap at record points
        (a full pass over the data each time).
    """

    def __init__(self, n, run_id="run", F_ref=None, stride=None, with_gap=True, metadata=None):
        self.n = int(n)
        self.run_id = str(run_id)
        self.F_ref = F_ref
        self.stride = stride
        self.with_gap = with_gap
        self.metadata = dict(metadata or {})
        self.rows = []
        self.restarts = []
        self._t0 = time.perf_counter()

    def __len__(self):
        return len(self.rows)

    def elapsed(self):
        return time.perf_counter() - self._t0

    def record(self, k, coord_updates, F, gap=None):
        F = float(F)
        diff = None if self.F_ref is None else F - self.F_ref
        self.rows.append((
            self.run_id, int(k), int(coord_updates), coord_updates / self.n, F, diff,
            None if gap is None else float(gap), self.elapsed(),
        ))

    def record_restart(self, r, K_r, coord_updates, F_before, F_after, kept):
        if kept not in ("candidate", "previous"):
            raise ValueError("kept must be 'candidate' or 'previous'")
        self.restarts.append((
            self.run_id, int(r), int(K_r), int(coord_updates),
            None if F_before is None else float(F_before),
            None if F_after is None else float(F_after), kept,
        ))

    def column(self, name):
        idx = TRACE_COLUMNS.index(name)
        return [row[idx] for row in self.rows]

    @staticmethod
    def _write(rows, columns, fh, drop):
        keep = [i for i, c in enumerate(columns) if c not in drop]
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([columns[i] for i in keep])
        for row in rows:
            w.writerow([_fmt(row[i]) for i in keep])

    def to_csv(self, fh=None, timing=True):
        """Write the iteration records; ``timing=False`` drops wall-clock columns."""
        out = io.StringIO() if fh is None else fh
        self._write(self.rows, TRACE_COLUMNS, out, () if timing else TIMING_COLUMNS)
        return out.getvalue() if fh is None else None

    def restarts_to_csv(self, fh=None):
        out = io.StringIO() if fh is None else fh
        self._write(self.restarts, RESTART_COLUMNS, out, ())
        return out.getvalue() if fh is None else None
