"""Black-box experiment boundary.

An estimator is only allowed to apply input batches and observe output
batches. The simulated plant behind a session hides its state-space model
entirely; in reset-free mode the internal state carries over from batch to
batch exactly as it would on continuously operated hardware, while the
reset-per-batch mode zeroes the state before every batch.
"""

from dataclasses import dataclass

import numpy as np

from .lifting import lift, periodic_response_matrix
from .lti import StateSpace, simulate

__all__ = [
    "RESET_FREE",
    "RESET_PER_BATCH",
    "BatchRecord",
    "PlantSession",
    "SteadyStatePlant",
    "new_session",
    "steady_state_response",
    "relative_batch_change",
    "is_settled",
    "export_batch_log",
]

RESET_FREE = "reset-free"
RESET_PER_BATCH = "reset-per-batch"


@dataclass(frozen=True)
class BatchRecord:
    """One experiment: batch index j, applied input u, measured output y."""

    j: int
    u: np.ndarray
    y: np.ndarray


class PlantSession:
    """Stateful experiment handle over a hidden system.

    Only ``apply_batch`` (and the batch length ``N``) is meant for consumers;
    the system matrices are private and never leak through the interface.
    A session has a single owner: do not call apply_batch concurrently on one
    session, though distinct sessions can run in parallel.

    ``noise`` may hold a callable ``noise(n_samples) -> array`` whose output
    is added to every measured batch; it is off by default and exploratory
    only.
    """

    def __init__(self, ss, N, mode, x0=None, noise=None):
        if not isinstance(ss, StateSpace):
            raise TypeError("PlantSession expects a StateSpace")
        N = int(N)
        if N < 1:
            raise ValueError(f"batch length must be at least 1, got {N}")
        if mode not in (RESET_FREE, RESET_PER_BATCH):
            raise ValueError(f"unknown mode {mode!r}")
        if x0 is None:
            x = np.zeros(ss.n)
        else:
            x = np.asarray(x0, dtype=float).reshape(-1).copy()
            if x.shape != (ss.n,):
                raise ValueError(f"initial state must have length {ss.n}, got {x.shape}")
        if mode == RESET_PER_BATCH and np.any(x != 0.0):
            raise ValueError("reset-per-batch sessions start every batch at rest; "
                             "a nonzero initial state is rejected")
        self._ss = ss
        self._x = x
        self._noise = noise
        self.N = N
        self.mode = mode
        self.batch_counter = 0

    def apply_batch(self, u):
        """Apply one length-N input batch and return the measured record."""
        u = np.asarray(u, dtype=float).reshape(-1)
        if u.shape[0] != self.N:
            raise ValueError(f"input batch must have length {self.N}, got {u.shape[0]}")
        if self.mode == RESET_PER_BATCH:
            y, _ = simulate(self._ss, np.zeros(self._ss.n), u)
        else:
            y, self._x = simulate(self._ss, self._x, u)
        if self._noise is not None:
            y = y + np.asarray(self._noise(self.N), dtype=float).reshape(-1)
        record = BatchRecord(j=self.batch_counter, u=u.copy(), y=y)
        self.batch_counter += 1
        return record


class SteadyStatePlant:
    """Idealized reset-free plant with no transients.

    Every batch returns the exact settled periodic response, as if the input
    had been held forever; useful for exercising estimator logic in isolation
    from transient effects. Exposes the same interface as a PlantSession.
    """

    def __init__(self, ss, N):
        self._M = periodic_response_matrix(lift(ss, int(N)))
        self.N = int(N)
        self.mode = RESET_FREE
        self.batch_counter = 0

    def apply_batch(self, u):
        u = np.asarray(u, dtype=float).reshape(-1)
        if u.shape[0] != self.N:
            raise ValueError(f"input batch must have length {self.N}, got {u.shape[0]}")
        record = BatchRecord(j=self.batch_counter, u=u.copy(), y=self._M @ u)
        self.batch_counter += 1
        return record


def new_session(ss, N, mode, x0=None, noise=None):
    """Open an experiment session on a simulated plant."""
    return PlantSession(ss, N, mode, x0=x0, noise=noise)


def steady_state_response(ss, N, u):
    """Settled periodic output for a period-N input held forever.

    Exact fixed-point value M u; the reset-free session approaches it
    geometrically when the same batch is applied over and over.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    N = int(N)
    if u.shape[0] != N:
        raise ValueError(f"input must have length {N}, got {u.shape[0]}")
    return periodic_response_matrix(lift(ss, N)) @ u


def relative_batch_change(y_prev, y_curr):
    """Relative change between consecutive batch outputs."""
    y_prev = np.asarray(y_prev, dtype=float)
    y_curr = np.asarray(y_curr, dtype=float)
    scale = float(np.linalg.norm(y_curr))
    diff = float(np.linalg.norm(y_curr - y_prev))
    if scale == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / scale


def is_settled(y_prev, y_curr, tol=1e-8):
    """Steady-state detector: consecutive outputs differ by less than tol."""
    return relative_batch_change(y_prev, y_curr) < tol


def export_batch_log(records, path):
    """Write batch records as CSV with one row per sample.

    Header line is ``j,k,u,y``: batch index, sample index within the batch,
    applied input sample, measured output sample.
    """
    lines = ["j,k,u,y"]
    for rec in records:
        for k in range(rec.u.shape[0]):
            lines.append(
                f"{rec.j},{k},{float(rec.u[k])!r},{float(rec.y[k])!r}"
            )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
