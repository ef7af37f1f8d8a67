"""Data-driven power iterations for worst-case gain estimation.

The reset-free iteration drives a continuously operated plant with a periodic
input, holds each input long enough for the response to settle, then reverses
the measured output in time, adds a shifted copy of the input and renormalizes
to input power one. That realizes a shifted power iteration on the symmetric
row-reversed periodic response matrix, whose dominant eigenvalue is the peak
gain over the batch frequency grid. The reset-based baseline re-applies the
time-reversed output directly, one from-rest experiment per iteration.

The gain readout ``beta`` is the Rayleigh quotient of the time-reversed
response, u . reverse(y) / N, with the input normalized to power one. At the
converged input this equals the dominant eigenvalue exactly; the shift steers
the iteration but never enters the readout, since the measured output contains
no shift contribution.
"""

import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from .plant import RESET_FREE, RESET_PER_BATCH, is_settled
from .spectral import time_reverse

__all__ = [
    "PowerIterationConfig",
    "EstimateTrace",
    "EstimationError",
    "init_input",
    "iterate_reset_free",
    "iterate_reset_based",
    "select_shift",
    "write_trace_csv",
    "write_update_snapshots",
]


class EstimationError(RuntimeError):
    """Raised when an iteration cannot proceed (degenerate update vector)."""


@dataclass
class PowerIterationConfig:
    """Knobs of the power iterations.

    n is the batch length; n_update the number of batches each input is held
    (reset-free only); shift the scalar added to the reversed response before
    renormalizing, None to probe the plant for a scale; convergence is
    declared when the gain readout moves less than convergence_tol between
    consecutive updates.
    """

    n: int
    n_update: int = 1
    shift: float | None = None
    max_updates: int = 1000
    convergence_tol: float = 1e-8
    rng_seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"batch length must be at least 1, got {self.n}")
        if self.n_update < 1:
            raise ValueError(f"n_update must be at least 1, got {self.n_update}")
        if self.shift is not None and self.shift == 0.0:
            raise ValueError("shift must be nonzero (or None to auto-select)")
        if self.max_updates < 1:
            raise ValueError(f"max_updates must be at least 1, got {self.max_updates}")
        if self.convergence_tol <= 0.0:
            raise ValueError("convergence_tol must be positive")


@dataclass
class EstimateTrace:
    """Everything an iteration run produced.

    ``rows`` has one entry per applied batch: (update_index, batch_index, mu,
    beta), where mu = ||y|| / sqrt(N) and beta = u . reverse(y) / N. The
    ``*_updates`` lists snapshot each update step: the input that was held,
    the last output measured under it, and the readouts at that point.
    """

    shift: float | None = None
    rows: list = field(default_factory=list)
    update_batch_indices: list = field(default_factory=list)
    u_updates: list = field(default_factory=list)
    y_updates: list = field(default_factory=list)
    mu_updates: list = field(default_factory=list)
    beta_updates: list = field(default_factory=list)
    converged: bool = False
    zero_output: bool = False

    @property
    def estimate(self):
        """Final gain estimate (0.0 when the plant returned a zero batch)."""
        if self.zero_output:
            return 0.0
        if not self.beta_updates:
            raise ValueError("empty trace has no estimate")
        return self.beta_updates[-1]


def init_input(n, rng_seed):
    """Seeded random start vector scaled to input power one (||u||^2 = n)."""
    n = int(n)
    if n < 1:
        raise ValueError(f"batch length must be at least 1, got {n}")
    rng = np.random.default_rng(rng_seed)
    u = rng.standard_normal(n)
    return u * (np.sqrt(n) / np.linalg.norm(u))


def _readouts(u, y, n):
    mu = float(np.linalg.norm(y) / np.sqrt(n))
    beta = float(u @ time_reverse(y) / n)
    return mu, beta


def iterate_reset_free(plant, config):
    """Shifted power iteration on a continuously operated plant.

    Holds the current input for ``config.n_update`` batches, measures the last
    batch, forms z = reverse(y) + shift * u and renormalizes z to input power
    one. With a positive shift of roughly the plant's peak gain the iterate
    settles on the positive dominant eigendirection instead of flipping sign
    every step. Stops when beta moves less than the tolerance between
    updates, or flags the trace as non-converged at max_updates.
    """
    n = plant.N
    if config.n != n:
        raise ValueError(f"config batch length {config.n} != plant batch length {n}")
    if getattr(plant, "mode", RESET_FREE) != RESET_FREE:
        raise ValueError("iterate_reset_free needs a reset-free plant")
    shift = config.shift
    if shift is None:
        shift = select_shift(plant, n, config.rng_seed)
    if shift == 0.0:
        raise ValueError("shift must be nonzero")

    trace = EstimateTrace(shift=float(shift))
    u = init_input(n, config.rng_seed)
    sqrt_n = np.sqrt(n)
    beta_prev = None
    for update in range(1, config.max_updates + 1):
        record = None
        for _ in range(config.n_update):
            record = plant.apply_batch(u)
            mu, beta = _readouts(u, record.y, n)
            trace.rows.append((update, record.j, mu, beta))
        trace.update_batch_indices.append(record.j)
        trace.u_updates.append(u.copy())
        trace.y_updates.append(record.y.copy())
        trace.mu_updates.append(mu)
        trace.beta_updates.append(beta)
        if beta_prev is not None and abs(beta - beta_prev) < config.convergence_tol:
            trace.converged = True
            break
        beta_prev = beta
        z = time_reverse(record.y) + shift * u
        z_norm = float(np.linalg.norm(z))
        if z_norm == 0.0:
            raise EstimationError(
                "update vector vanished: the reversed response exactly cancels "
                "the shifted input; retry with a different shift or seed"
            )
        u = z * (sqrt_n / z_norm)
    return trace


def iterate_reset_based(plant, config):
    """Baseline power iteration with a full reset before every batch.

    The time-reversed output is renormalized and re-applied as the next
    input; no shift and no hold. Only the single-batch response matrix is
    visible to this scheme, so a plant with more dead time than the batch
    length yields zero output: the run then terminates immediately with
    estimate 0 and the zero_output flag set.
    """
    n = plant.N
    if config.n != n:
        raise ValueError(f"config batch length {config.n} != plant batch length {n}")
    if getattr(plant, "mode", None) != RESET_PER_BATCH:
        raise ValueError("iterate_reset_based needs a reset-per-batch plant")

    trace = EstimateTrace(shift=None)
    u = init_input(n, config.rng_seed)
    sqrt_n = np.sqrt(n)
    beta_prev = None
    for update in range(1, config.max_updates + 1):
        record = plant.apply_batch(u)
        y_norm = float(np.linalg.norm(record.y))
        if y_norm == 0.0:
            trace.rows.append((update, record.j, 0.0, 0.0))
            trace.update_batch_indices.append(record.j)
            trace.u_updates.append(u.copy())
            trace.y_updates.append(record.y.copy())
            trace.mu_updates.append(0.0)
            trace.beta_updates.append(0.0)
            trace.zero_output = True
            trace.converged = True
            break
        mu, beta = _readouts(u, record.y, n)
        trace.rows.append((update, record.j, mu, beta))
        trace.update_batch_indices.append(record.j)
        trace.u_updates.append(u.copy())
        trace.y_updates.append(record.y.copy())
        trace.mu_updates.append(mu)
        trace.beta_updates.append(beta)
        if beta_prev is not None and abs(beta - beta_prev) < config.convergence_tol:
            trace.converged = True
            break
        beta_prev = beta
        u = time_reverse(record.y) * (sqrt_n / y_norm)
    return trace


def select_shift(plant, n, rng_seed=0, settle_tol=1e-8, max_probe_batches=10000):
    """Probe the plant once to pick a shift of the right order of magnitude.

    Applies a random unit-power batch (held until settled on a reset-free
    plant) and returns the observed gain ||y|| / ||u||, floored at 1e-6. A
    zero probe output falls back to 1.0 with a warning.
    """
    n = int(n)
    u = init_input(n, rng_seed)
    record = plant.apply_batch(u)
    if getattr(plant, "mode", RESET_FREE) == RESET_FREE:
        prev = record.y
        for _ in range(max_probe_batches):
            record = plant.apply_batch(u)
            if is_settled(prev, record.y, settle_tol):
                break
            prev = record.y
    gain = float(np.linalg.norm(record.y) / np.linalg.norm(u))
    if gain == 0.0:
        warnings.warn("probe batch produced zero output; falling back to shift 1.0")
        return 1.0
    return max(gain, 1e-6)


def write_trace_csv(trace, path):
    """Write the per-batch trace as CSV with header updateIndex,batchIndex,mu,beta."""
    lines = ["updateIndex,batchIndex,mu,beta"]
    for update_index, batch_index, mu, beta in trace.rows:
        lines.append(f"{update_index},{batch_index},{float(mu)!r},{float(beta)!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_update_snapshots(trace, outdir, updates=None):
    """Write u and y snapshots for selected updates as k,value CSV files.

    Defaults to the initial input, the first post-update input and the final
    one (deduplicated for short runs). Returns the written file names.
    """
    count = len(trace.u_updates)
    if count == 0:
        return []
    if updates is None:
        updates = sorted({1, min(2, count), count})
    written = []
    for upd in updates:
        if not 1 <= upd <= count:
            raise ValueError(f"no update {upd} in a trace of {count} updates")
        for tag, series in (("u", trace.u_updates), ("y", trace.y_updates)):
            name = f"{tag}_update_{upd:05d}.csv"
            lines = ["k,value"]
            vec = series[upd - 1]
            for k in range(vec.shape[0]):
                lines.append(f"{k},{float(vec[k])!r}")
            with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="\n") as fh:
                fh.write("\n".join(lines) + "\n")
            written.append(name)
    return written
