"""Batch lifting of a sample-wise system and its periodic batch response.

Processing length-N input/output blocks turns the state recursion into a
batch recursion x_{j+1} = F x_j + G u_j, y_j = H x_j + J u_j. Holding a
periodic input drives the state to a fixed point, and the resulting map from
one input period to the settled output period is the circulant matrix
M = H (I - F)^-1 G + J whose coefficients this module computes in closed
form.
"""

from dataclasses import dataclass

import numpy as np

from .lti import StateSpace, spectral_radius

__all__ = [
    "LiftedBatchSystem",
    "CirculantSpec",
    "lift",
    "periodic_response_matrix",
    "circulant_coefficients",
]

# smallest tolerated singular value of (I - F); below this the state matrix
# is effectively marginally stable and the fixed point is numerically
# meaningless (I - F has unit natural scale, so the bound is absolute)
_MIN_RESOLVENT_SV = 1e-12


@dataclass(frozen=True)
class LiftedBatchSystem:
    """Batch form (F, G, H, J) over blocks of N samples.

    F = A^N, G stacks A^(N-1)B ... B column-wise, H stacks C, CA, ...,
    CA^(N-1) row-wise, and J is the lower-triangular Toeplitz matrix of
    impulse-response coefficients D, CB, CAB, ...
    """

    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    J: np.ndarray
    N: int


@dataclass(frozen=True)
class CirculantSpec:
    """First row of the periodic batch response matrix as length-N vector a."""

    a: np.ndarray
    N: int


def lift(ss, N):
    """Build the batch representation of a StateSpace over blocks of N samples."""
    if not isinstance(ss, StateSpace):
        raise TypeError("lift expects a StateSpace")
    N = int(N)
    if N < 1:
        raise ValueError(f"batch length must be at least 1, got {N}")
    n = ss.n
    A, B, C, D = ss.A, ss.B, ss.C, ss.D
    F = np.linalg.matrix_power(A, N)  # binary exponentiation, O(log N) products
    G = np.empty((n, N))
    col = B.copy()
    for k in range(N - 1, -1, -1):
        G[:, k] = col
        col = A @ col
    H = np.empty((N, n))
    row = C.copy()
    for k in range(N):
        H[k, :] = row
        row = row @ A
    markov = np.empty(N)
    markov[0] = D
    v = B.copy()
    for k in range(1, N):
        markov[k] = C @ v
        v = A @ v
    idx = np.arange(N)
    lag = idx[:, None] - idx[None, :]
    J = np.where(lag >= 0, markov[np.clip(lag, 0, N - 1)], 0.0)
    return LiftedBatchSystem(F=F, G=G, H=H, J=J, N=N)


def _solve_fixed_point(F, rhs, what):
    eye = np.eye(F.shape[0])
    resolvent = eye - F
    if F.shape[0]:
        smallest_sv = float(np.linalg.svd(resolvent, compute_uv=False)[-1])
        if smallest_sv < _MIN_RESOLVENT_SV:
            raise RuntimeError(
                f"{what}: I - F is nearly singular; the state matrix is too "
                "close to marginal stability for a meaningful steady state"
            )
    return np.linalg.solve(resolvent, rhs)


def periodic_response_matrix(lb):
    """Map from one input period to the settled output period.

    Returns M = H (I - F)^-1 G + J via a factorized solve; the inverse is
    never formed explicitly.
    """
    if not isinstance(lb, LiftedBatchSystem):
        raise TypeError("periodic_response_matrix expects a LiftedBatchSystem")
    X = _solve_fixed_point(lb.F, lb.G, "periodic_response_matrix")
    return lb.H @ X + lb.J


def circulant_coefficients(ss, N):
    """Closed-form first-row coefficients of the periodic batch response.

    a_0 = D + C A^(N-1) (I - A^N)^-1 B and
    a_k = C A^(N-k-1) (I - A^N)^-1 B for k = 1..N-1. The circulant built from
    these coefficients equals periodic_response_matrix(lift(ss, N)) entry for
    entry, which the test suite checks across random systems.
    """
    if not isinstance(ss, StateSpace):
        raise TypeError("circulant_coefficients expects a StateSpace")
    N = int(N)
    if N < 1:
        raise ValueError(f"batch length must be at least 1, got {N}")
    if ss.n and spectral_radius(ss.A) >= 1.0:
        raise ValueError("circulant_coefficients needs a strictly stable system")
    AN = np.linalg.matrix_power(ss.A, N)
    w = _solve_fixed_point(AN, ss.B, "circulant_coefficients")
    a = np.empty(N)
    v = w.copy()
    for k in range(N - 1, 0, -1):
        a[k] = ss.C @ v
        v = ss.A @ v
    a[0] = ss.D + ss.C @ v
    return CirculantSpec(a=a, N=N)
