"""Finite discrete-time Markov chain mathematics.

Row-stochastic matrices, regularity, integer and real matrix powers,
stationary and limiting matrices, the fundamental matrix, mean first
passage times, and state-probability propagation.

All types are immutable after construction and every operation is a pure
function of its inputs, so values can be shared freely across threads.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import (
    DimensionMismatch,
    IllConditioned,
    NegativeEntry,
    NotRegular,
    NotSquare,
    RowSumOutOfTolerance,
    SingularSystem,
    ZeroStationaryEntry,
)

__all__ = [
    "StochasticMatrix",
    "ProbabilityVector",
    "PassageMatrix",
    "validate_stochastic",
    "probability_vector",
    "unit_vector",
    "is_regular",
    "matrix_power",
    "matrix_power_real",
    "stationary_distribution",
    "limiting_matrix",
    "fundamental_matrix",
    "mean_first_passage",
    "propagate",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """n x n row-stochastic matrix; every row sums to exactly 1."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Length-n nonnegative vector summing to exactly 1."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class PassageMatrix:
    """Mean first passage times in chain steps; the diagonal is exactly 0."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def validate_stochastic(raw, tolerance: float = DEFAULT_TOLERANCES.row_sum) -> StochasticMatrix:
    """Check a raw matrix and return it with rows renormalized to sum exactly 1.

    Raises
    ------
    NotSquare
        If the input is not a square 2-d matrix with n >= 1.
    NegativeEntry
        At the first strictly negative entry.
    RowSumOutOfTolerance
        If some row sum deviates from 1 by more than ``tolerance``.
    """
    a = np.asarray(raw, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    neg = np.argwhere(a < 0.0)
    if neg.size:
        i, j = neg[0]
        raise NegativeEntry(int(i), int(j), float(a[i, j]))
    sums = a.sum(axis=1)
    bad = np.argwhere(np.abs(sums - 1.0) > tolerance)
    if bad.size:
        i = int(bad[0][0])
        raise RowSumOutOfTolerance(i, float(sums[i]))
    return StochasticMatrix(a / sums[:, None])


def probability_vector(raw, tolerance: float = DEFAULT_TOLERANCES.distribution) -> ProbabilityVector:
    """Validate a raw vector and renormalize it to sum exactly 1."""
    v = np.asarray(raw, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {v.shape}")
    neg = np.argwhere(v < -tolerance)
    if neg.size:
        i = int(neg[0][0])
        raise NegativeEntry(i, 0, float(v[i]))
    v = np.clip(v, 0.0, None)
    total = v.sum()
    if abs(total - 1.0) > tolerance:
        raise RowSumOutOfTolerance(0, float(total))
    return ProbabilityVector(v / total)


def unit_vector(n: int, state: int) -> ProbabilityVector:
    """Probability vector concentrated on one 0-based state index."""
    if not 0 <= state < n:
        raise DimensionMismatch(f"state {state} outside 0..{n - 1}")
    v = np.zeros(n)
    v[state] = 1.0
    return ProbabilityVector(v)


def is_regular(P: StochasticMatrix, max_power: int | None = None) -> bool:
    """True iff some power P^k, k <= max_power, has all entries > 0.

    Positivity patterns are tracked with boolean reachability products,
    which are exact for nonnegative matrices.  ``max_power`` defaults to
    n**2, enough to establish primitivity for the small chains used here.
    """
    n = P.n
    if max_power is None:
        max_power = n * n
    base = (P.entries > 0.0).astype(np.uint8)
    acc = base.copy()
    for _ in range(max_power):
        if acc.all():
            return True
        acc = ((acc @ base) > 0).astype(np.uint8)
    return False


def matrix_power(P: StochasticMatrix, k: int) -> StochasticMatrix:
    """P^k by repeated multiplication; the result is row-stochastic."""
    if k < 0 or k != int(k):
        raise ValueError(f"power must be a nonnegative integer, got {k!r}")
    result = np.eye(P.n)
    for _ in range(int(k)):
        result = result @ P.entries
    return validate_stochastic(result)


def _eig_power(P: StochasticMatrix, t: float) -> StochasticMatrix:
    """P^t through eigendecomposition with principal powers of eigenvalues.

    Rows of the reconstructed matrix are clipped to [0, 1] and renormalized.
    Raises IllConditioned when the decomposition cannot be trusted.
    """
    try:
        evals, vecs = np.linalg.eig(P.entries)
        powered = vecs @ np.diag(evals.astype(complex) ** t) @ np.linalg.inv(vecs)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(str(exc)) from exc
    real = np.real(powered)
    if not np.all(np.isfinite(real)):
        raise IllConditioned("non-finite entries in reconstructed power")
    sums = real.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > 1e-6):
        raise IllConditioned(f"row sums drifted to {sums} after reconstruction")
    real = np.clip(real, 0.0, 1.0)
    totals = real.sum(axis=1)
    if np.any(totals <= 0.0):
        raise IllConditioned("a row vanished after clipping")
    return StochasticMatrix(real / totals[:, None])


def matrix_power_real(
    P: StochasticMatrix,
    t: float,
    tolerance: float = DEFAULT_TOLERANCES.integral_time,
) -> StochasticMatrix:
    """P^t for real t >= 0; equals matrix_power(P, t) when t is integral.

    Raises IllConditioned when the eigendecomposition fails; callers fall
    back to ``matrix_power(P, round(t))`` (see :func:`propagate`).
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    nearest = round(t)
    if abs(t - nearest) <= tolerance:
        return matrix_power(P, nearest)
    return _eig_power(P, t)


def stationary_distribution(P: StochasticMatrix) -> ProbabilityVector:
    """The vector w with wP = w, strictly positive entries, sum 1.

    Solved directly as a linear system (transpose minus identity with a
    normalization row), not by iteration.  Requires a regular chain.
    """
    if not is_regular(P):
        raise NotRegular("chain has no entrywise-positive power within n^2 steps")
    n = P.n
    A = P.entries.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        w = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    return probability_vector(w)


def limiting_matrix(P: StochasticMatrix) -> np.ndarray:
    """The matrix W whose every row is the stationary distribution of P."""
    w = stationary_distribution(P)
    return np.tile(w.entries, (P.n, 1))


def fundamental_matrix(P: StochasticMatrix, W: np.ndarray) -> np.ndarray:
    """Z = (I - P + W)^-1 for a regular chain with limiting matrix W."""
    W = np.asarray(W, dtype=float)
    if W.shape != P.entries.shape:
        raise DimensionMismatch(f"W has shape {W.shape}, expected {P.entries.shape}")
    try:
        return np.linalg.inv(np.eye(P.n) - P.entries + W)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc


def mean_first_passage(Z: np.ndarray, w: ProbabilityVector) -> PassageMatrix:
    """Mean first passage times m_ij = (Z_jj - Z_ij) / w_j, in chain steps.

    The diagonal is exactly zero (the i = j case of the defining formula).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1] or Z.shape[0] != w.n:
        raise DimensionMismatch(f"Z shape {Z.shape} does not match w length {w.n}")
    if np.any(w.entries <= 0.0):
        raise ZeroStationaryEntry("stationary vector has a nonpositive entry")
    M = (np.diag(Z)[None, :] - Z) / w.entries[None, :]
    np.fill_diagonal(M, 0.0)
    return PassageMatrix(M)


def propagate(pi0: ProbabilityVector, P: StochasticMatrix, t: float) -> ProbabilityVector:
    """State probabilities after time t: pi0 . P^t.

    Integral t uses the exact integer power.  Fractional t uses the
    eigendecomposition power; if that is ill-conditioned the exponent is
    rounded half-up and a warning is emitted, since the result is then
    only approximate.
    """
    if pi0.n != P.n:
        raise DimensionMismatch(f"vector length {pi0.n} does not match matrix size {P.n}")
    try:
        Pt = matrix_power_real(P, t)
    except IllConditioned:
        rounded = int(np.floor(t + 0.5))
        warnings.warn(
            f"eigendecomposition failed for t={t}; using integer power {rounded} (approximate)",
            RuntimeWarning,
            stacklevel=2,
        )
        Pt = matrix_power(P, rounded)
    return probability_vector(pi0.entries @ Pt.entries)
