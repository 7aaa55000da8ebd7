"""Pairwise distances for Euclidean, circular and precomputed inputs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .exceptions import DistanceMatrixError, InvalidInputError

TWO_PI = 2.0 * math.pi
SYMMETRY_TOL = 1e-9

METRICS = ("euclidean", "circular")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Immutable symmetric matrix of pairwise distances.

    Construct through :func:`pairwise_distance_matrix` or
    :func:`validate_distance_matrix`; the stored array is read-only.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def scaled(self, factor: float) -> "DistanceMatrix":
        if not factor > 0:
            raise InvalidInputError("scale factor must be positive")
        return DistanceMatrix(self.values * factor)

    def submatrix(self, idx) -> "DistanceMatrix":
        idx = np.asarray(idx)
        return DistanceMatrix(self.values[np.ix_(idx, idx)])


def as_array(D) -> np.ndarray:
    """Return the underlying float array of a DistanceMatrix or raw square array."""
    if isinstance(D, DistanceMatrix):
        return D.values
    arr = np.asarray(D, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError("distance matrix must be square, got shape %s" % (arr.shape,))
    return arr


def _reduce_angle(a):
    return np.mod(a, TWO_PI)


def circular_distance(a: float, b: float) -> float:
    """Geodesic distance on the unit circle between two angles in radians.

    Both angles are reduced mod 2*pi first, so the result lies in [0, pi]
    for any finite input (including values in [0, 4*pi)).
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidInputError("angles must be finite")
    d = abs(float(_reduce_angle(a)) - float(_reduce_angle(b)))
    return min(d, TWO_PI - d)


def euclidean_distance(u, v) -> float:
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if u.shape != v.shape or u.ndim != 1:
        raise InvalidInputError("dimension mismatch: %s vs %s" % (u.shape, v.shape))
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise InvalidInputError("coordinates must be finite")
    return float(np.sqrt(np.sum((u - v) ** 2)))


def _circular_matrix(angles: np.ndarray) -> np.ndarray:
    r = _reduce_angle(angles)
    d = np.abs(r[:, None] - r[None, :])
    d = np.minimum(d, TWO_PI - d)
    # |a-b| is exactly symmetric, min() preserves it; pin the diagonal anyway
    np.fill_diagonal(d, 0.0)
    return d


def pairwise_distance_matrix(series, metric: str = "euclidean") -> DistanceMatrix:
    """Distance matrix of a series under the chosen metric.

    Parameters
    ----------
    series : array_like
        Shape ``(T,)`` or ``(T, d)`` for ``euclidean``; shape ``(T,)`` (or
        ``(T, 1)``) of angles in radians for ``circular``.
    metric : {"euclidean", "circular"}

    Returns
    -------
    DistanceMatrix
    """
    if metric not in METRICS:
        raise InvalidInputError("unknown metric %r (expected one of %s)" % (metric, METRICS))
    try:
        x = np.asarray(series, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError("series must be numeric and homogeneous: %s" % exc) from None
    if x.ndim == 0 or x.shape[0] == 0:
        raise InvalidInputError("series must be nonempty")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("series contains non-finite values")

    if metric == "circular":
        if x.ndim == 2 and x.shape[1] == 1:
            x = x[:, 0]
        if x.ndim != 1:
            raise InvalidInputError("circular metric expects a single angle per observation")
        return DistanceMatrix(_circular_matrix(x))

    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise InvalidInputError("series must be 1-D or 2-D")
    if x.shape[0] == 1:
        return DistanceMatrix(np.zeros((1, 1)))
    return DistanceMatrix(squareform(pdist(x, metric="euclidean")))


def validate_distance_matrix(raw, tol: float = SYMMETRY_TOL) -> DistanceMatrix:
    """Check a user-supplied matrix and return it as a DistanceMatrix.

    Entries that are asymmetric within ``tol`` are averaged. Every
    violation (non-finite, negative, nonzero diagonal, asymmetry beyond
    ``tol``) is collected and raised together in a DistanceMatrixError.
    """
    try:
        a = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError("matrix must be numeric: %s" % exc) from None
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInputError("matrix must be square and nonempty, got shape %s" % (a.shape,))

    violations = []
    n = a.shape[0]
    finite = np.isfinite(a)
    for i, j in zip(*np.nonzero(~finite)):
        violations.append({"kind": "non-finite", "i": int(i), "j": int(j), "value": str(a[i, j])})
    for i, j in zip(*np.nonzero(finite & (a < 0))):
        violations.append({"kind": "negative", "i": int(i), "j": int(j), "value": float(a[i, j])})
    for i in range(n):
        if finite[i, i] and a[i, i] != 0:
            violations.append({"kind": "nonzero-diagonal", "i": i, "j": i, "value": float(a[i, i])})
    both = finite & finite.T
    with np.errstate(invalid="ignore"):
        asym = both & (np.abs(a - a.T) > tol)
    for i, j in zip(*np.nonzero(np.triu(asym, k=1))):
        violations.append({"kind": "asymmetry", "i": int(i), "j": int(j), "value": float(a[i, j] - a[j, i])})

    if violations:
        raise DistanceMatrixError(violations)
    return DistanceMatrix(0.5 * (a + a.T))
