"""Exact population ball divergence and detection function for
finite-support distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .metric import as_array, pairwise_distance_matrix

WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finite-support distribution: ``atoms`` (one observation per row, or
    angles) with matching nonnegative ``weights`` summing to 1."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if atoms.shape[0] != w.size:
            raise InvalidInputError("atoms and weights differ in length")
        _check_weights(w)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", w)


def _check_weights(w):
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidInputError("weights must be finite and nonnegative")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise InvalidInputError("weights sum to %r, expected 1" % float(w.sum()))


def common_support(mu: DiscreteDistribution, nu: DiscreteDistribution, metric: str = "euclidean"):
    """Express both distributions on the union of their atoms.

    Returns ``(w_mu, w_nu, D)`` where ``D`` is the distance matrix of the
    union (atoms of ``mu`` first, then unseen atoms of ``nu``).
    """
    pooled = np.concatenate([mu.atoms, nu.atoms], axis=0)
    D = pairwise_distance_matrix(pooled, metric).values
    k = mu.atoms.shape[0]
    if np.any(D[:k, :k][~np.eye(k, dtype=bool)] == 0):
        raise InvalidInputError("atoms of mu are not distinct under the metric")
    kn = nu.atoms.shape[0]
    if np.any(D[k:, k:][~np.eye(kn, dtype=bool)] == 0):
        raise InvalidInputError("atoms of nu are not distinct under the metric")

    keep = list(range(k))
    w_nu = [0.0] * k
    for r in range(kn):
        same = np.nonzero(D[k + r, :k] == 0)[0]
        if same.size:
            w_nu[int(same[0])] = nu.weights[r]
        else:
            keep.append(k + r)
            w_nu.append(nu.weights[r])
    w_mu = np.concatenate([mu.weights, np.zeros(len(keep) - k)])
    return w_mu, np.asarray(w_nu), D[np.ix_(keep, keep)]


def _resolve(mu, nu, D, metric):
    if isinstance(mu, DiscreteDistribution) or isinstance(nu, DiscreteDistribution):
        if D is not None:
            raise InvalidInputError("pass either distributions or weight vectors with D, not both")
        return common_support(mu, nu, metric)
    if D is None:
        raise InvalidInputError("weight vectors need a distance matrix over their support")
    w_mu = np.asarray(mu, dtype=np.float64).ravel()
    w_nu = np.asarray(nu, dtype=np.float64).ravel()
    arr = as_array(D)
    if not (w_mu.size == w_nu.size == arr.shape[0]):
        raise InvalidInputError("weights and distance matrix disagree in size")
    _check_weights(w_mu)
    _check_weights(w_nu)
    return w_mu, w_nu, arr


def h_factor(alpha: float, beta: float) -> float:
    """``alpha/beta`` if ``beta >= alpha`` else ``(1-alpha)/(1-beta)``."""
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise InvalidInputError("alpha and beta must lie strictly inside (0, 1)")
    if beta >= alpha:
        return alpha / beta
    return (1 - alpha) / (1 - beta)


def pop_ball_divergence(mu, nu, alpha: float, D=None, metric: str = "euclidean") -> float:
    """Ball divergence with mixture weight ``alpha``, evaluated exactly.

    ``mu`` and ``nu`` are either :class:`DiscreteDistribution` objects (the
    common support and its distances are then built with ``metric``) or
    weight vectors over the points of a supplied distance matrix ``D``.
    Centers and radius endpoints range over the support weighted by
    ``alpha*mu + (1-alpha)*nu``; each closed ball is charged the squared
    mass difference ``(mu(B) - nu(B))**2``.
    """
    if not 0 <= alpha <= 1:
        raise InvalidInputError("alpha must lie in [0, 1]")
    w_mu, w_nu, arr = _resolve(mu, nu, D, metric)
    omega = alpha * w_mu + (1 - alpha) * w_nu
    # inside[u, v, x]: x in closed ball around u with radius D[u, v]
    inside = arr[:, None, :] <= arr[:, :, None]
    diff = inside.astype(np.float64) @ (w_mu - w_nu)
    return float(omega @ (diff ** 2) @ omega)


def pop_detection_function(beta: float, alpha: float, mu, nu, D=None, metric: str = "euclidean") -> float:
    """``beta*(1-beta)*h_factor(alpha, beta)**2 * D_alpha(mu, nu)`` for a
    single change at fraction ``alpha`` from ``mu`` to ``nu``."""
    h = h_factor(alpha, beta)
    return beta * (1 - beta) * h * h * pop_ball_divergence(mu, nu, alpha, D, metric)
