"""Seeded generators for the benchmark simulation designs.

Multivariate designs (ids ``4.1.*``) are 3-dimensional. Designs with change
points follow the block template X(n), Y(m), X(n); the circular designs
(``4.2.*``) concatenate blocks drawn from arc-union distributions P1..P5.
Dependent designs are generated as a single stream whose parameters switch
at the change points, so the innovations carry across boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InvalidInputError

DIM = 3
BURN_IN = 50

MU_CHOICES = (4.0, 6.0, 8.0)
SIGMA_CHOICES = (3.0, 5.0, 7.0)
CAUCHY_SIGMA_CHOICES = (9.0, 16.0, 25.0)
GARCH_CASES = (1, 2, 3)

# CCC-GARCH(1,1) baseline (X regime) and the Y-regime multipliers per case
GARCH_OMEGA = np.array([0.01, 0.01, 0.01])
GARCH_A = np.array([0.02, 0.03, 0.01])
GARCH_B = np.array([0.02, 0.02, 0.05])
GARCH_CASE_FACTORS = {1: (2.0, 4.0, 5.0), 2: (3.0, 5.0, 6.0), 3: (4.0, 6.0, 7.0)}

_PI = math.pi
# arc-union supports; every arc has length pi/3
CIRCULAR_ARCS = {
    "P1": ((-_PI / 6, _PI / 6), (11 * _PI / 6, 13 * _PI / 6)),
    "P2": ((_PI / 3, 2 * _PI / 3), (7 * _PI / 3, 8 * _PI / 3)),
    "P3": ((5 * _PI / 6, 7 * _PI / 6), (17 * _PI / 6, 19 * _PI / 6)),
    "P4": ((4 * _PI / 3, 5 * _PI / 3), (10 * _PI / 3, 11 * _PI / 3)),
    "P5": ((0.0, 4 * _PI),),
}


@dataclass(frozen=True)
class ExampleTemplate:
    id: str
    description: str
    metric: str
    n_changepoints: int
    param_name: Optional[str] = None
    param_choices: tuple = ()


@dataclass(frozen=True)
class ExampleSpec:
    id: str
    n: int = 40
    m: int = 40
    param: Optional[float] = None
    seed: int = 0


def _t(id, desc, ncp, pname=None, choices=(), metric="euclidean"):
    return ExampleTemplate(id, desc, metric, ncp, pname, tuple(choices))


_CATALOG = [
    _t("4.1.1", "iid N(0, I3); no change", 0),
    _t("4.1.2", "iid t3(0, I3); no change", 0),
    _t("4.1.3", "iid Cauchy(0, I3); no change", 0),
    _t("4.1.4", "MA(1) 0.5e_t + 0.5e_{t-1}, e ~ N(0, I3); no change", 0),
    _t("4.1.5", "MA(1) 0.5e_t + 0.5e_{t-1}, e ~ t3(0, I3); no change", 0),
    _t("4.1.6", "GARCH(1,1) per coordinate, e ~ N(0, I3); no change", 0),
    _t("4.1.7", "GARCH(1,1) per coordinate, e ~ t3(0, I3); no change", 0),
    _t("4.1.8", "MA(1) normal, mean shift mu in the middle block", 2, "mu", MU_CHOICES),
    _t("4.1.9", "MA(1) t3, mean shift mu in the middle block", 2, "mu", MU_CHOICES),
    _t("4.1.10", "iid Cauchy, mean shift mu in the middle block", 2, "mu", MU_CHOICES),
    _t("4.1.11", "MA(1) normal, scale sigma in the middle block", 2, "sigma", SIGMA_CHOICES),
    _t("4.1.12", "MA(1) t3, scale sigma in the middle block", 2, "sigma", SIGMA_CHOICES),
    _t("4.1.13", "iid Cauchy, scale sigma in the middle block", 2, "sigma", CAUCHY_SIGMA_CHOICES),
    _t("4.1.14", "CCC-GARCH(1,1) normal, parameter change in the middle block", 2, "case", GARCH_CASES),
    _t("4.1.15", "CCC-GARCH(1,1) t(3), parameter change in the middle block", 2, "case", GARCH_CASES),
    _t("4.2.1", "circular P5 throughout; no change", 0, metric="circular"),
    _t("4.2.2", "circular P1 | P3", 1, metric="circular"),
    _t("4.2.3", "circular P1 | P3 | P2", 2, metric="circular"),
    _t("4.2.4", "circular P1 | P3 | P2 | P4", 3, metric="circular"),
]
_BY_ID = {t.id: t for t in _CATALOG}


def list_examples():
    """Catalog of all simulation designs."""
    return list(_CATALOG)


def get_template(example_id: str) -> ExampleTemplate:
    try:
        return _BY_ID[example_id]
    except KeyError:
        raise InvalidInputError("unknown example id %r" % example_id) from None


def _innovations(rng, kind, size):
    if kind == "normal":
        return rng.standard_normal(size)
    if kind == "t3":
        return rng.standard_t(3, size)
    if kind == "cauchy":
        return rng.standard_cauchy(size)
    raise AssertionError(kind)


def _block_layout(n, m):
    T = 2 * n + m
    middle = np.zeros(T, dtype=bool)
    middle[n:n + m] = True
    return T, middle, [n, n + m]


def _ma1(rng, kind, T):
    e = _innovations(rng, kind, (T + 1, DIM))
    return 0.5 * e[1:] + 0.5 * e[:-1]


def _garch_diag(rng, kind, omega, a, b):
    """Per-coordinate GARCH(1,1) h_t = omega + a*X_{t-1}^2 + b*h_{t-1};
    ``omega``, ``a``, ``b`` are (T, DIM) regime arrays. Burn-in uses row 0."""
    T = omega.shape[0]
    e = _innovations(rng, kind, (BURN_IN + T, DIM))
    h = omega[0] / (1.0 - a[0] - b[0])
    x_prev = np.sqrt(h) * e[0]
    out = np.empty((T, DIM))
    for t in range(1, BURN_IN + T):
        k = max(0, t - BURN_IN)
        h = omega[k] + a[k] * x_prev ** 2 + b[k] * h
        x_prev = np.sqrt(h) * e[t]
        if t >= BURN_IN:
            out[t - BURN_IN] = x_prev
    return out


def _const(T, v):
    return np.broadcast_to(np.asarray(v, dtype=np.float64), (T, DIM)).copy()


def _sample_arcs(rng, name, size):
    arcs = CIRCULAR_ARCS[name]
    which = rng.integers(0, len(arcs), size=size)
    u = rng.random(size)
    lo = np.array([a[0] for a in arcs])[which]
    hi = np.array([a[1] for a in arcs])[which]
    return lo + u * (hi - lo)


def _param(spec: ExampleSpec, template: ExampleTemplate):
    if template.param_name is None:
        if spec.param is not None:
            raise InvalidInputError("example %s takes no parameter" % spec.id)
        return None
    if spec.param is None:
        return template.param_choices[0]
    if spec.param not in template.param_choices:
        raise InvalidInputError("%s=%r not in %s for example %s" % (
            template.param_name, spec.param, template.param_choices, spec.id))
    return spec.param


def gen_example(spec: ExampleSpec):
    """Generate one series and its true change points.

    Returns
    -------
    series : ndarray
        Shape ``(T, 3)`` for multivariate designs, ``(T,)`` angles for
        circular designs.
    truth : list of int
        Change points; ``c`` means observations ``1..c`` precede the change.
    """
    template = get_template(spec.id)
    if spec.n < 1 or spec.m < 1:
        raise InvalidInputError("n and m must be positive")
    param = _param(spec, template)
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m
    num = spec.id

    if num in ("4.1.1", "4.1.2", "4.1.3"):
        kind = {"4.1.1": "normal", "4.1.2": "t3", "4.1.3": "cauchy"}[num]
        return _innovations(rng, kind, (3 * n, DIM)), []
    if num in ("4.1.4", "4.1.5"):
        return _ma1(rng, "normal" if num == "4.1.4" else "t3", 3 * n), []
    if num in ("4.1.6", "4.1.7"):
        T = 3 * n
        x = _garch_diag(rng, "normal" if num == "4.1.6" else "t3",
                        _const(T, 0.02), _const(T, 0.05), _const(T, 0.02))
        return x, []

    if num.startswith("4.1."):
        T, middle, truth = _block_layout(n, m)
        if num in ("4.1.8", "4.1.9"):
            x = _ma1(rng, "normal" if num == "4.1.8" else "t3", T)
            x[middle] += param
        elif num == "4.1.10":
            x = _innovations(rng, "cauchy", (T, DIM))
            x[middle] += param
        elif num in ("4.1.11", "4.1.12"):
            e = _innovations(rng, "normal" if num == "4.1.11" else "t3", (T + 1, DIM))
            scale = np.where(middle, param, 1.0)[:, None]
            x = scale * (0.5 * e[1:] + 0.5 * e[:-1])
        elif num == "4.1.13":
            x = _innovations(rng, "cauchy", (T, DIM))
            x[middle] *= param
        else:
            fw, fa, fb = GARCH_CASE_FACTORS[int(param)]
            omega = _const(T, GARCH_OMEGA)
            a = _const(T, GARCH_A)
            b = _const(T, GARCH_B)
            omega[middle] *= fw
            a[middle] *= fa
            b[middle] *= fb
            x = _garch_diag(rng, "normal" if num == "4.1.14" else "t3", omega, a, b)
        return x, truth

    blocks = {
        "4.2.1": [("P5", 3 * n)],
        "4.2.2": [("P1", n), ("P3", m)],
        "4.2.3": [("P1", n), ("P3", m), ("P2", n)],
        "4.2.4": [("P1", n), ("P3", m), ("P2", n), ("P4", m)],
    }[num]
    parts = [_sample_arcs(rng, name, size) for name, size in blocks]
    truth = list(np.cumsum([size for _, size in blocks])[:-1].astype(int).tolist())
    return np.concatenate(parts), truth
