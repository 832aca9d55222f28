"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Eigenvalue bounds
=================
Eigenvalue shift certificates obtained from contours that stay free of eigenvalues, the least
singular value floor, a condition number guard and the outlier prediction for deformed Wigner
matrices.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy
:platform:      All
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict
from typing import Tuple

import numpy as np

from eigenshift.exceptions import InvalidSelection
from eigenshift.exceptions import SingularInput
from eigenshift.exceptions import UsageError
from eigenshift.skewness import select_neighborhood
from eigenshift.spectral_core import as_symmetric
from eigenshift.spectral_core import operator_norm

# Globals
log = logging.getLogger(__name__)

FLOOR_CONSTANT = 48.0
SLACK_FACTOR = 10.0


def _hypothesis(lhs, rhs, strict=False):
    holds = lhs < rhs if strict else lhs <= rhs
    return {"lhs": float(lhs), "rhs": float(rhs), "holds": bool(holds)}


@dataclass(frozen=True)
class ShiftCertificate:
    """
    Bound on ``lambda_p - lambda~_p`` (``lower``) or ``lambda~_1 - lambda_1`` (``upper``)
    """

    target: int
    direction: str
    delta_internal: float
    bound: float
    hypotheses: Dict[str, Dict[str, object]]
    valid: bool

    def failed(self):
        return [name for name, check in self.hypotheses.items() if not check["holds"]]

    def to_dict(self):
        return {
            "target": self.target,
            "direction": self.direction,
            "delta_internal": self.delta_internal,
            "bound": self.bound,
            "hypotheses": {k: dict(v) for k, v in self.hypotheses.items()},
            "valid": self.valid,
        }


@dataclass(frozen=True)
class SingularFloor:
    T: float
    indices: Tuple[int, ...]
    r_T: int
    x_T: float
    sigma_min: float
    E_norm: float
    lhs: float
    guaranteed: bool


@dataclass(frozen=True)
class ConditionGuard:
    kappa_ratio_bound: float
    valid: bool
    floor: SingularFloor
    sigma_max: float


@dataclass(frozen=True)
class OutlierPrediction:
    prediction: float
    correction_bound: float
    regime_ok: bool


def _certificate(target, direction, delta_internal, hypotheses):
    valid = all(check["holds"] for check in hypotheses.values())
    if not valid:
        failing = [name for name, check in hypotheses.items() if not check["holds"]]
        log.debug(f"{direction} shift certificate for index {target} fails {failing}")
    return ShiftCertificate(
        target=target,
        direction=direction,
        delta_internal=delta_internal,
        bound=delta_internal / 2.0,
        hypotheses=hypotheses,
        valid=valid,
    )


def lower_eigen_shift(spec, sk, p, lambda_bar, r=None):
    """
    Certificate ``lambda_p - lambda~_p <= max(6 r x, 72 r w^2 / lambda_bar)``

    spec
        signal spectrum

    sk
        :class:`~eigenshift.skewness.SkewnessReport` for ``S = {1..p}`` with radius
        ``lambda_bar`` (fields ``x``, ``y``, ``w``, ``E_norm``)

    p
        number of leading eigenvalues (1-based count)

    lambda_bar
        radius; the certificate requires ``lambda_bar >= 12 ||E||``

    r
        size of the neighbourhood, recomputed from ``spec`` when omitted
    """
    values = np.asarray(spec.eigenvalues)
    if not 1 <= p < spec.n:
        raise InvalidSelection(f"p={p} must lie in [1, {spec.n - 1}]")
    if r is None:
        r = select_neighborhood(spec, range(p), lambda_bar).r
    delta_p = float(values[p - 1] - values[p])
    delta_internal = max(12.0 * r * sk.x, 144.0 * r * sk.w**2 / lambda_bar)
    if delta_p > 0:
        series = 12.0 * (
            sk.E_norm / lambda_bar + math.sqrt(r) * sk.x / delta_p + math.sqrt(r) * sk.y / delta_p
        )
    else:
        series = math.inf
    hypotheses = {
        "lambda_bar >= 12||E||": _hypothesis(12.0 * sk.E_norm, lambda_bar),
        "delta_p >= delta_internal": _hypothesis(delta_internal, delta_p),
        "series < 1": _hypothesis(series, 1.0, strict=True),
    }
    return _certificate(p - 1, "lower", delta_internal, hypotheses)


def upper_eigen_shift(spec, sk, lambda_bar=None, form="general", r=None):
    """
    Certificate for ``lambda~_1 - lambda_1``

    form
        ``general``: ``max(6 r x, 72 r w^2 / lambda_bar)`` when ``lambda_bar >= 24 ||E||``.
        ``top``: ``lambda_bar = lambda_1 / 2`` and ``max(6 r x, 72 r ||E||^2 / lambda_1)`` when
        ``lambda_1 >= 48 ||E||``.

    ``sk`` must be computed for ``S = {1}`` with the same radius.
    """
    values = np.asarray(spec.eigenvalues)
    lambda_1 = float(values[0])
    if form == "top":
        lambda_bar = lambda_1 / 2.0
    elif form != "general":
        raise UsageError(f"unknown form {form!r}")
    if lambda_bar is None or not lambda_bar > 0:
        raise UsageError(f"lambda_bar must be positive, got {lambda_bar!r}")
    if r is None:
        r = select_neighborhood(spec, (0,), lambda_bar).r
    if form == "top":
        delta_internal = max(12.0 * r * sk.x, 144.0 * r * sk.E_norm**2 / lambda_1)
        hypotheses = {"lambda_1 >= 48||E||": _hypothesis(48.0 * sk.E_norm, lambda_1)}
    else:
        delta_internal = max(12.0 * r * sk.x, 144.0 * r * sk.w**2 / lambda_bar)
        hypotheses = {"lambda_bar >= 24||E||": _hypothesis(24.0 * sk.E_norm, lambda_bar)}
    return _certificate(0, "upper", delta_internal, hypotheses)


def augment_with_zero(M):
    """
    Append an all-zero row and column; nonzero singular values are unchanged
    """
    arr = np.asarray(M, dtype=float)
    return np.pad(arr, ((0, 1), (0, 1)))


def least_singular_floor(spec, E, T):
    """
    Check ``48 (||E|| / T + r(T) x(T) / sigma_min + r(T) ||E||^2 / (T sigma_min)) < 1``, which
    guarantees ``sigma~_min >= sigma_min / 2``.

    ``Lambda(T)`` holds the eigenvalues with ``|lambda| <= T`` and ``x(T)`` is the largest
    ``|u_i^T E u_j|`` over their eigenvectors.
    """
    sym = as_symmetric(E)
    values = np.asarray(spec.eigenvalues)
    sigma_min = float(np.min(np.abs(values)))
    if sigma_min == 0.0:
        log.error("Least singular value floor requested for a singular matrix")
        raise SingularInput("sigma_min = 0")
    if not T > 0:
        raise UsageError(f"T must be positive, got {T!r}")
    indices = tuple(int(i) for i in np.flatnonzero(np.abs(values) <= T))
    r_T = len(indices)
    if r_T:
        U_T = spec.vectors(indices)
        x_T = float(np.max(np.abs(U_T.T @ sym @ U_T)))
    else:
        x_T = 0.0
    E_norm = operator_norm(sym)
    lhs = FLOOR_CONSTANT * (
        E_norm / T + r_T * x_T / sigma_min + r_T * E_norm**2 / (T * sigma_min)
    )
    return SingularFloor(
        T=float(T),
        indices=indices,
        r_T=r_T,
        x_T=x_T,
        sigma_min=sigma_min,
        E_norm=E_norm,
        lhs=lhs,
        guaranteed=lhs < 1.0,
    )


def condition_guard(spec, E, T):
    """
    Bound on ``kappa(A + E) / kappa(A)``.

    Uses ``sigma~_max <= sigma_max + ||E||`` and
    ``sigma~_min >= max(sigma_min / 2, sigma_min - ||E||)``. Valid when the floor is guaranteed
    and ``sigma_max >= 10 ||E||``.
    """
    floor = least_singular_floor(spec, E, T)
    sigma_max = float(np.max(np.abs(np.asarray(spec.eigenvalues))))
    lower = max(floor.sigma_min / 2.0, floor.sigma_min - floor.E_norm)
    ratio = (1.0 + floor.E_norm / sigma_max) * floor.sigma_min / lower
    valid = floor.guaranteed and sigma_max >= SLACK_FACTOR * floor.E_norm
    return ConditionGuard(kappa_ratio_bound=ratio, valid=valid, floor=floor, sigma_max=sigma_max)


def dw_outlier(lambda_i, n, x, E_norm=None):
    """
    Deformed Wigner outlier: ``lambda~_i - lambda_i`` is predicted as ``n / lambda_i`` with a
    correction of order ``n / lambda_i + x``.

    The regime holds when ``lambda_i >= 48 sqrt(n)``, or ``lambda_i >= 24 ||E||`` when
    ``E_norm`` is given.
    """
    if not lambda_i > 0:
        raise UsageError(f"lambda_i must be positive, got {lambda_i!r}")
    prediction = n / lambda_i
    if E_norm is None:
        regime_ok = lambda_i >= 48.0 * math.sqrt(n)
    else:
        regime_ok = lambda_i >= 24.0 * E_norm
    return OutlierPrediction(
        prediction=prediction, correction_bound=prediction + x, regime_ok=regime_ok
    )
