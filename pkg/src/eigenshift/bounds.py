"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Bound engine
============
Assumption checks and the eigenspace perturbation bounds: classical (Weyl, Davis-Kahan),
skewness-based (leading, singular and general selections, the ``y`` variants and the rectangular
version), comparator bounds from the literature, bounds for random noise and for the spiked
covariance model, and the spiked limit laws.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy, scipy
:platform:      All

Every evaluator returns a :class:`BoundReport`. Bounds are reported even when their assumption
fails; ``valid`` tells whether the statement applies.
"""
import logging
import math
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from typing import Dict
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from eigenshift.exceptions import DegenerateGap
from eigenshift.exceptions import IncompleteInput
from eigenshift.exceptions import InvalidSelection
from eigenshift.exceptions import NegativeSpike
from eigenshift.exceptions import PreconditionFailed
from eigenshift.exceptions import SubcriticalSpike
from eigenshift.exceptions import UsageError
from eigenshift.spectral_core import as_symmetric
from eigenshift.spectral_core import operator_norm

# Globals
log = logging.getLogger(__name__)

THRESHOLD = 1.0 / 12.0
THRESHOLD_SLACK = 1e-15

# required inputs per assumption kind
_ASSUMPTION_FIELDS = {
    "C0": ("p", "r", "E_norm", "lambda_bar", "delta_S", "x", "w"),
    "D0": ("p", "r", "E_norm", "lambda_bar", "delta", "x", "w"),
    "C1": ("p", "r", "E_norm", "sigma_bar", "delta_S", "x", "w"),
    "D1": ("p", "r", "E_norm", "sigma_bar", "delta", "x", "w"),
    "C2": ("p", "r", "eps1", "eps2", "eta", "t1"),
    "C3": ("p", "r", "E_norm", "upper_gap", "lambda_1", "delta_paren", "n_samples"),
    "C3'": ("p", "r", "E_norm", "upper_gap", "lambda_1", "delta_p", "n_samples"),
}


@dataclass(frozen=True)
class AssumptionVerdict:
    kind: str
    terms: Dict[str, float]
    max_ratio: float
    holds: bool

    def to_dict(self):
        return {
            "kind": self.kind,
            "terms": dict(self.terms),
            "max_ratio": self.max_ratio,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class BoundReport:
    """
    A bound value with its per-term breakdown.

    For sum-of-terms bounds ``value == sum(terms.values())``. ``extra`` carries side information
    such as success probabilities, hypothesis checks or flags.
    """

    method: str
    value: float
    terms: Dict[str, float]
    assumption: Optional[AssumptionVerdict] = None
    valid: bool = True
    extra: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return {
            "method": self.method,
            "value": self.value,
            "terms": dict(self.terms),
            "assumption": None if self.assumption is None else self.assumption.to_dict(),
            "valid": self.valid,
            "extra": dict(self.extra),
        }


def _require(inputs, names, context):
    missing = [name for name in names if inputs.get(name) is None]
    if missing:
        raise IncompleteInput(missing, context)


def _ratio(num, den, name):
    if den <= 0:
        raise DegenerateGap(f"non-positive denominator {name}={den!r}")
    return num / den


def _report(method, terms, assumption=None, extra=None, require_below_one=False):
    value = sum(terms.values())
    extra = dict(extra or {})
    if method == "general_S" and value >= 1.0:
        # the contour-defined perturbed set may then differ in size from S
        extra["dimension_may_differ"] = True
    valid = math.isfinite(value) and (assumption is None or assumption.holds)
    if require_below_one:
        valid = valid and value < 1.0
    return BoundReport(
        method=method,
        value=value,
        terms=terms,
        assumption=assumption,
        valid=valid,
        extra=extra,
    )


# pylint: disable=too-many-leading-hastag-for-block-comment
### ASSUMPTIONS ####################################################################################


def check_assumption(kind, **inputs):
    """
    Evaluate the three ratios of an assumption and compare their maximum with ``1/12``.
    ``C3`` and ``C3'`` need the maximum strictly below ``1/12``.

    kind
        one of ``C0``, ``D0``, ``C1``, ``D1``, ``C2``, ``C3``, ``C3'``

    inputs
        ``p``, ``r``, ``E_norm``, ``x``, ``w`` and the kind-specific radius and gap
        (``lambda_bar``/``sigma_bar``, ``delta_S``/``delta``); ``eps1``, ``eps2``, ``eta``, ``t1``
        for ``C2``; ``upper_gap`` (``lambda_p - lambda_{r+1}``), ``lambda_1``,
        ``delta_paren``/``delta_p`` and ``n_samples`` for ``C3``/``C3'``
    """
    if kind not in _ASSUMPTION_FIELDS:
        raise UsageError(f"unknown assumption kind {kind!r}")
    _require(inputs, _ASSUMPTION_FIELDS[kind], kind)
    p = inputs["p"]
    r = inputs["r"]
    if kind in ("C0", "D0", "C1", "D1"):
        radius = inputs["lambda_bar"] if kind in ("C0", "D0") else inputs["sigma_bar"]
        gap = inputs["delta_S"] if kind in ("C0", "C1") else inputs["delta"]
        terms = {
            "noise": _ratio(math.sqrt(p) * inputs["E_norm"], radius, "radius"),
            "x": _ratio(r * inputs["x"], gap, "gap"),
            "w": _ratio(math.sqrt(r) * inputs["w"], math.sqrt(max(radius * gap, 0.0)), "gap"),
        }
    elif kind == "C2":
        terms = {
            "noise": math.sqrt(p) * inputs["eps1"],
            "x": r * inputs["t1"] * inputs["eps2"],
            "w": math.sqrt(r * inputs["eta"]),
        }
    else:
        gap = inputs["delta_paren"] if kind == "C3" else inputs["delta_p"]
        upper = inputs["upper_gap"]
        terms = {
            "noise": _ratio(math.sqrt(p) * inputs["E_norm"], upper, "upper_gap"),
            "x": _ratio(r * inputs["lambda_1"], gap * math.sqrt(inputs["n_samples"]), "gap"),
            "w": _ratio(math.sqrt(r) * inputs["E_norm"], math.sqrt(max(upper * gap, 0.0)), "gap"),
        }
    max_ratio = max(terms.values())
    if kind in ("C3", "C3'"):
        holds = max_ratio < THRESHOLD
    else:
        holds = max_ratio <= THRESHOLD + THRESHOLD_SLACK
    log.debug(f"Assumption {kind}: max ratio {max_ratio!r}, holds={holds}")
    return AssumptionVerdict(kind=kind, terms=terms, max_ratio=max_ratio, holds=holds)


def c2_parameters(regime, E_norm, lambda_p, delta_p, upper_gap=None):
    """
    ``(eps1, eps2, eta)`` for the low-rank or the high-rank regime

    regime
        ``low_rank`` uses ``lambda_p``, ``high_rank`` uses ``upper_gap = lambda_p - lambda_{r+1}``
    """
    if regime == "low_rank":
        scale = lambda_p
    elif regime == "high_rank":
        if upper_gap is None:
            raise IncompleteInput(["upper_gap"], "high_rank")
        scale = upper_gap
    else:
        raise UsageError(f"unknown regime {regime!r}")
    eps1 = _ratio(E_norm, scale, "scale")
    eps2 = _ratio(1.0, delta_p, "delta_p")
    eta = E_norm**2 / (scale * delta_p)
    return eps1, eps2, eta


### CLASSICAL AND SKEWNESS BOUNDS ##################################################################


def classical_bounds(E_norm, delta_S):
    """
    Weyl (``||E||``) and Davis-Kahan (``2 ||E|| / delta_S``)
    """
    if not delta_S > 0:
        raise DegenerateGap(f"delta_S must be positive, got {delta_S!r}")
    return {"weyl": float(E_norm), "davis_kahan": 2.0 * E_norm / delta_S}


_MODES = {"leading_p": "delta_p", "singular_p": "delta_bar_p", "general_S": "delta_S"}


def eigenspace_bound(mode, sk, sel, gaps):
    """
    Skewness bound ``12 sqrt(p) (||E|| / lambda_bar + sqrt(r) x / g + sqrt(r) y / g)``

    mode
        ``leading_p`` (``g = delta_p``, assumption C0), ``singular_p`` (``g = delta_bar_p``,
        assumption C0, additionally valid only when the value is below 1) or ``general_S``
        (``g = delta_S``, assumption D0 with the contour margin ``gaps.delta``)

    sk
        :class:`~eigenshift.skewness.SkewnessReport` with ``x``, ``y``, ``w`` and ``E_norm``
    """
    if mode not in _MODES:
        raise UsageError(f"unknown mode {mode!r}")
    g = getattr(gaps, _MODES[mode])
    if not g > 0:
        raise DegenerateGap(f"{_MODES[mode]} must be positive, got {g!r}")
    p, r = sel.p, sel.r
    common = {"p": p, "r": r, "E_norm": sk.E_norm, "lambda_bar": sel.lambda_bar}
    common.update(x=sk.x, w=sk.w)
    if mode == "general_S":
        assumption = check_assumption("D0", delta=gaps.delta, **common)
    else:
        assumption = check_assumption("C0", delta_S=g, **common)
    factor = 12.0 * math.sqrt(p)
    terms = {
        "noise_term": factor * sk.E_norm / sel.lambda_bar,
        "x_term": factor * math.sqrt(r) * sk.x / g,
        "y_term": factor * math.sqrt(r) * sk.y / g,
    }
    return _report(mode, terms, assumption, require_below_one=mode == "singular_p")


def y_variant_bounds(variant, sk, sel, gaps, spec=None):
    """
    Leading-``p`` bound with ``y`` replaced by an upper estimate

    variant
        ``trivial`` (``y <= ||E||^2 / lambda_bar``), ``spectral_sum`` (needs ``spec`` and
        ``sk.xbar``) or ``low_rank`` (needs ``sk.ybar`` and ``sk.sigma``)
    """
    p, r = sel.p, sel.r
    delta_p = gaps.delta_p
    if not delta_p > 0:
        raise DegenerateGap(f"delta_p must be positive, got {delta_p!r}")
    factor = 12.0 * math.sqrt(p)
    assumption = check_assumption(
        "C0",
        p=p,
        r=r,
        E_norm=sk.E_norm,
        lambda_bar=sel.lambda_bar,
        delta_S=delta_p,
        x=sk.x,
        w=sk.w,
    )
    if variant == "trivial":
        terms = {
            "noise_term": factor * sk.E_norm / sel.lambda_bar,
            "x_term": factor * math.sqrt(r) * sk.x / delta_p,
            "y_term": factor * math.sqrt(r) * sk.E_norm**2 / (delta_p * sel.lambda_bar),
        }
    elif variant == "spectral_sum":
        if spec is None or sk.xbar is None:
            raise IncompleteInput(["spec", "xbar"], "spectral_sum")
        values = np.asarray(spec.eigenvalues)
        tail = values[p - 1] - values[r:]
        if np.any(tail <= 0):
            raise DegenerateGap("spectral_sum needs lambda_p > lambda_l for all l > r")
        terms = {
            "noise_term": factor * sk.E_norm / sel.lambda_bar,
            "x_term": factor * math.sqrt(r) * sk.x / delta_p,
            "y_term": factor * math.sqrt(r) * sk.xbar**2 / delta_p * float(np.sum(1.0 / tail)),
        }
    elif variant == "low_rank":
        _require({"ybar": sk.ybar, "sigma": sk.sigma}, ("ybar", "sigma"), "low_rank")
        if spec is not None and not spec.eigenvalues[p - 1] > 0:
            raise NegativeSpike(f"lambda_p = {spec.eigenvalues[p - 1]!r} is not positive")
        if not sk.sigma > 0:
            raise NegativeSpike(f"sigma = {sk.sigma!r} is not positive")
        lambda_p = sk.sigma if spec is None else float(spec.eigenvalues[p - 1])
        terms = {
            "noise_term": factor * sk.E_norm / lambda_p,
            "x_term": factor * math.sqrt(r) * sk.x / delta_p,
            "ybar_term": factor * math.sqrt(r) * sk.ybar / (delta_p * sk.sigma),
            "x2_term": factor * r**1.5 * sk.x**2 / (delta_p * sk.sigma),
        }
    else:
        raise UsageError(f"unknown y variant {variant!r}")
    return _report(f"y_{variant}", terms, assumption)


def spectral_sum_tail_bound(r, xbar, delta_p, t, n):
    """
    Upper estimate ``sqrt(r) xbar^2 log(n) / (delta_p t)`` of the spectral-sum term when the
    eigenvalues below the neighbourhood are spaced at least ``t`` apart
    """
    return math.sqrt(r) * xbar**2 * math.log(n) / (delta_p * t)


def rectangular_bound(sk_rect, sel, gaps, use_margin=True):
    """
    ``12 sqrt(2p) (||E|| / sigma_bar + (sqrt(r) x + sqrt(r) y) / delta_S)`` for both the left
    and the right singular subspaces. The assumption is D1 with the margin ``gaps.delta``, or C1
    when ``use_margin`` is false.
    """
    delta_S = gaps.delta_S
    if not delta_S > 0:
        raise DegenerateGap(f"delta_S must be positive, got {delta_S!r}")
    p, r = sel.p, sel.r
    common = {"p": p, "r": r, "E_norm": sk_rect.E_norm, "sigma_bar": sel.lambda_bar}
    common.update(x=sk_rect.x, w=sk_rect.w)
    if use_margin:
        assumption = check_assumption("D1", delta=gaps.delta, **common)
    else:
        assumption = check_assumption("C1", delta_S=delta_S, **common)
    factor = 12.0 * math.sqrt(2 * p)
    terms = {
        "noise_term": factor * sk_rect.E_norm / sel.lambda_bar,
        "x_term": factor * math.sqrt(r) * sk_rect.x / delta_S,
        "y_term": factor * math.sqrt(r) * sk_rect.y / delta_S,
    }
    return _report("rectangular", terms, assumption)


### COMPARATOR BOUNDS ##############################################################################


def _precondition(name, lhs, rhs):
    if not lhs <= rhs:
        log.error(f"Precondition {name} failed: {lhs!r} > {rhs!r}")
        raise PreconditionFailed(name, lhs, rhs)


def _interaction(spec, E):
    sym = as_symmetric(E)
    U = np.asarray(spec.eigenvectors)
    return U.T @ sym @ U, operator_norm(sym)


def comparator_bounds(method, spec, E, p):
    """
    Constant-free comparator bounds for the leading ``p`` eigenvectors

    method
        ``KL``: ``xbar sum_{i <= p < j} 1 / (lambda_i - lambda_j) + (||E|| / delta_p)^2``,
        requires ``2 ||E|| <= delta_p``.
        ``BT``: ``||E|| / |lambda_p| log(6 sigma_1 / delta_p) + r^2 x / delta_p``, requires
        ``4 ||E|| <= delta_p <= |lambda_p| / 4``.
        ``JW``: ``x0 sqrt(sum_{i <= p < j} lambda_i lambda_j / (lambda_i - lambda_j)^2)``,
        requires positive semidefinite ``A`` and ``r_p <= 1 / (8 x0)``. Zero eigenvalues
        are left out of the maximum defining ``x0``.

    The hidden constants are set to 1 and flagged with ``extra["constant_free"]``.
    """
    values = np.asarray(spec.eigenvalues)
    n = values.shape[0]
    if not 1 <= p < n:
        raise InvalidSelection(f"p={p} must lie in [1, {n - 1}]")
    M, E_norm = _interaction(spec, E)
    delta_p = float(values[p - 1] - values[p])
    if not delta_p > 0:
        raise DegenerateGap(f"delta_p = {delta_p!r}")
    top, rest = values[:p], values[p:]
    extra = {"constant_free": True}

    if method == "KL":
        _precondition("2||E|| <= delta_p", 2.0 * E_norm, delta_p)
        xbar = float(np.max(np.abs(M)))
        cross = float(np.sum(1.0 / (top[:, None] - rest[None, :])))
        terms = {"x_term": xbar * cross, "quadratic_term": (E_norm / delta_p) ** 2}
        extra["xbar"] = xbar
    elif method == "BT":
        lambda_p = abs(float(values[p - 1]))
        _precondition("4||E|| <= delta_p", 4.0 * E_norm, delta_p)
        _precondition("delta_p <= |lambda_p|/4", delta_p, lambda_p / 4.0)
        r = p
        while r < n and lambda_p / 2.0 > abs(values[p - 1] - values[r]):
            r += 1
        x = float(np.max(np.abs(M[:r, :r])))
        sigma_1 = float(np.max(np.abs(values)))
        terms = {
            "noise_term": E_norm / lambda_p * math.log(6.0 * sigma_1 / delta_p),
            "x_term": r**2 * x / delta_p,
        }
        extra.update(r=r, x=x)
    elif method == "JW":
        scale = max(1.0, float(np.max(np.abs(values))))
        _precondition("A positive semidefinite", -float(values[-1]), 1e-9 * scale)
        positive = values > 0
        if not np.all(positive):
            log.debug(f"JW x0 skips {int(np.sum(~positive))} non-positive eigenvalue(s)")
        root = np.sqrt(np.where(positive, values, 1.0))
        scaled = np.abs(M) / np.outer(root, root)
        mask = np.outer(positive, positive)
        x0 = float(np.max(scaled[mask])) if np.any(mask) else 0.0
        gaps = np.abs(top[:, None] - rest[None, :])
        r_p = float(np.sum(top / gaps.min(axis=1)) + np.sum(rest / gaps.min(axis=0)))
        if x0 > 0:
            _precondition("r_p <= 1/(8 x0)", r_p, 1.0 / (8.0 * x0))
        pair_sum = float(np.sum(np.outer(top, rest) / (top[:, None] - rest[None, :]) ** 2))
        terms = {"x0_term": x0 * math.sqrt(max(pair_sum, 0.0))}
        extra.update(x0=x0, r_p=r_p)
    else:
        raise UsageError(f"unknown comparator {method!r}")
    return _report(method, terms, extra=extra)


def literature_references(p, r, E_norm, lambda_p, delta_p, delta_paren, n, t=1.0):
    """
    Additional constant-free reference values: ``OVW``
    (``4 sqrt(2p) (||E|| / lambda_p + t sqrt(r) / delta_p + ||E||^2 / (lambda_p delta_p))``)
    and ``KX`` (``(||E|| / delta_(p))^2 + sqrt(log n) / delta_(p)``)
    """
    ovw = 4.0 * math.sqrt(2 * p) * (
        E_norm / lambda_p + t * math.sqrt(r) / delta_p + E_norm**2 / (lambda_p * delta_p)
    )
    kx = (E_norm / delta_paren) ** 2 + math.sqrt(math.log(n)) / delta_paren
    return {"OVW": ovw, "KX": kx}


### DECAY PROFILES #################################################################################


@dataclass(frozen=True)
class DecayComparison:
    decay: str
    c: float
    n: int
    p: int
    lambda_1: float
    log_jw: float
    log_tv: float

    @property
    def jw(self):
        return math.exp(self.log_jw) if self.log_jw < 709.0 else math.inf

    @property
    def tv(self):
        return math.exp(self.log_tv) if self.log_tv < 709.0 else math.inf

    @property
    def log_ratio(self):
        return self.log_jw - self.log_tv


def decay_log_profile(decay, c, n):
    """
    ``log h(i)`` for ``i = 1..n``: ``poly`` is ``i^-c``, ``exp`` is ``e^{-ci}``, ``log`` is
    ``log(i + e - 1)^-c`` (normalized so that ``h(1) = 1``)
    """
    i = np.arange(1, n + 1, dtype=float)
    if decay == "poly":
        return -c * np.log(i)
    if decay == "exp":
        return -c * i
    if decay == "log":
        return -c * np.log(np.log(i + math.e - 1.0))
    raise UsageError(f"unknown decay {decay!r}")


def _log_diff(log_a, log_b):
    # log(a - b) for a > b > 0 given logs
    return log_a + np.log1p(-np.exp(log_b - log_a))


def decay_comparison(decay, c, n, p=1, lambda_1=None):
    """
    Compare the constant-free JW-style and skewness-style values on ``lambda_i = lambda_1 h(i)``
    with noise of norm ``sqrt(n)``. Computed in log space, since the exponential profile
    overflows.
    """
    if not 1 <= p < n:
        raise InvalidSelection(f"p={p} must lie in [1, {n - 1}]")
    lambda_1 = float(n) if lambda_1 is None else float(lambda_1)
    log_h = decay_log_profile(decay, c, n)
    top, rest = log_h[:p], log_h[p:]

    log_pairs = top[:, None] + rest[None, :] - 2.0 * _log_diff(top[:, None], rest[None, :])
    log_jw = -math.log(lambda_1) - log_h[-1] + 0.5 * float(logsumexp(log_pairs))

    log_gap = float(_log_diff(log_h[p - 1], log_h[p]))
    log_tail = float(logsumexp(-_log_diff(log_h[p - 1], rest))) - math.log(lambda_1)
    log_terms = [
        0.5 * math.log(n) - math.log(lambda_1),
        -math.log(lambda_1) - log_gap,
        -math.log(lambda_1) - log_gap + log_tail,
    ]
    log_tv = float(logsumexp(log_terms))
    return DecayComparison(
        decay=decay, c=c, n=n, p=p, lambda_1=lambda_1, log_jw=log_jw, log_tv=log_tv
    )


### RANDOM NOISE AND SPIKED MODEL ##################################################################


def _clamp(prob):
    return min(1.0, max(0.0, prob))


def random_noise_bound(variant, **inputs):
    """
    Bounds for random noise with independent entries

    variant
        ``low_rank``: needs ``p, r, E_norm, lambda_p, delta_p, t1, t2, mu, sigma, K, n, m4``.
        ``high_rank``: as ``low_rank`` with ``upper_gap`` instead of ``m4``.
        ``wigner_noise``: needs ``p, r, E_norm, lambda_p, delta_p, n, alpha`` (constant-free).
    """
    if variant == "wigner_noise":
        _require(inputs, ("p", "r", "E_norm", "lambda_p", "delta_p", "n", "alpha"), variant)
        p, r = inputs["p"], inputs["r"]
        factor = 12.0 * math.sqrt(p)
        terms = {
            "noise_term": factor * inputs["E_norm"] / inputs["lambda_p"],
            "x_term": factor
            * math.sqrt(r * math.log(r / inputs["alpha"]))
            * math.log(inputs["n"])
            / inputs["delta_p"],
            "y_term": factor
            * r**1.5
            * inputs["E_norm"]
            / (inputs["lambda_p"] * inputs["delta_p"]),
        }
        return _report(variant, terms, extra={"constant_free": True})

    common = ("p", "r", "E_norm", "lambda_p", "delta_p", "t1", "t2", "mu", "sigma", "K", "n")
    if variant == "low_rank":
        _require(inputs, common + ("m4",), variant)
        eps1, eps2, eta = c2_parameters(
            "low_rank", inputs["E_norm"], inputs["lambda_p"], inputs["delta_p"]
        )
    elif variant == "high_rank":
        _require(inputs, common + ("upper_gap",), variant)
        eps1, eps2, eta = c2_parameters(
            "high_rank",
            inputs["E_norm"],
            inputs["lambda_p"],
            inputs["delta_p"],
            upper_gap=inputs["upper_gap"],
        )
    else:
        raise UsageError(f"unknown random noise variant {variant!r}")

    p, r = inputs["p"], inputs["r"]
    t1, t2 = inputs["t1"], inputs["t2"]
    sigma, K, n = inputs["sigma"], inputs["K"], inputs["n"]
    assumption = check_assumption("C2", p=p, r=r, eps1=eps1, eps2=eps2, eta=eta, t1=t1)
    factor = 12.0 * math.sqrt(p)
    terms = {
        "noise_term": factor * eps1,
        "x_term": factor * math.sqrt(r) * t1 * eps2,
        "y_term": factor * math.sqrt(r) * (t2 + inputs["mu"]) / inputs["E_norm"] * eps1 * eps2,
    }
    x_fail = r**2 * math.exp(-(t1**2) / 2.0 / (2.0 * sigma**2 + K * t1))
    if variant == "low_rank":
        y_fail = 5.0 * r * (r - 1) * n * inputs["m4"] / (2.0 * t2**2)
    else:
        y_fail = 6.0 * r * (r - 1) * p * n * sigma**2 * (sigma**2 + K**2) / t2**2
    extra = {"probability": _clamp(1.0 - x_fail - y_fail), "eps1": eps1, "eps2": eps2, "eta": eta}
    return _report(variant, terms, assumption, extra=extra)


def recommended_thresholds(r, n, sigma, K, m4, alpha=0.01):
    """
    Default ``t1 = 4 (sigma + K) sqrt(log(r / alpha))`` and ``t2 = 5 r sqrt(n m4)``
    """
    t1 = 4.0 * (sigma + K) * math.sqrt(math.log(r / alpha))
    t2 = 5.0 * r * math.sqrt(n * m4)
    return t1, t2


def spiked_bound(variant, **inputs):
    """
    Bounds for the spiked covariance model

    variant
        ``rate``: ``sqrt(gamma / lambda_p)`` under C3.
        ``corrected``: ``rate`` plus ``c_r d / (delta_(p) n)`` under C3'.
        ``explicit``: ``12 sqrt(p) (||E|| / (lambda_p - lambda_{r+1}) + sqrt(r) t1 / (delta_(p)
        sqrt(n)) + sqrt(r) t2 / ((lambda_p - lambda_{r+1}) delta_(p) sqrt(n)))`` with probability
        ``1 - r^2 / t1^2 - r^2 p / t2^2``.

    The hypothesis ``delta_(p) > 12 max(gamma, lambda_1^{3/2} / sqrt(d))`` and the direct
    Davis-Kahan value ``2 ||E|| / delta_(p)`` are reported in ``extra``.
    """
    base = ("p", "r", "E_norm", "lambda_p", "lambda_1", "upper_gap", "delta_paren", "d", "n")
    _require(inputs, base, variant)
    p, r = inputs["p"], inputs["r"]
    d, n = inputs["d"], inputs["n"]
    gamma = d / n
    delta_paren = inputs["delta_paren"]
    if not delta_paren > 0:
        raise DegenerateGap(f"delta_(p) = {delta_paren!r}")
    hyp_rhs = 12.0 * max(gamma, inputs["lambda_1"] ** 1.5 / math.sqrt(d))
    extra = {
        "gamma": gamma,
        "hypothesis_holds": delta_paren > hyp_rhs,
        "hypothesis_rhs": hyp_rhs,
        "davis_kahan": 2.0 * inputs["E_norm"] / delta_paren,
    }
    c3_inputs = {
        "p": p,
        "r": r,
        "E_norm": inputs["E_norm"],
        "upper_gap": inputs["upper_gap"],
        "lambda_1": inputs["lambda_1"],
        "n_samples": n,
    }
    rate = math.sqrt(gamma / inputs["lambda_p"])
    if variant == "rate":
        assumption = check_assumption("C3", delta_paren=delta_paren, **c3_inputs)
        terms = {"rate_term": rate}
        extra["constant_free"] = True
    elif variant == "corrected":
        _require(inputs, ("delta_p", "c_r"), variant)
        assumption = check_assumption("C3'", delta_p=inputs["delta_p"], **c3_inputs)
        terms = {"rate_term": rate, "correction_term": inputs["c_r"] * d / (delta_paren * n)}
        extra["constant_free"] = True
    elif variant == "explicit":
        _require(inputs, ("t1", "t2"), variant)
        assumption = check_assumption("C3", delta_paren=delta_paren, **c3_inputs)
        t1, t2 = inputs["t1"], inputs["t2"]
        upper = inputs["upper_gap"]
        factor = 12.0 * math.sqrt(p)
        terms = {
            "noise_term": factor * inputs["E_norm"] / upper,
            "x_term": factor * math.sqrt(r) * t1 / (delta_paren * math.sqrt(n)),
            "y_term": factor * math.sqrt(r) * t2 / (upper * delta_paren * math.sqrt(n)),
        }
        extra["probability"] = _clamp(1.0 - r**2 / t1**2 - r**2 * p / t2**2)
    else:
        raise UsageError(f"unknown spiked variant {variant!r}")
    report = _report(f"spiked_{variant}", terms, assumption, extra=extra)
    if not extra["hypothesis_holds"]:
        return replace(report, valid=False)
    return report


def spiked_limit(model, lambda_p, gamma, H=None):
    """
    Limit of ``||u~_p u~_p^T - u_p u_p^T||`` in the proportional regime ``d / n -> gamma``

    model
        ``johnstone``: ``sqrt(lambda gamma / ((lambda - 1)^2 + (lambda - 1) gamma))`` for
        ``lambda > 1 + sqrt(gamma)``.
        ``byz``: ``sqrt(1 - lambda phi'(lambda) / phi(lambda))`` with
        ``phi(lambda) = lambda + gamma mean(t lambda / (lambda - t))`` over the non-spike
        eigenvalues ``H``.
    """
    if gamma < 0:
        raise UsageError(f"gamma must be non-negative, got {gamma!r}")
    if model == "johnstone":
        if not lambda_p > 1.0 + math.sqrt(gamma):
            raise SubcriticalSpike(f"lambda_p={lambda_p!r} <= 1 + sqrt(gamma)")
        shifted = lambda_p - 1.0
        return math.sqrt(lambda_p * gamma / (shifted**2 + shifted * gamma))
    if model == "byz":
        if H is None or len(H) == 0:
            raise IncompleteInput(["H"], "byz")
        t = np.asarray(H, dtype=float)
        diff = lambda_p - t
        if np.any(diff == 0.0):
            raise DegenerateGap(f"lambda_p={lambda_p!r} is a pole of phi")
        phi = lambda_p + gamma * float(np.mean(t * lambda_p / diff))
        phi_prime = 1.0 - gamma * float(np.mean(t**2 / diff**2))
        if not phi_prime > 0:
            raise SubcriticalSpike(f"phi'(lambda_p) = {phi_prime!r} <= 0")
        return math.sqrt(max(0.0, 1.0 - lambda_p * phi_prime / phi))
    raise UsageError(f"unknown limit model {model!r}")
