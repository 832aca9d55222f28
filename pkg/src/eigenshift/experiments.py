"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Experiment harness
==================
Seeded, tolerance-checked experiments that rebuild the sharpness constructions, sample random
instances to check the deterministic bounds, reproduce the random-matrix rates, and aggregate
and emit the results.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy, scipy
:platform:      All

Each trial gets its own seed from ``SeedSequence([seed, trial])``. Trials run on a thread pool
and are collected in trial order, so a result does not depend on the worker count. A trial that
raises an :class:`~eigenshift.exceptions.EigenshiftError` is recorded as failed and the run
continues.

Kinds with a fixed list of constructions (``sharpness_appendixD``, ``dk_sharpness_s13``,
``jw_comparison``) run construction ``trial % len(constructions)`` in each trial.
"""
import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Optional
from typing import Tuple

import numpy as np
from scipy import linalg as la
from scipy.optimize import brentq

from eigenshift.bounds import classical_bounds
from eigenshift.bounds import decay_comparison
from eigenshift.bounds import eigenspace_bound
from eigenshift.bounds import rectangular_bound
from eigenshift.bounds import spiked_bound
from eigenshift.bounds import spiked_limit
from eigenshift.eigenvalues import dw_outlier
from eigenshift.eigenvalues import least_singular_floor
from eigenshift.eigenvalues import lower_eigen_shift
from eigenshift.eigenvalues import upper_eigen_shift
from eigenshift.ensembles import NOISE
from eigenshift.ensembles import SIGNAL
from eigenshift.ensembles import EnsembleSpec
from eigenshift.ensembles import SpikedModelSpec
from eigenshift.ensembles import draw_entries
from eigenshift.ensembles import gen_hidden_cliques
from eigenshift.ensembles import gen_signal
from eigenshift.ensembles import gen_spiked_samples
from eigenshift.ensembles import gen_symmetric_noise
from eigenshift.ensembles import stream
from eigenshift.exceptions import EigenshiftError
from eigenshift.exceptions import EmptyResult
from eigenshift.exceptions import UsageError
from eigenshift.skewness import rect_skew_xyw
from eigenshift.skewness import select_neighborhood
from eigenshift.skewness import select_singular_neighborhood
from eigenshift.skewness import singular_selection
from eigenshift.skewness import skew_xyw
from eigenshift.skewness import spectral_gaps
from eigenshift.spectral_core import decompose_rectangular
from eigenshift.spectral_core import decompose_symmetric
from eigenshift.spectral_core import operator_norm
from eigenshift.spectral_core import perturbed_distance
from eigenshift.spectral_core import perturbed_singular_distance
from eigenshift.spectral_core import singular_order
from eigenshift.spectral_core import spectral_projector
from eigenshift.spectral_core import subspace_distance

# Globals
log = logging.getLogger(__name__)

CSV_COLUMNS = ("trial", "seed", "measured", "bound", "ratio", "valid")
QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)
CLOSED_FORM_TOL = 1e-9


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    parameters: Dict[str, object] = field(default_factory=dict)
    trials: int = 1
    seed: int = 0
    tolerances: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    measured: Optional[float] = None
    bound: Optional[float] = None
    ratio: Optional[float] = None
    valid: bool = False
    values: Dict[str, object] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass(frozen=True)
class ExperimentResult:
    kind: str
    seed: int
    records: Tuple[TrialRecord, ...]
    summary: Dict[str, object]
    passed: bool

    def to_dict(self):
        return {
            "kind": self.kind,
            "seed": self.seed,
            "records": [asdict(rec) for rec in self.records],
            "summary": self.summary,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            kind=data["kind"],
            seed=data["seed"],
            records=tuple(TrialRecord(**rec) for rec in data["records"]),
            summary=data["summary"],
            passed=data["passed"],
        )


def trial_seed(seed, trial):
    return int(np.random.SeedSequence([int(seed), int(trial)]).generate_state(1)[0])


def _ratio(measured, bound):
    if bound == 0.0:
        return math.inf if measured > 0 else 0.0
    return measured / bound


# pylint: disable=too-many-leading-hastag-for-block-comment
### CONSTRUCTIONS ##################################################################################


def dk_pair(eps, n=6):
    """
    Signal ``diag(1, 1 - eps, ..., 1 - 4 eps, 1/2, ...)`` and noise
    ``diag(0, 5 eps, 5 eps, 0, ...)`` on which the Davis-Kahan bound is off by its constant only
    """
    if n < 6 or not 0 < eps < 0.125:
        raise UsageError(f"need n >= 6 and 0 < eps < 1/8, got n={n}, eps={eps!r}")
    diag = np.full(n, 0.5)
    diag[:5] = 1.0 - eps * np.arange(5)
    noise = np.zeros(n)
    noise[1:3] = 5.0 * eps
    return np.diag(diag), np.diag(noise)


def _third_case_shift(lam, delta):
    # largest root a > 0 of lam + a = 1 / a + 1 / (a + delta)
    def f(a):
        return lam + a - 1.0 / a - 1.0 / (a + delta)

    return brentq(f, 1.0 / (2.0 * (lam + 1.0)), 2.0 / lam + 1.0, xtol=1e-15, rtol=1e-15)


def sharpness_case(case, n, dim=None):
    """
    One of the three sharpness constructions on ``A = diag(lambda, lambda - delta, 0, ...)``.

    case
        ``noise`` (``lambda = n``, ``delta = n / 4``, coupling ``mu = sqrt(n)`` to a zero
        eigenvector), ``x`` (``lambda = n^2``, ``delta = sqrt(n)``, coupling ``mu = n^(1/4)``
        between the two leading eigenvectors) or ``y`` (``lambda = sqrt(n)``,
        ``delta = n^(-1/4)``, unit couplings to the last coordinate)

    Returns ``(A, E, closed_form_distance, lambda)``.
    """
    dim = n if dim is None else dim
    if case == "noise":
        lam, delta, mu = float(n), n / 4.0, math.sqrt(n)
    elif case == "x":
        lam, delta, mu = float(n) ** 2, math.sqrt(n), n**0.25
    elif case == "y":
        lam, delta, mu = math.sqrt(n), n**-0.25, 1.0
    else:
        raise UsageError(f"unknown construction {case!r}")
    if dim < 3:
        raise UsageError(f"constructions need dimension >= 3, got {dim}")
    A = np.zeros((dim, dim))
    A[0, 0], A[1, 1] = lam, lam - delta
    E = np.zeros((dim, dim))
    if case == "noise":
        E[0, 2] = E[2, 0] = mu
        top = (lam + math.sqrt(lam**2 + 4.0 * mu**2)) / 2.0
        closed = mu / math.sqrt(top**2 + mu**2)
    elif case == "x":
        E[0, 1] = E[1, 0] = mu
        E[2, 2] = math.sqrt(lam)
        top = (lam - delta / 2.0) + math.sqrt(delta**2 + 4.0 * mu**2) / 2.0
        closed = mu / math.sqrt((top - lam + delta) ** 2 + mu**2)
    else:
        E[0, -1] = E[-1, 0] = E[1, -1] = E[-1, 1] = 1.0
        a = _third_case_shift(lam, delta)
        q = a**2 / (a + delta) ** 2
        closed = math.sqrt((a**2 + q) / (1.0 + a**2 + q))
    return A, E, closed, lam


### TRIAL RUNNERS ##################################################################################


def _wigner(n, seed, entry_dist="gaussian", scale=1.0):
    E = gen_symmetric_noise(EnsembleSpec(kind="wigner", n=n, entry_dist=entry_dist, seed=seed))
    return E * scale


def _lambda_bar(params, values, p, E_norm):
    if params["lambda_bar_rule"] == "half_lambda_p":
        return abs(float(values[p - 1])) / 2.0
    if params["lambda_bar_rule"] == "noise_scaled":
        return 24.0 * E_norm / params["epsilon"]
    raise UsageError(f"unknown lambda_bar rule {params['lambda_bar_rule']!r}")


def _run_bound_validity(params, trial, seed):
    mode = params["mode"]
    if mode == "rectangular":
        return _run_rectangular(params, seed)
    n, p = params["n"], params["p"]
    spikes = params["spikes"] or [12.0 * n, 7.0 * n]
    A = gen_signal("rotated_low_rank", n, spikes=spikes, seed=seed)
    E = _wigner(n, seed, params["entry_dist"], params["noise_scale"])
    spec = decompose_symmetric(A)
    spec_t = decompose_symmetric(A + E)
    E_norm = operator_norm(E)
    lambda_bar = _lambda_bar(params, spec.eigenvalues, p, E_norm)

    if mode == "eigen_shift":
        return _run_eigen_shift(spec, spec_t, E, p, lambda_bar)
    if mode == "singular_p":
        sel = singular_selection(spec, p, lambda_bar)
        S_t = singular_order(spec_t).leading(p)
        measured = subspace_distance(
            spectral_projector(spec_t, S_t), spectral_projector(spec, sel.S)
        )
        gaps = spectral_gaps(spec, sel.S, p=p)
    elif mode in ("leading_p", "general_S"):
        S = tuple(params["S"]) if mode == "general_S" and params["S"] else tuple(range(p))
        sel = select_neighborhood(spec, S, lambda_bar)
        measured = subspace_distance(spectral_projector(spec_t, S), spectral_projector(spec, S))
        gaps = spectral_gaps(spec, S, p=p)
    else:
        raise UsageError(f"unknown bound_validity mode {mode!r}")
    report = eigenspace_bound(mode, skew_xyw(spec, E, sel), sel, gaps)
    return {
        "measured": measured,
        "bound": report.value,
        "valid": report.valid,
        "values": {"r": sel.r, "lambda_bar": lambda_bar, "E_norm": E_norm, **report.terms},
    }


def _run_eigen_shift(spec, spec_t, E, p, lambda_bar):
    sel = select_neighborhood(spec, range(p), lambda_bar)
    sk = skew_xyw(spec, E, sel)
    lower = lower_eigen_shift(spec, sk, p, lambda_bar, r=sel.r)
    shift = float(spec_t.eigenvalues[p - 1] - spec.eigenvalues[p - 1])
    if p == 1:
        upper = upper_eigen_shift(spec, sk, lambda_bar=lambda_bar, r=sel.r)
        valid = lower.valid and upper.valid
    else:
        upper, valid = None, lower.valid
    if shift >= 0 and upper is not None:
        bound = upper.bound
    elif shift >= 0:
        bound = math.inf
    else:
        bound = lower.bound
    return {
        "measured": abs(shift),
        "bound": bound,
        "valid": valid,
        "values": {
            "shift": shift,
            "lower": lower.bound,
            "upper": None if upper is None else upper.bound,
        },
    }


def _run_rectangular(params, seed):
    m, n = params["shape"]
    sigmas = np.asarray(params["sigmas"], dtype=float)
    rng = stream(seed, 0, SIGNAL)
    left, _ = la.qr(rng.standard_normal((m, sigmas.shape[0])), mode="economic")
    right, _ = la.qr(rng.standard_normal((n, sigmas.shape[0])), mode="economic")
    A = (left * sigmas) @ right.T
    E = params["noise_scale"] * draw_entries(stream(seed, 0, NOISE), params["entry_dist"], (m, n))
    rs = decompose_rectangular(A)
    S = tuple(range(params["p"]))
    sel = select_singular_neighborhood(rs, S, float(rs.values[params["p"] - 1]) / 2.0)
    gaps = spectral_gaps(None, S, values=rs.values)
    report = rectangular_bound(rect_skew_xyw(rs, E, sel), sel, gaps)
    d_left, d_right = perturbed_singular_distance(A, E, S)
    return {
        "measured": max(d_left, d_right),
        "bound": report.value,
        "valid": report.valid,
        "values": {"left": d_left, "right": d_right, "r": sel.r, **report.terms},
    }


def _constant_free_terms(A, E, lam):
    spec = decompose_symmetric(A)
    sel = select_neighborhood(spec, (0,), lam / 2.0)
    report = eigenspace_bound(
        "leading_p", skew_xyw(spec, E, sel), sel, spectral_gaps(spec, (0,))
    )
    return {name.replace("_term", ""): value / 12.0 for name, value in report.terms.items()}


def _run_sharpness(params, trial, seed):
    constructions = [(case, n) for n in params["ns"] for case in ("noise", "x", "y")]
    constructions += [("necessity", tuple(c)) for c in params["necessity_pairs"]]
    case, arg = constructions[trial % len(constructions)]

    if case == "necessity":
        return _run_necessity(params["necessity_n"], arg, seed)
    A, E, closed, lam = sharpness_case(case, arg, dim=params["dim"])
    measured = perturbed_distance(A, E, (0,))
    terms = _constant_free_terms(A, E, lam)
    dominant = max(terms, key=terms.get)
    ratio = _ratio(measured, terms[case])
    valid = (
        abs(measured - closed) <= CLOSED_FORM_TOL
        and dominant == case
        and params["ratio_low"] <= ratio <= params["ratio_high"]
    )
    return {
        "measured": measured,
        "bound": terms[case],
        "valid": valid,
        "values": {"case": case, "n": arg, "closed_form": closed, "dominant": dominant, **terms},
    }


def _run_necessity(n, coefficients, seed):
    c1, c2 = coefficients
    A = np.zeros((n, n))
    A[0, 0], A[1, 1] = c1 * math.sqrt(n), c2 * math.sqrt(n)
    E = np.zeros((n, n))
    E[1:, 1:] = _wigner(n - 1, seed)
    E_norm = operator_norm(E)
    delta = A[0, 0] - A[1, 1]
    ratio = E_norm**2 / (A[1, 1] * delta)
    measured = perturbed_distance(A, E, (0,))
    swapped = measured > 0.5
    return {
        "measured": measured,
        "bound": ratio,
        "valid": swapped == (ratio > 4.0),
        "values": {"case": "necessity", "c1": c1, "c2": c2, "swapped": swapped},
    }


def _run_dk(params, trial, seed):
    eps = params["eps"][trial % len(params["eps"])]
    A, E = dk_pair(eps, params["n"])
    measured = perturbed_distance(A, E, (0,))
    spec = decompose_symmetric(A)
    gaps = spectral_gaps(spec, (0,))
    dk = classical_bounds(operator_norm(E), gaps.delta_S)["davis_kahan"]
    valid = abs(measured - 1.0) <= 1e-12 and abs(dk - 10.0) <= 1e-9 * 10.0
    return {"measured": measured, "bound": dk, "valid": valid, "values": {"eps": eps}}


def recover_clique(A_tilde, k):
    """
    Take the ``k`` largest coordinates of the leading eigenvector in absolute value, then keep
    the vertices with at least ``3k/4`` neighbours in that set
    """
    arr = np.asarray(A_tilde, dtype=float)
    n = arr.shape[0]
    _, vec = la.eigh(arr, subset_by_index=[n - 1, n - 1])
    candidates = np.argsort(-np.abs(vec[:, 0]), kind="stable")[:k]
    neighbours = np.sum(arr[:, candidates] == 1.0, axis=1)
    return tuple(int(v) for v in np.flatnonzero(neighbours >= 0.75 * k))


def _run_hidden_cliques(params, trial, seed):
    n = params["n"]
    sizes = [int(round(f * math.sqrt(n))) for f in params["size_factors"]]
    planted = gen_hidden_cliques(n, sizes, seed)
    largest = set(planted.memberships[0])
    recovered = set(recover_clique(planted.A_tilde, sizes[0]))
    missed = len(largest ^ recovered)
    bound = sizes[0] / 20.0
    return {
        "measured": float(missed),
        "bound": bound,
        "valid": missed == 0,
        "values": {"k": sizes[0], "recovered": len(recovered)},
    }


def _run_deformed_wigner(params, trial, seed):
    n = params["n"]
    lam = params["spike_factor"] * math.sqrt(n)
    A = gen_signal("diag_spikes", n, spikes=[lam])
    E = _wigner(n, seed, params["entry_dist"])
    top = float(la.eigvalsh(A + E, subset_by_index=[n - 1, n - 1])[0])
    x = abs(float(E[0, 0]))
    outlier = dw_outlier(lam, n, x, E_norm=operator_norm(E))
    shift = top - lam
    return {
        "measured": shift,
        "bound": outlier.prediction,
        "valid": True,
        "values": {"regime_ok": outlier.regime_ok, "correction_bound": outlier.correction_bound},
    }


def _run_spiked_rates(params, trial, seed):
    d, n = params["d"], params["n_samples"]
    spike, r = params["spike"], params["r"]
    diag = np.ones(d)
    diag[:r] = spike
    M = np.diag(diag)
    samples = gen_spiked_samples(
        SpikedModelSpec(M=M, n_samples=n, entry_dist=params["entry_dist"], seed=seed)
    )
    S = tuple(range(r - 1, r))
    measured = perturbed_distance(M, samples.E, S)
    gamma = d / n
    limit = spiked_limit("johnstone", spike, gamma)
    rate = math.sqrt(gamma / spike)
    E_norm = operator_norm(samples.E)
    report = spiked_bound(
        "rate",
        p=r,
        r=r,
        E_norm=E_norm,
        lambda_p=spike,
        lambda_1=spike,
        upper_gap=spike - 1.0,
        delta_paren=spike - 1.0,
        d=d,
        n=n,
    )
    factor = params["rate_factor"]
    return {
        "measured": measured,
        "bound": limit,
        "valid": rate / factor <= measured <= rate * factor,
        "values": {"rate": rate, "davis_kahan": report.extra["davis_kahan"], "E_norm": E_norm},
    }


def _run_jw(params, trial, seed):
    grid = [
        (decay, c, n) for decay in params["decays"] for c in params["cs"] for n in params["ns"]
    ]
    decay, c, n = grid[trial % len(grid)]
    dc = decay_comparison(decay, c, n, p=params["p"])
    return {
        "measured": dc.tv,
        "bound": dc.jw,
        "valid": dc.log_ratio > 0,
        "ratio": math.exp(-dc.log_ratio) if dc.log_ratio > -709.0 else math.inf,
        "values": {"decay": decay, "c": c, "n": n, "log_jw": dc.log_jw, "log_tv": dc.log_tv},
    }


def _run_least_singular(params, trial, seed):
    n = params["n"]
    small = list(params["small"])
    large = [params["large"] * (-1.0) ** i for i in range(n - len(small))]
    A = gen_signal("rotated_low_rank", n, spikes=small + large, seed=seed)
    E = _wigner(n, seed, scale=params["noise_scale"])
    spec = decompose_symmetric(A)
    floor = least_singular_floor(spec, E, params["T"])
    perturbed = float(np.min(np.abs(la.eigvalsh(A + E))))
    return {
        "measured": perturbed,
        "bound": floor.sigma_min / 2.0,
        "valid": floor.guaranteed,
        "ratio": floor.sigma_min / (2.0 * perturbed),
        "values": {"lhs": floor.lhs, "r_T": floor.r_T, "sigma_min": floor.sigma_min},
    }


_RUNNERS = {
    "bound_validity": _run_bound_validity,
    "sharpness_appendixD": _run_sharpness,
    "dk_sharpness_s13": _run_dk,
    "hidden_cliques": _run_hidden_cliques,
    "deformed_wigner": _run_deformed_wigner,
    "spiked_rates": _run_spiked_rates,
    "jw_comparison": _run_jw,
    "least_singular": _run_least_singular,
}

DEFAULT_PARAMETERS = {
    "bound_validity": {
        "mode": "leading_p",
        "n": 500,
        "p": 1,
        "spikes": None,
        "S": None,
        "entry_dist": "gaussian",
        "noise_scale": 1.0,
        "lambda_bar_rule": "half_lambda_p",
        "epsilon": 1.0,
        "shape": (6, 9),
        "sigmas": (1000.0, 600.0),
    },
    "sharpness_appendixD": {
        "ns": (100, 1000),
        "dim": None,
        "necessity_n": 400,
        "necessity_pairs": ((4.0, 3.0), (2.05, 2.0)),
        "ratio_low": 0.1,
        "ratio_high": 10.0,
    },
    "dk_sharpness_s13": {"eps": (1e-3,), "n": 6},
    "hidden_cliques": {"n": 900, "size_factors": (8.0, 6.0, 4.0)},
    "deformed_wigner": {"n": 500, "spike_factor": 3.0, "entry_dist": "gaussian"},
    "spiked_rates": {
        "d": 400,
        "n_samples": 400,
        "spike": 25.0,
        "r": 1,
        "entry_dist": "gaussian",
        "rate_factor": 3.0,
    },
    "jw_comparison": {"decays": ("poly",), "cs": (0.75, 1.0), "ns": (1000, 10000), "p": 1},
    "least_singular": {
        "n": 200,
        "small": (1.0, -1.5),
        "large": 1e4,
        "T": 5e3,
        "noise_scale": 1e-3,
    },
}

# pass criteria per kind
CRITERIA = {
    "bound_validity": ("dominates",),
    "sharpness_appendixD": ("all_valid",),
    "dk_sharpness_s13": ("all_valid",),
    "hidden_cliques": ("fraction_valid",),
    "deformed_wigner": ("mean_band",),
    "spiked_rates": ("mean_band", "all_valid"),
    "jw_comparison": ("all_valid",),
    "least_singular": ("dominates",),
}

DEFAULT_TOLERANCES = {
    "bound_validity": {"slack": 1e-12},
    "sharpness_appendixD": {},
    "dk_sharpness_s13": {},
    "hidden_cliques": {"fraction": 0.9},
    "deformed_wigner": {"band_low": 0.85, "band_high": 1.15},
    "spiked_rates": {"band_low": 0.7, "band_high": 1.3},
    "jw_comparison": {},
    "least_singular": {"slack": 1e-12},
}


### RUNNING AND AGGREGATION ########################################################################


def validate_config(cfg):
    if cfg.kind not in _RUNNERS:
        raise UsageError(f"unknown experiment kind {cfg.kind!r}")
    if int(cfg.trials) < 1:
        raise UsageError(f"trials must be at least 1, got {cfg.trials}")
    unknown = sorted(set(cfg.parameters) - set(DEFAULT_PARAMETERS[cfg.kind]))
    if unknown:
        raise UsageError(f"unknown parameters for {cfg.kind}: {', '.join(unknown)}")
    bad = [k for k, v in cfg.tolerances.items() if not float(v) > 0]
    if bad:
        raise UsageError(f"tolerances must be positive: {', '.join(bad)}")
    return cfg


def run_trial(kind, params, seed, trial):
    """
    Run one trial and turn its outcome, or its error, into a :class:`TrialRecord`
    """
    t_seed = trial_seed(seed, trial)
    try:
        out = _RUNNERS[kind](params, trial, t_seed)
    except EigenshiftError as exc:
        log.error(f"Trial {trial} of {kind} failed: {exc}")
        error = f"{type(exc).__name__}: {exc}"
        return TrialRecord(trial=trial, seed=t_seed, valid=False, error=error)
    measured, bound = float(out["measured"]), float(out["bound"])
    ratio = out.get("ratio", _ratio(measured, bound))
    return TrialRecord(
        trial=trial,
        seed=t_seed,
        measured=measured,
        bound=bound,
        ratio=float(ratio),
        valid=bool(out["valid"]),
        values=_plain(out["values"]),
    )


def _plain(values):
    # numpy scalars to builtins so that records serialize
    return {k: v.item() if isinstance(v, np.generic) else v for k, v in values.items()}


def run_experiment(cfg, threads=1):
    """
    Run every trial of ``cfg`` and aggregate the records

    cfg
        :class:`ExperimentConfig`

    threads
        worker count; results are identical for any value
    """
    validate_config(cfg)
    params = {**DEFAULT_PARAMETERS[cfg.kind], **cfg.parameters}
    log.debug(f"Running {cfg.kind} with {cfg.trials} trial(s), seed {cfg.seed}")

    def _one(trial):
        return run_trial(cfg.kind, params, cfg.seed, trial)

    if threads <= 1:
        records = [_one(t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_one, range(cfg.trials)))

    tolerances = {**DEFAULT_TOLERANCES[cfg.kind], **cfg.tolerances}
    summary = summarize(records, CRITERIA[cfg.kind], tolerances)
    return ExperimentResult(
        kind=cfg.kind,
        seed=cfg.seed,
        records=tuple(records),
        summary=summary,
        passed=summary["passed"],
    )


def _check(criterion, records, ratios, tol):
    valid = [rec for rec in records if rec.valid]
    if criterion == "dominates":
        return bool(valid) and all(rec.ratio <= 1.0 + tol.get("slack", 0.0) for rec in valid)
    if criterion == "all_valid":
        return all(rec.valid for rec in records)
    if criterion == "fraction_valid":
        return len(valid) >= tol["fraction"] * len(records)
    if criterion in ("mean_band", "all_band"):
        if ratios.size == 0:
            return False
        low, high = tol["band_low"], tol["band_high"]
        if criterion == "mean_band":
            return bool(low <= float(np.mean(ratios)) <= high)
        return bool(np.all((ratios >= low) & (ratios <= high)))
    raise UsageError(f"unknown criterion {criterion!r}")


def summarize(records, criteria=("dominates",), tolerances=None):
    """
    Aggregate trial records: mean, min, max and quantiles of the ratios, counts, and one verdict
    per criterion. ``passed`` holds when every criterion holds.

    criteria
        ``dominates`` (every valid trial has ``ratio <= 1 + slack``, at least one valid),
        ``all_valid``, ``fraction_valid`` (``fraction``), ``mean_band`` and ``all_band``
        (``band_low``, ``band_high``)
    """
    if not records:
        raise EmptyResult("no trial records to summarize")
    tol = dict(tolerances or {})
    ratios = np.array([rec.ratio for rec in records if rec.ratio is not None], dtype=float)
    finite = ratios[np.isfinite(ratios)]
    summary = {
        "count": len(records),
        "valid": sum(1 for rec in records if rec.valid),
        "errors": sum(1 for rec in records if rec.error is not None),
    }
    if finite.size:
        summary.update(
            mean=float(np.mean(finite)), min=float(np.min(finite)), max=float(np.max(finite))
        )
        for q, value in zip(QUANTILES, np.quantile(finite, QUANTILES)):
            summary[f"q{int(round(q * 100)):02d}"] = float(value)
    checks = {name: _check(name, records, finite, tol) for name in criteria}
    summary["checks"] = checks
    summary["passed"] = all(checks.values())
    return summary


def emit_report(res, fmt, path):
    """
    Write ``res`` as JSON (the full result) or CSV (one row per trial, columns
    ``trial,seed,measured,bound,ratio,valid``)
    """
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(res.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in res.records:
                row = [getattr(rec, col) for col in CSV_COLUMNS]
                writer.writerow(["" if v is None else repr(v) for v in row])
    else:
        raise UsageError(f"unknown report format {fmt!r}")
    log.debug(f"Wrote {fmt} report to {path}")


def load_report(path):
    with open(path, encoding="utf-8") as fh:
        return ExperimentResult.from_dict(json.load(fh))
