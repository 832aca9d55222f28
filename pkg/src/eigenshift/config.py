"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Configuration
=============
Loads JSON documents describing experiments and random ensembles into the frozen dataclasses of
:mod:`eigenshift.experiments` and :mod:`eigenshift.ensembles`, and resolves the worker count.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy
:platform:      All
"""
import json
import logging
import os

import numpy as np

from eigenshift.ensembles import EnsembleSpec
from eigenshift.ensembles import SpikedModelSpec
from eigenshift.exceptions import IncompleteInput
from eigenshift.exceptions import UsageError
from eigenshift.experiments import ExperimentConfig
from eigenshift.experiments import validate_config

# Globals
log = logging.getLogger(__name__)

THREADS_ENV = "EIGENSHIFT_THREADS"

_EXPERIMENT_KEYS = {"kind", "parameters", "trials", "seed", "tolerances"}
_ENSEMBLE_KEYS = {
    "kind",
    "n",
    "entry_dist",
    "variance_profile",
    "seed",
    "comparability",
    "bound",
    "truncation",
}
_SPIKED_KEYS = {"M", "d", "spikes", "n_samples", "entry_dist", "seed"}


def load_json(path):
    """
    Read a JSON document; a malformed file raises :class:`~eigenshift.exceptions.UsageError`,
    IO errors propagate
    """
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            log.error(f"Could not parse {path}: {exc}")
            raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object")
    return data


def _check_keys(data, allowed, required, context):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise UsageError(f"unknown {context} keys: {', '.join(unknown)}")
    missing = [key for key in required if key not in data]
    if missing:
        raise IncompleteInput(missing, context)


def experiment_config_from_dict(data):
    _check_keys(data, _EXPERIMENT_KEYS, ("kind",), "experiment")
    cfg = ExperimentConfig(
        kind=str(data["kind"]),
        parameters=dict(data.get("parameters", {})),
        trials=int(data.get("trials", 1)),
        seed=int(data.get("seed", 0)),
        tolerances={k: float(v) for k, v in data.get("tolerances", {}).items()},
    )
    return validate_config(cfg)


def ensemble_spec_from_dict(data):
    _check_keys(data, _ENSEMBLE_KEYS, ("kind", "n"), "ensemble")
    fields = dict(data)
    if fields.get("variance_profile") is not None:
        fields["variance_profile"] = np.asarray(fields["variance_profile"], dtype=float)
    fields["n"] = int(fields["n"])
    return EnsembleSpec(**fields).validate()


def spiked_spec_from_dict(data):
    """
    Build a :class:`~eigenshift.ensembles.SpikedModelSpec`.

    The covariance is either given in full as ``M`` or as ``d`` and ``spikes``, which yields
    ``diag(spikes, 1, ..., 1)``.
    """
    _check_keys(data, _SPIKED_KEYS, ("n_samples",), "spiked model")
    if "M" in data:
        if "d" in data or "spikes" in data:
            raise UsageError("give either M or d with spikes, not both")
        M = np.asarray(data["M"], dtype=float)
    elif "d" in data and "spikes" in data:
        M = np.eye(int(data["d"]))
        spikes = np.asarray(data["spikes"], dtype=float)
        if spikes.shape[0] > M.shape[0]:
            raise UsageError(f"{spikes.shape[0]} spikes do not fit d={M.shape[0]}")
        M[np.arange(spikes.shape[0]), np.arange(spikes.shape[0])] = spikes
    else:
        raise IncompleteInput(["M"], "spiked model")
    return SpikedModelSpec(
        M=M,
        n_samples=int(data["n_samples"]),
        entry_dist=data.get("entry_dist", "gaussian"),
        seed=int(data.get("seed", 0)),
    )


def resolve_threads(flag=None, environ=None):
    """
    Worker count: the ``--threads`` flag, then ``EIGENSHIFT_THREADS``, then 1
    """
    environ = os.environ if environ is None else environ
    if flag is not None:
        value, source = flag, "--threads"
    elif environ.get(THREADS_ENV):
        value, source = environ[THREADS_ENV], THREADS_ENV
    else:
        return 1
    try:
        threads = int(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{source} must be an integer, got {value!r}") from exc
    if threads < 1:
        raise UsageError(f"{source} must be at least 1, got {threads}")
    log.debug(f"Using {threads} worker thread(s) from {source}")
    return threads
