"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Command line
============
``eigenshift <subcommand>`` evaluates bounds and skewness quantities on matrix files, checks the
contour calculus, draws ensembles and runs experiments.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy
:platform:      All

.. important::

    Index sets given with ``--S`` are **1-based**: ``--S 1,2`` selects the two largest
    eigenvalues (or singular values). Internally every index is 0-based.

Exit codes are 0 on success, 1 when a check fails and 2 on usage or IO errors.

.. code-block:: bash

    eigenshift bounds --matrix a.json --noise e.json --S 1
    eigenshift contour-check --s 5 --trials 100 --seed 7
    eigenshift experiment run --config cfg.json --out results/
"""
import argparse
import json
import logging
import math
import pathlib
import sys
from dataclasses import dataclass
from typing import Dict
from typing import Optional

import numpy as np

from eigenshift.bounds import classical_bounds
from eigenshift.bounds import eigenspace_bound
from eigenshift.bounds import rectangular_bound
from eigenshift.config import ensemble_spec_from_dict
from eigenshift.config import experiment_config_from_dict
from eigenshift.config import load_json
from eigenshift.config import resolve_threads
from eigenshift.config import spiked_spec_from_dict
from eigenshift.contour import contour_check
from eigenshift.ensembles import gen_spiked_samples
from eigenshift.ensembles import gen_symmetric_noise
from eigenshift.exceptions import EigenshiftError
from eigenshift.exceptions import UsageError
from eigenshift.experiments import emit_report
from eigenshift.experiments import run_experiment
from eigenshift.matrix_io import read_matrix
from eigenshift.matrix_io import write_matrix
from eigenshift.skewness import rect_skew_xyw
from eigenshift.skewness import select_neighborhood
from eigenshift.skewness import select_singular_neighborhood
from eigenshift.skewness import singular_selection
from eigenshift.skewness import skew_xyw
from eigenshift.skewness import skewness_report
from eigenshift.skewness import spectral_gaps
from eigenshift.spectral_core import check_selection
from eigenshift.spectral_core import decompose_rectangular
from eigenshift.spectral_core import decompose_symmetric
from eigenshift.spectral_core import operator_norm
from eigenshift.spectral_core import perturbed_distance
from eigenshift.spectral_core import perturbed_magnitude_distance
from eigenshift.spectral_core import perturbed_singular_distance
from eigenshift.spectral_core import singular_order

# Globals
log = logging.getLogger(__name__)

SUBCOMMANDS = ("bounds", "quantities", "contour-check", "ensemble", "experiment")
MODES = ("leading_p", "singular_p", "general_S", "rectangular")
LOG_LEVELS = ("debug", "info", "warning", "error")


class _Parser(argparse.ArgumentParser):
    """
    Raises :class:`~eigenshift.exceptions.UsageError` instead of exiting
    """

    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class Invocation:
    subcommand: str
    options: Dict[str, object]
    config_path: Optional[str] = None


def _index_set(text):
    try:
        idx = tuple(int(v) - 1 for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 1-based indices, got {text!r}") from exc
    if not idx or min(idx) < 0:
        raise argparse.ArgumentTypeError(f"expected 1-based indices, got {text!r}")
    return idx


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write JSON (or the result directory) here")
    common.add_argument("--seed", type=int, help="master seed; generated and printed if omitted")
    common.add_argument("--threads", type=int, help="worker threads (or EIGENSHIFT_THREADS)")
    common.add_argument("--log-level", choices=LOG_LEVELS, default="warning")

    parser = _Parser(prog="eigenshift", description="Skewness-based matrix perturbation bounds")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    for name in ("bounds", "quantities"):
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument("--matrix", required=True, help="signal matrix (.json or .csv)")
        cmd.add_argument("--noise", required=True, help="noise matrix (.json or .csv)")
        cmd.add_argument("--S", required=True, type=_index_set, help="1-based indices, e.g. 1,2")
        cmd.add_argument("--lambda-bar", type=float, help="neighbourhood radius")
        cmd.add_argument("--mode", choices=MODES, default="leading_p")

    cmd = sub.add_parser("contour-check", parents=[common])
    cmd.add_argument("--s", type=int, required=True, help="number of poles minus one")
    cmd.add_argument("--trials", type=int, default=100)
    cmd.add_argument("--tol", type=float, default=1e-8)

    cmd = sub.add_parser("ensemble", parents=[common])
    cmd.add_argument("--spec", required=True, help="ensemble or spiked model JSON")
    cmd.add_argument("--trial", type=int, default=0)

    cmd = sub.add_parser("experiment", parents=[common])
    cmd.add_argument("action", choices=("run",))
    cmd.add_argument("--config", required=True, help="experiment JSON")
    return parser


def parse_invocation(argv):
    """
    Parse ``argv`` (without the program name) into an :class:`Invocation`
    """
    ns = build_parser().parse_args(argv)
    if ns.subcommand is None:
        raise UsageError(f"a subcommand is required: {', '.join(SUBCOMMANDS)}")
    options = {k: v for k, v in vars(ns).items() if k != "subcommand"}
    config_path = options.get("config") or options.get("spec")
    return Invocation(subcommand=ns.subcommand, options=options, config_path=config_path)


def _fmt(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _table(rows):
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {_fmt(value)}" for name, value in rows)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fresh_seed():
    seed = int(np.random.SeedSequence().entropy % 2**63)
    print(f"seed: {seed}")
    return seed


def _seed(opts, data=None):
    if opts.get("seed") is not None:
        return opts["seed"]
    if data is not None and "seed" in data:
        return int(data["seed"])
    return _fresh_seed()


# pylint: disable=too-many-leading-hastag-for-block-comment
### SUBCOMMANDS ####################################################################################


def _default_radius(values, S):
    lam = float(np.min(np.abs(np.asarray(values)[list(S)])))
    if lam == 0.0:
        raise UsageError("--lambda-bar is required when S holds a zero value")
    return lam / 2.0


def _symmetric_bound(A, E, S, mode, lambda_bar):
    spec = decompose_symmetric(A)
    S = check_selection(S, spec.n)
    p = len(S)
    if mode == "leading_p" and S != tuple(range(p)):
        raise UsageError("--mode leading_p needs --S 1,...,p")
    if mode == "singular_p":
        S = singular_order(spec).leading(p)
    radius = lambda_bar or _default_radius(spec.eigenvalues, S)
    if mode == "singular_p":
        sel = singular_selection(spec, p, radius)
        measured = perturbed_magnitude_distance(A, E, p)
    else:
        sel = select_neighborhood(spec, S, radius)
        measured = perturbed_distance(A, E, S)
    gaps = spectral_gaps(spec, sel.S, p=p)
    report = eigenspace_bound(mode, skew_xyw(spec, E, sel), sel, gaps)
    return report, measured, classical_bounds(operator_norm(E), gaps.delta_S)


def _rectangular_bound(A, E, S, sigma_bar):
    rs = decompose_rectangular(A)
    S = check_selection(S, rs.k)
    radius = sigma_bar or _default_radius(rs.values, S)
    sel = select_singular_neighborhood(rs, S, radius)
    gaps = spectral_gaps(None, sel.S, values=rs.values)
    report = rectangular_bound(rect_skew_xyw(rs, E, sel), sel, gaps)
    measured = max(perturbed_singular_distance(A, E, S))
    return report, measured, classical_bounds(operator_norm(E), gaps.delta_S)


def _run_bounds(opts):
    A, E = read_matrix(opts["matrix"]), read_matrix(opts["noise"])
    S = tuple(sorted(opts["S"]))
    if opts["mode"] == "rectangular":
        report, measured, classical = _rectangular_bound(A, E, S, opts["lambda_bar"])
    else:
        report, measured, classical = _symmetric_bound(A, E, S, opts["mode"], opts["lambda_bar"])
    rows = [("method", report.method), ("value", report.value)]
    rows += list(report.terms.items())
    if report.assumption is not None:
        rows += [(f"{report.assumption.kind} {k}", v) for k, v in report.assumption.terms.items()]
    rows += [("verdict", "valid" if report.valid else "invalid"), ("measured", measured)]
    rows += list(classical.items())
    print(_table(rows))
    if opts.get("out"):
        payload = {"report": report.to_dict(), "measured": measured, "classical": classical}
        _write_json(opts["out"], payload)
    violated = report.valid and measured > report.value
    if violated:
        log.error(f"Measured distance {measured!r} exceeds the bound {report.value!r}")
    return 1 if violated else 0


def _run_quantities(opts):
    A, E = read_matrix(opts["matrix"]), read_matrix(opts["noise"])
    S = tuple(sorted(opts["S"]))
    spec = decompose_symmetric(A)
    S = check_selection(S, spec.n)
    radius = opts["lambda_bar"] or _default_radius(spec.eigenvalues, S)
    sel = select_neighborhood(spec, S, radius)
    gaps = spectral_gaps(spec, S)
    report = skewness_report(spec, E, sel, gaps=gaps)
    values = {k: v for k, v in report.to_dict().items() if v is not None}
    values.update(r=sel.r, lambda_bar=sel.lambda_bar, delta_p=gaps.delta_p)
    print(_table(sorted(values.items())))
    if opts.get("out"):
        _write_json(opts["out"], values)
    return 0


def _run_contour_check(opts):
    seed = _seed(opts)
    verdicts = contour_check(opts["s"], opts["trials"], seed, tol=opts["tol"])
    matched = sum(1 for v in verdicts if v["match"])
    rows = [
        ("s", opts["s"]),
        ("trials", len(verdicts)),
        ("matched", matched),
        ("max error", max(v["error"] for v in verdicts)),
    ]
    print(_table(rows))
    if opts.get("out"):
        _write_json(opts["out"], verdicts)
    return 0 if matched == len(verdicts) else 1


def _run_ensemble(opts):
    data = load_json(opts["spec"])
    data["seed"] = _seed(opts, data)
    if "n_samples" in data:
        spec = spiked_spec_from_dict(data)
        E = gen_spiked_samples(spec, trial=opts["trial"]).E
        rows = [("kind", "spiked"), ("d", spec.d), ("n_samples", spec.n_samples)]
        size = spec.d
    else:
        spec = ensemble_spec_from_dict(data)
        E = gen_symmetric_noise(spec, trial=opts["trial"])
        rows = [("kind", spec.kind), ("n", spec.n)]
        size = spec.n
    E_norm = operator_norm(E)
    rows += [("seed", spec.seed), ("norm", E_norm), ("norm / sqrt(n)", E_norm / math.sqrt(size))]
    print(_table(rows))
    if opts.get("out"):
        write_matrix(E, opts["out"])
    return 0


def _run_experiment(opts):
    data = load_json(opts["config"])
    data["seed"] = _seed(opts, data)
    cfg = experiment_config_from_dict(data)
    res = run_experiment(cfg, threads=resolve_threads(opts.get("threads")))
    summary = res.summary
    rows = [("kind", res.kind), ("seed", res.seed)]
    rows += [(k, summary[k]) for k in ("count", "valid", "errors", "mean", "max") if k in summary]
    rows += [(f"check {k}", v) for k, v in summary["checks"].items()]
    rows.append(("passed", res.passed))
    print(_table(rows))
    if opts.get("out"):
        out = pathlib.Path(opts["out"])
        out.mkdir(parents=True, exist_ok=True)
        emit_report(res, "json", out / "result.json")
        emit_report(res, "csv", out / "result.csv")
    return 0 if res.passed else 1


_HANDLERS = {
    "bounds": _run_bounds,
    "quantities": _run_quantities,
    "contour-check": _run_contour_check,
    "ensemble": _run_ensemble,
    "experiment": _run_experiment,
}


def run(inv):
    """
    Dispatch ``inv`` and return the exit code
    """
    try:
        return _HANDLERS[inv.subcommand](inv.options)
    except (EigenshiftError, OSError) as exc:
        log.error(f"{inv.subcommand} failed: {exc}")
        print(f"eigenshift: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    try:
        inv = parse_invocation(argv)
    except UsageError as exc:
        print(f"eigenshift: usage error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=inv.options["log_level"].upper(),
        format="%(asctime)s %(levelname)-8s %(name)s: %(message)s",
    )
    return run(inv)
