import csv
import math

import numpy as np
import pytest

from eigenshift.ensembles import gen_hidden_cliques
from eigenshift.exceptions import EmptyResult
from eigenshift.exceptions import UsageError
from eigenshift.experiments import CSV_COLUMNS
from eigenshift.experiments import ExperimentConfig
from eigenshift.experiments import TrialRecord
from eigenshift.experiments import dk_pair
from eigenshift.experiments import emit_report
from eigenshift.experiments import load_report
from eigenshift.experiments import recover_clique
from eigenshift.experiments import run_experiment
from eigenshift.experiments import run_trial
from eigenshift.experiments import sharpness_case
from eigenshift.experiments import summarize
from eigenshift.experiments import trial_seed
from eigenshift.experiments import validate_config
from eigenshift.spectral_core import perturbed_distance


def _records(ratios, valid=True):
    return [
        TrialRecord(trial=i, seed=i, measured=r, bound=1.0, ratio=r, valid=valid)
        for i, r in enumerate(ratios)
    ]


def test_trial_seed_is_stable():
    assert trial_seed(7, 3) == trial_seed(7, 3)
    assert trial_seed(7, 3) != trial_seed(7, 4)
    assert trial_seed(7, 3) != trial_seed(8, 3)


def test_dk_pair():
    A, E = dk_pair(1e-3)
    np.testing.assert_allclose(np.diag(A), [1.0, 0.999, 0.998, 0.997, 0.996, 0.5])
    np.testing.assert_allclose(np.diag(E), [0.0, 5e-3, 5e-3, 0.0, 0.0, 0.0])
    assert dk_pair(1e-3, n=9)[0].shape == (9, 9)
    for eps, n in ((0.2, 6), (0.0, 6), (1e-3, 5)):
        with pytest.raises(UsageError):
            dk_pair(eps, n)


@pytest.mark.parametrize("case", ["noise", "x", "y"])
def test_sharpness_case_closed_forms(case):
    A, E, closed, lam = sharpness_case(case, 100)
    assert A[0, 0] == lam
    assert np.array_equal(E, E.T)
    assert perturbed_distance(A, E, (0,)) == pytest.approx(closed, abs=1e-9)


def test_sharpness_case_errors():
    with pytest.raises(UsageError):
        sharpness_case("z", 100)
    with pytest.raises(UsageError):
        sharpness_case("noise", 100, dim=2)


def test_recover_clique():
    planted = gen_hidden_cliques(400, [100], seed=5)
    assert set(recover_clique(planted.A_tilde, 100)) == set(range(100))


def test_summarize_single_record():
    summary = summarize(_records([0.5]))
    assert summary["count"] == 1
    assert summary["mean"] == summary["min"] == summary["max"] == 0.5
    assert all(summary[q] == 0.5 for q in ("q05", "q25", "q50", "q75", "q95"))
    assert summary["passed"]


def test_summarize_quantiles():
    ratios = [k / 10.0 for k in range(11)]
    summary = summarize(_records(ratios[::-1]))
    assert summary["q05"] == pytest.approx(0.05)
    assert summary["q25"] == pytest.approx(0.25)
    assert summary["q50"] == pytest.approx(0.5)
    assert summary["q75"] == pytest.approx(0.75)
    assert summary["q95"] == pytest.approx(0.95)
    assert summary["mean"] == pytest.approx(0.5)


def test_summarize_criteria():
    assert summarize(_records([1.0 + 1e-13]), tolerances={"slack": 1e-12})["passed"]
    assert not summarize(_records([1.01]), tolerances={"slack": 1e-12})["passed"]
    # no valid trial cannot dominate
    assert not summarize(_records([0.5], valid=False))["passed"]

    mixed = _records([0.5] * 9) + _records([0.5], valid=False)
    assert summarize(mixed, ("fraction_valid",), {"fraction": 0.85})["passed"]
    assert not summarize(mixed, ("all_valid",))["passed"]

    band = {"band_low": 0.85, "band_high": 1.15}
    assert summarize(_records([0.9, 1.1]), ("mean_band",), band)["passed"]
    assert not summarize(_records([0.9, 1.1]), ("all_band",), {**band, "band_high": 1.05})[
        "passed"
    ]
    errored = [TrialRecord(trial=0, seed=0, error="UsageError: boom")]
    summary = summarize(errored, ("mean_band",), band)
    assert summary["errors"] == 1
    assert "mean" not in summary
    assert not summary["passed"]


def test_summarize_errors():
    with pytest.raises(EmptyResult):
        summarize([])
    with pytest.raises(UsageError):
        summarize(_records([0.5]), ("median",))


@pytest.mark.parametrize(
    "cfg",
    [
        ExperimentConfig(kind="frobnicate"),
        ExperimentConfig(kind="dk_sharpness_s13", trials=0),
        ExperimentConfig(kind="dk_sharpness_s13", parameters={"size": 3}),
        ExperimentConfig(kind="hidden_cliques", tolerances={"fraction": 0.0}),
    ],
)
def test_validate_config(cfg):
    with pytest.raises(UsageError):
        validate_config(cfg)


def test_trial_errors_are_recorded():
    rec = run_trial("dk_sharpness_s13", {"eps": (0.5,), "n": 6}, seed=1, trial=0)
    assert not rec.valid
    assert rec.error.startswith("UsageError:")
    assert rec.measured is None


def test_dk_experiment():
    cfg = ExperimentConfig(kind="dk_sharpness_s13", parameters={"eps": (1e-3, 1e-2)}, trials=4)
    res = run_experiment(cfg)
    assert res.passed
    for rec in res.records:
        assert rec.measured == pytest.approx(1.0, abs=1e-12)
        assert rec.bound == pytest.approx(10.0)
    assert [rec.values["eps"] for rec in res.records] == [1e-3, 1e-2, 1e-3, 1e-2]


def test_threads_do_not_change_results():
    cfg = ExperimentConfig(
        kind="bound_validity", parameters={"n": 40, "spikes": (480.0, 280.0)}, trials=6, seed=9
    )
    serial = run_experiment(cfg, threads=1)
    parallel = run_experiment(cfg, threads=3)
    assert serial.records == parallel.records
    assert serial.summary == parallel.summary


def test_jw_experiment():
    res = run_experiment(ExperimentConfig(kind="jw_comparison", trials=4))
    assert res.passed
    assert all(0 < rec.ratio < 1 for rec in res.records)


def test_reports(tmp_path):
    res = run_experiment(ExperimentConfig(kind="dk_sharpness_s13", trials=2, seed=3))
    emit_report(res, "json", tmp_path / "result.json")
    assert load_report(tmp_path / "result.json") == res
    assert (tmp_path / "result.json").read_text(encoding="utf-8").endswith("}\n")

    emit_report(res, "csv", tmp_path / "result.csv")
    with open(tmp_path / "result.csv", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 3
    assert float(rows[1][2]) == pytest.approx(1.0)
    assert math.isclose(float(rows[1][3]), 10.0)

    with pytest.raises(UsageError):
        emit_report(res, "xml", tmp_path / "result.xml")
