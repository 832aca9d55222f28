import pytest

from eigenshift.experiments import ExperimentConfig
from eigenshift.experiments import run_experiment


@pytest.fixture
def run_kind():
    """
    Run ``trials`` trials of an experiment kind with overridden parameters
    """

    def _run(kind, trials, seed=20261019, threads=1, **parameters):
        cfg = ExperimentConfig(kind=kind, parameters=parameters, trials=trials, seed=seed)
        return run_experiment(cfg, threads=threads)

    return _run
