import math

import numpy as np
import pytest

from eigenshift.eigenvalues import augment_with_zero
from eigenshift.eigenvalues import condition_guard
from eigenshift.eigenvalues import dw_outlier
from eigenshift.eigenvalues import least_singular_floor
from eigenshift.eigenvalues import lower_eigen_shift
from eigenshift.eigenvalues import upper_eigen_shift
from eigenshift.exceptions import InvalidSelection
from eigenshift.exceptions import SingularInput
from eigenshift.exceptions import UsageError
from eigenshift.skewness import SkewnessReport
from eigenshift.skewness import select_neighborhood
from eigenshift.skewness import skew_xyw
from eigenshift.spectral_core import decompose_symmetric


@pytest.fixture
def spec():
    return decompose_symmetric(np.diag([100.0, 50.0, 0.0, 0.0]))


def test_lower_shift_certificate(spec):
    sk = SkewnessReport(x=0.1, y=0.01, w=0.5, E_norm=1.0)
    cert = lower_eigen_shift(spec, sk, 1, 50.0, r=2)
    assert cert.delta_internal == pytest.approx(2.4)
    assert cert.bound == pytest.approx(1.2)
    assert cert.direction == "lower"
    assert cert.valid
    assert cert.failed() == []
    assert cert.to_dict()["target"] == 0


def test_lower_shift_reports_failed_hypothesis(spec):
    sk = SkewnessReport(x=0.1, y=0.01, w=0.5, E_norm=10.0)
    cert = lower_eigen_shift(spec, sk, 1, 50.0)
    assert not cert.valid
    assert "lambda_bar >= 12||E||" in cert.failed()


def test_lower_shift_rejects_p(spec):
    sk = SkewnessReport(x=0.1, y=0.01, w=0.5, E_norm=1.0)
    with pytest.raises(InvalidSelection):
        lower_eigen_shift(spec, sk, 4, 50.0)


def test_upper_shift_forms(spec):
    sk = SkewnessReport(x=0.1, y=0.01, w=0.5, E_norm=1.0)
    top = upper_eigen_shift(spec, sk, form="top")
    assert top.delta_internal == pytest.approx(2.88)
    assert top.valid
    general = upper_eigen_shift(spec, sk, lambda_bar=50.0)
    assert general.delta_internal == pytest.approx(2.4)
    assert general.valid
    with pytest.raises(UsageError):
        upper_eigen_shift(spec, sk, lambda_bar=50.0, form="middle")
    with pytest.raises(UsageError):
        upper_eigen_shift(spec, sk)


def test_shift_certificates_hold_on_a_sample(rng):
    n = 60
    Q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
    A = (Q * np.array([4000.0, 2500.0])) @ Q.T
    G = rng.standard_normal((n, n))
    E = (G + G.T) / 2.0
    spec = decompose_symmetric(A)
    sel = select_neighborhood(spec, (0,), 2000.0)
    sk = skew_xyw(spec, E, sel)
    lower = lower_eigen_shift(spec, sk, 1, 2000.0, r=sel.r)
    upper = upper_eigen_shift(spec, sk, lambda_bar=2000.0, r=sel.r)
    assert lower.valid and upper.valid
    shift = np.linalg.eigvalsh(A + E)[-1] - spec.eigenvalues[0]
    assert -lower.bound <= shift <= upper.bound


def test_augment_with_zero(rng):
    M = rng.standard_normal((3, 3))
    aug = augment_with_zero(M)
    assert aug.shape == (4, 4)
    assert np.all(aug[3] == 0) and np.all(aug[:, 3] == 0)
    sv = np.linalg.svd(aug, compute_uv=False)
    np.testing.assert_allclose(sv[:3], np.linalg.svd(M, compute_uv=False), atol=1e-12)
    assert sv[3] == pytest.approx(0.0, abs=1e-12)


def test_least_singular_floor():
    spec = decompose_symmetric(np.diag([1e4, 2.0, 1.0, -1e4]))
    floor = least_singular_floor(spec, np.zeros((4, 4)), 10.0)
    assert floor.r_T == 2
    assert floor.x_T == 0.0
    assert floor.sigma_min == 1.0
    assert floor.lhs == 0.0
    assert floor.guaranteed

    noisy = np.zeros((4, 4))
    noisy[1, 2] = noisy[2, 1] = 0.5
    floor = least_singular_floor(spec, noisy, 10.0)
    assert floor.x_T == pytest.approx(0.5)
    assert not floor.guaranteed


def test_least_singular_floor_errors():
    singular = decompose_symmetric(np.diag([1.0, 0.0]))
    with pytest.raises(SingularInput):
        least_singular_floor(singular, np.zeros((2, 2)), 1.0)
    spec = decompose_symmetric(np.diag([1.0, 2.0]))
    with pytest.raises(UsageError):
        least_singular_floor(spec, np.zeros((2, 2)), 0.0)


def test_condition_guard_without_noise():
    spec = decompose_symmetric(np.diag([1e4, 2.0, 1.0, -1e4]))
    guard = condition_guard(spec, np.zeros((4, 4)), 10.0)
    assert guard.kappa_ratio_bound == pytest.approx(1.0)
    assert guard.valid
    assert guard.sigma_max == 1e4


def test_dw_outlier():
    out = dw_outlier(30.0, 100, 0.5)
    assert out.prediction == pytest.approx(100.0 / 30.0)
    assert out.correction_bound == pytest.approx(100.0 / 30.0 + 0.5)
    assert not out.regime_ok
    assert dw_outlier(480.0, 100, 0.0).regime_ok
    assert dw_outlier(100.0, 100, 0.0, E_norm=4.0).regime_ok
    with pytest.raises(UsageError):
        dw_outlier(-1.0, 100, 0.0)
    assert math.isclose(dw_outlier(3 * math.sqrt(400), 400, 0.0).prediction, math.sqrt(400) / 3)
