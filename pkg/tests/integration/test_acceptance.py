import math

import numpy as np
import pytest

from eigenshift.contour import build_profile
from eigenshift.contour import contour_check
from eigenshift.contour import enumerate_compositions
from eigenshift.ensembles import EnsembleSpec
from eigenshift.ensembles import TailBoundQuery
from eigenshift.ensembles import circulant_profile
from eigenshift.ensembles import gen_symmetric_noise
from eigenshift.ensembles import mu_statistic
from eigenshift.ensembles import tail_bound
from eigenshift.experiments import emit_report
from eigenshift.spectral_core import operator_norm


def _contour_equivalence(configurations):
    for s in range(1, 7):
        verdicts = contour_check(s, trials=configurations * s, seed=s)
        assert all(v["match"] for v in verdicts)


def test_contour_equivalence():
    _contour_equivalence(10)


@pytest.mark.slow
def test_contour_equivalence_full():
    _contour_equivalence(200)


@pytest.mark.slow
def test_profile_invariants_on_random_profiles():
    rng = np.random.default_rng(1)
    for _ in range(100_000):
        s = int(rng.integers(1, 12))
        T = int(rng.integers(1, s + 1))
        comps = enumerate_compositions(T, s)
        comp = comps[int(rng.integers(0, len(comps)))]
        g = build_profile(T, s + 1 - T, comp)
        assert len(g.edges) == s
        assert min(g.degrees) >= 1
        assert g.r_c <= T - 1
        assert sum(g.degrees) == g.r_c + len(g.y_positions)


def test_sharpness_constructions(run_kind):
    res = run_kind("sharpness_appendixD", trials=5, ns=(100,))
    assert res.passed
    cases = [rec.values["case"] for rec in res.records]
    assert cases == ["noise", "x", "y", "necessity", "necessity"]
    assert [rec.values["swapped"] for rec in res.records[3:]] == [False, True]


@pytest.mark.slow
def test_sharpness_constructions_full(run_kind):
    res = run_kind("sharpness_appendixD", trials=8)
    assert res.passed


def test_davis_kahan_sharpness(run_kind):
    res = run_kind("dk_sharpness_s13", trials=3, eps=(1e-3, 1e-2, 0.1))
    assert res.passed


@pytest.mark.parametrize("mode", ["leading_p", "general_S", "singular_p", "eigen_shift"])
def test_bound_validity(run_kind, mode):
    res = run_kind("bound_validity", trials=10, mode=mode, n=200)
    assert res.passed
    assert res.summary["valid"] >= 1
    assert res.summary["errors"] == 0


def test_bound_validity_rectangular(run_kind):
    res = run_kind("bound_validity", trials=20, mode="rectangular")
    assert res.passed
    assert res.summary["errors"] == 0


@pytest.mark.slow
@pytest.mark.parametrize("mode", ["leading_p", "general_S", "eigen_shift"])
def test_bound_validity_full(run_kind, mode):
    trials = 1000 if mode != "eigen_shift" else 500
    res = run_kind("bound_validity", trials=trials, threads=4, mode=mode)
    assert res.passed
    assert res.summary["errors"] == 0


def test_least_singular_floor(run_kind):
    res = run_kind("least_singular", trials=5)
    assert res.passed
    assert all(rec.valid for rec in res.records)


def test_deformed_wigner(run_kind):
    res = run_kind("deformed_wigner", trials=20)
    assert res.passed
    assert 0.85 <= res.summary["mean"] <= 1.15


@pytest.mark.slow
def test_deformed_wigner_full(run_kind):
    assert run_kind("deformed_wigner", trials=50, threads=4, n=2000).passed


def test_hidden_cliques(run_kind):
    res = run_kind("hidden_cliques", trials=5)
    assert res.passed


@pytest.mark.slow
def test_hidden_cliques_full(run_kind):
    res = run_kind("hidden_cliques", trials=20, threads=4, n=4000)
    assert res.summary["valid"] >= 18


def test_spiked_rates(run_kind):
    res = run_kind("spiked_rates", trials=10)
    assert res.passed


@pytest.mark.slow
def test_spiked_rates_full(run_kind):
    assert run_kind("spiked_rates", trials=20, threads=4, d=2000, n_samples=2000).passed


def test_decay_comparison(run_kind):
    assert run_kind("jw_comparison", trials=4).passed


@pytest.mark.parametrize("n,trials", [(400, 20), pytest.param(2000, 20, marks=pytest.mark.slow)])
def test_wigner_norm(n, trials):
    inside = 0
    for trial in range(trials):
        E = gen_symmetric_noise(EnsembleSpec(kind="wigner", n=n, seed=3), trial=trial)
        inside += 1.85 <= operator_norm(E) / math.sqrt(n) <= 2.15
    assert inside >= trials - 1


def test_regular_profiles_cancel_mu():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(4, 30))
        weights = rng.uniform(0.0, 2.0, size=int(rng.integers(1, n // 2 + 1)))
        profile = circulant_profile(n, weights)
        Q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
        assert mu_statistic(Q, profile) == pytest.approx(0.0, abs=1e-12 * n * weights.sum())


@pytest.mark.parametrize(
    "n,samples", [(100, 2000), pytest.param(500, 10_000, marks=pytest.mark.slow)]
)
def test_tail_bounds_dominate_empirical_tails(n, samples):
    rng = np.random.default_rng(4)
    Q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
    u, v = Q[:, 0], Q[:, 1]
    uev = np.empty(samples)
    cross = np.empty(samples)
    for trial in range(samples):
        E = gen_symmetric_noise(
            EnsembleSpec(kind="wigner", n=n, entry_dist="rademacher", seed=5), trial=trial
        )
        uev[trial] = u @ E @ v
        cross[trial] = E[:, 0] @ E[:, 1]
    for t in np.linspace(1.0, 5.0, 10):
        q = TailBoundQuery("bernstein_uEv", {"t": t, "sigma": 1.0, "K": math.sqrt(2.0)})
        assert np.mean(np.abs(uev) > t) <= tail_bound(q)
    for t in np.linspace(1.0, 4.0, 10) * math.sqrt(n):
        q = TailBoundQuery("chebyshev_EuEv", {"t": t, "n": n, "m4": 1.0})
        assert np.mean(np.abs(cross) > t) <= tail_bound(q)


KINDS = {
    "bound_validity": {"n": 60, "spikes": (720.0, 420.0)},
    "sharpness_appendixD": {"ns": (100,)},
    "dk_sharpness_s13": {},
    "hidden_cliques": {"n": 400, "size_factors": (6.0, 4.0)},
    "deformed_wigner": {"n": 200},
    "spiked_rates": {"d": 100, "n_samples": 100},
    "jw_comparison": {},
    "least_singular": {"n": 50},
}


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_reports_are_reproducible(run_kind, tmp_path, kind):
    first = run_kind(kind, trials=3, seed=99, **KINDS[kind])
    second = run_kind(kind, trials=3, seed=99, threads=2, **KINDS[kind])
    emit_report(first, "json", tmp_path / "first.json")
    emit_report(second, "json", tmp_path / "second.json")
    assert (tmp_path / "first.json").read_bytes() == (tmp_path / "second.json").read_bytes()
