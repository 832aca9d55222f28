import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from eigenshift.exceptions import DegenerateGap
from eigenshift.exceptions import DimensionError
from eigenshift.exceptions import InvalidRadius
from eigenshift.exceptions import InvalidSelection
from eigenshift.experiments import sharpness_case
from eigenshift.skewness import rect_skew_xyw
from eigenshift.skewness import select_neighborhood
from eigenshift.skewness import select_singular_neighborhood
from eigenshift.skewness import singular_selection
from eigenshift.skewness import skew_aux
from eigenshift.skewness import skew_xyw
from eigenshift.skewness import skewness_report
from eigenshift.skewness import spectral_gaps
from eigenshift.spectral_core import Spectrum
from eigenshift.spectral_core import decompose_rectangular
from eigenshift.spectral_core import decompose_symmetric
from eigenshift.spectral_core import operator_norm


@pytest.fixture
def diag_spec():
    return decompose_symmetric(np.diag([10.0, 9.0, 1.0, 0.0]))


def test_select_neighborhood(diag_spec):
    sel = select_neighborhood(diag_spec, (0,), 2.0)
    assert sel.N == (0, 1)
    assert sel.p == 1
    assert sel.r == 2
    assert sel.outside == (2, 3)
    wide = select_neighborhood(diag_spec, (0,), 10.0)
    assert wide.r == 4


@pytest.mark.parametrize("radius", [0.0, -1.0])
def test_select_neighborhood_rejects_radius(diag_spec, radius):
    with pytest.raises(InvalidRadius):
        select_neighborhood(diag_spec, (0,), radius)


def test_singular_selection_uses_absolute_values():
    spec = decompose_symmetric(np.diag([3.0, 1.0, -5.0]))
    sel = singular_selection(spec, 1, 1.0)
    # -5 sits at position 2 of the descending spectrum
    assert sel.S == (2,)
    assert sel.N == (2,)


def test_spectral_gaps(diag_spec):
    gaps = spectral_gaps(diag_spec, (0,))
    assert gaps.delta_S == 1.0
    assert gaps.delta_p == 1.0
    assert gaps.delta_paren == 1.0
    assert gaps.delta_bar_p == 1.0
    assert gaps.delta == 1.0

    gaps = spectral_gaps(diag_spec, (0, 1))
    assert gaps.delta_S == 8.0
    assert gaps.delta_p == 8.0
    assert gaps.delta_paren == 1.0

    with pytest.raises(InvalidRadius):
        spectral_gaps(diag_spec, (0,), delta=2.0)


def test_delta_bar_p_follows_singular_order():
    spec = decompose_symmetric(np.diag([3.0, 1.0, -3.0]))
    # largest two magnitudes are 3 and -3, bordering 1 at distance 2
    assert spectral_gaps(spec, (0,), p=2).delta_bar_p == 2.0
    gaps = spectral_gaps(spec, (0,), p=1, values=np.array([5.0, 2.0, -5.0]))
    assert gaps.delta_bar_p == 3.0


def test_spectral_gaps_degenerate():
    spec = decompose_symmetric(np.diag([1.0, 1.0, 0.0]))
    with pytest.raises(DegenerateGap):
        spectral_gaps(spec, (0,))


def test_skew_xyw_by_hand(diag_spec, diagonal_problem):
    _, E = diagonal_problem
    sel = select_neighborhood(diag_spec, (0,), 2.0)
    sk = skew_xyw(diag_spec, E, sel)
    assert sk.x == pytest.approx(0.5)
    assert sk.w == pytest.approx(math.sqrt(0.34))
    # only l = 2 couples both neighbours: 0.3 * 0.2 / (10 - 1)
    assert sk.y == pytest.approx(0.06 / 9.0)
    assert sk.E_norm == pytest.approx(np.linalg.norm(E, 2))
    assert (sk.p, sk.r, sk.lambda_bar) == (1, 2, 2.0)


def test_skew_xyw_kset_must_lie_in_S(diag_spec, diagonal_problem):
    _, E = diagonal_problem
    sel = select_neighborhood(diag_spec, (0,), 2.0)
    with pytest.raises(InvalidSelection):
        skew_xyw(diag_spec, E, sel, kset=(1,))
    with pytest.raises(DimensionError):
        skew_xyw(diag_spec, np.zeros((3, 3)), sel)


def test_skew_xyw_no_outside_means_no_y(diag_spec, diagonal_problem):
    _, E = diagonal_problem
    sel = select_neighborhood(diag_spec, (0,), 100.0)
    assert skew_xyw(diag_spec, E, sel).y == 0.0


def test_skew_aux_and_report(diag_spec, diagonal_problem):
    _, E = diagonal_problem
    sel = select_neighborhood(diag_spec, (0,), 2.0)
    aux = skew_aux(diag_spec, E, sel)
    assert aux.xbar == pytest.approx(0.5)
    assert aux.sigma == 10.0
    # E^2 restricted to N = {0, 1}: off-diagonal entry is 0.3 * 0.2
    assert aux.ybar == pytest.approx(0.06)

    report = skewness_report(diag_spec, E, sel)
    assert report.delta_S == 1.0
    assert report.x == pytest.approx(0.5)
    assert report.xbar == pytest.approx(0.5)
    assert set(report.to_dict()) >= {"x", "y", "w", "xbar", "ybar", "sigma", "delta_S"}


def test_rect_skew_xyw(rng):
    left, _ = np.linalg.qr(rng.standard_normal((5, 2)))
    right, _ = np.linalg.qr(rng.standard_normal((7, 2)))
    A = (left * np.array([50.0, 30.0])) @ right.T
    E = 0.1 * rng.standard_normal((5, 7))
    rs = decompose_rectangular(A)
    sel = select_singular_neighborhood(rs, (0,), 25.0)
    assert sel.N == (0, 1)
    sk = rect_skew_xyw(rs, E, sel)
    assert 0.0 <= sk.x <= operator_norm(E) + 1e-12
    assert 0.0 <= sk.w <= operator_norm(E) + 1e-12
    assert sk.y >= 0.0
    with pytest.raises(DimensionError):
        rect_skew_xyw(rs, np.zeros((7, 5)), sel)


def _planted(n, values, rng):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (Q * np.asarray(values)) @ Q.T


def _naive_xyw(spec, E, sel):
    U = np.asarray(spec.eigenvectors)
    lam = np.asarray(spec.eigenvalues)
    n = spec.n
    form = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            form[a, b] = U[:, a] @ E @ U[:, b]
    x = max(abs(form[i, j]) for i in sel.N for j in sel.N)
    w = max(np.linalg.norm(E @ U[:, i]) for i in sel.N)
    y = 0.0
    for k in sel.S:
        for i in sel.N:
            for j in sel.N:
                if i == j:
                    continue
                total = 0.0
                for l in sel.outside:
                    total += form[i, l] * form[l, j] / (lam[k] - lam[l])
                y = max(y, abs(total))
    return x, y, w


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("n", [6, 15, 30])
def test_skew_xyw_matches_triple_loops(seed, n):
    rng = np.random.default_rng(seed)
    values = np.concatenate([[10.0, 9.4, 8.9], np.linspace(4.0, -4.0, n - 3)])
    spec = decompose_symmetric(_planted(n, values, rng))
    G = rng.standard_normal((n, n))
    E = 0.1 * (G + G.T)
    sel = select_neighborhood(spec, (0, 1), 1.5)
    assert sel.N == (0, 1, 2)
    sk = skew_xyw(spec, E, sel)
    x, y, w = _naive_xyw(spec, E, sel)
    assert sk.x == pytest.approx(x, rel=1e-10, abs=1e-12)
    assert sk.y == pytest.approx(y, rel=1e-10, abs=1e-12)
    assert sk.w == pytest.approx(w, rel=1e-10, abs=1e-12)


def test_skew_xyw_ignores_eigenvector_signs(rng):
    spec = decompose_symmetric(_planted(8, [9.0, 8.0, 3.0, 2.0, 1.0, 0.0, -1.0, -2.0], rng))
    G = rng.standard_normal((8, 8))
    E = 0.1 * (G + G.T)
    signs = np.where(rng.standard_normal(8) > 0, 1.0, -1.0)
    flipped = Spectrum(eigenvalues=spec.eigenvalues, eigenvectors=spec.eigenvectors * signs)
    sel = select_neighborhood(spec, (0,), 1.5)
    base = skew_xyw(spec, E, sel)
    other = skew_xyw(flipped, E, sel)
    for name in ("x", "y", "w"):
        assert getattr(other, name) == pytest.approx(getattr(base, name), rel=1e-12, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(3, 12),
    radius=st.floats(0.1, 3.0),
    scale=st.floats(1e-3, 5.0),
)
def test_y_respects_trivial_estimate(seed, n, radius, scale):
    gen = np.random.default_rng(seed)
    G = gen.standard_normal((n, n))
    H = gen.standard_normal((n, n))
    spec = decompose_symmetric(G + G.T)
    sel = select_neighborhood(spec, (0,), radius)
    sk = skew_xyw(spec, scale * (H + H.T), sel)
    assert sk.y <= sk.E_norm**2 / radius * (1.0 + 1e-12) + 1e-15
    assert sk.x <= sk.E_norm * (1.0 + 1e-12)
    assert sk.w <= sk.E_norm * (1.0 + 1e-12)


def test_y_of_the_third_sharpness_construction():
    A, E, _, lam = sharpness_case("y", 100)
    spec = decompose_symmetric(A)
    sel = select_neighborhood(spec, (0,), lam / 2.0)
    assert sel.N == (0, 1)
    sk = skew_xyw(spec, E, sel)
    assert sk.y == pytest.approx(1.0 / lam, rel=1e-10)
    assert sk.x == pytest.approx(0.0, abs=1e-12)


def _naive_rect_xyw(rs, E, sel):
    U, V, s = np.asarray(rs.left), np.asarray(rs.right), np.asarray(rs.values)
    k = rs.k
    form = np.zeros((k, k))
    for a in range(k):
        for b in range(k):
            form[a, b] = U[:, a] @ E @ V[:, b]
    x = max(abs(form[i, j]) for i in sel.N for j in sel.N)
    w = max(max(np.linalg.norm(E @ V[:, i]), np.linalg.norm(E.T @ U[:, i])) for i in sel.N)
    y = 0.0
    for kk in sel.S:
        for i in sel.N:
            for j in sel.N:
                if i == j:
                    continue
                left = right = 0.0
                for l in sel.outside:
                    d = s[kk] - s[l]
                    left += form[l, i] * form[l, j] / d
                    right += form[i, l] * form[j, l] / d
                y = max(y, abs(left), abs(right))
    return x, y, w


@pytest.mark.parametrize("seed", [3, 4, 5])
def test_rect_skew_xyw_matches_triple_loops(seed):
    rng = np.random.default_rng(seed)
    left, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    right, _ = np.linalg.qr(rng.standard_normal((9, 6)))
    A = (left * np.array([10.0, 9.5, 4.0, 3.0, 2.0, 1.0])) @ right.T
    E = 0.1 * rng.standard_normal((6, 9))
    rs = decompose_rectangular(A)
    sel = select_singular_neighborhood(rs, (0,), 1.0)
    assert sel.N == (0, 1)
    sk = rect_skew_xyw(rs, E, sel)
    x, y, w = _naive_rect_xyw(rs, E, sel)
    assert sk.x == pytest.approx(x, rel=1e-10, abs=1e-12)
    assert sk.y == pytest.approx(y, rel=1e-10, abs=1e-12)
    assert sk.w == pytest.approx(w, rel=1e-10, abs=1e-12)


def test_rect_skew_xyw_single_entry():
    A = np.zeros((3, 4))
    A[0, 0], A[1, 1], A[2, 2] = 5.0, 4.5, 1.0
    E = np.zeros((3, 4))
    E[0, 1] = 0.25
    rs = decompose_rectangular(A)
    sk = rect_skew_xyw(rs, E, select_singular_neighborhood(rs, (0,), 1.0))
    assert sk.x == pytest.approx(0.25)
    zero = rect_skew_xyw(rs, np.zeros((3, 4)), select_singular_neighborhood(rs, (0,), 1.0))
    assert zero.x == zero.y == zero.w == 0.0
