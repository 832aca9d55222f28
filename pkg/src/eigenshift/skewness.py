"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Skewness quantities
===================
Spectral neighbourhoods, gaps and the skewness quantities ``x``, ``y``, ``w`` (with the auxiliary
``xbar``, ``ybar`` and ``sigma``) that measure how the noise interacts with the important
eigenvectors of the signal.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy
:platform:      All

``y`` is evaluated through the factorization ``W = U_out^T E U_N``: entry ``(i, j)`` for a fixed
``k`` is ``sum_l W[l, i] W[l, j] / (lambda_k - lambda_l)``. This costs ``O(n^2 r)`` for ``W`` and
``O(r^2 (n - r))`` per ``k``.
"""
import logging
import math
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import replace
from typing import Optional
from typing import Tuple

import numpy as np

from eigenshift.exceptions import DegenerateGap
from eigenshift.exceptions import DimensionError
from eigenshift.exceptions import InvalidRadius
from eigenshift.exceptions import InvalidSelection
from eigenshift.spectral_core import Spectrum
from eigenshift.spectral_core import as_matrix
from eigenshift.spectral_core import as_symmetric
from eigenshift.spectral_core import check_selection
from eigenshift.spectral_core import complement
from eigenshift.spectral_core import operator_norm
from eigenshift.spectral_core import singular_order

# Globals
log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Selection:
    """
    Selected indices ``S`` and their spectral neighbourhood ``N`` of radius ``lambda_bar``
    """

    S: Tuple[int, ...]
    lambda_bar: float
    N: Tuple[int, ...]
    n: int

    @property
    def p(self):
        return len(self.S)

    @property
    def r(self):
        return len(self.N)

    @property
    def outside(self):
        return complement(self.N, self.n)


@dataclass(frozen=True)
class GapReport:
    delta_S: float
    delta_p: float
    delta_paren: float
    delta_bar_p: float
    delta: float
    p: int


@dataclass(frozen=True)
class SkewnessReport:
    """
    Skewness quantities for a given signal, noise and selection. Fields that were not computed
    are ``None``.
    """

    x: Optional[float] = None
    y: Optional[float] = None
    w: Optional[float] = None
    xbar: Optional[float] = None
    ybar: Optional[float] = None
    sigma: Optional[float] = None
    E_norm: Optional[float] = None
    p: Optional[int] = None
    r: Optional[int] = None
    lambda_bar: Optional[float] = None
    delta_S: Optional[float] = None

    def merge(self, other):
        """
        Fill the fields that are ``None`` here from ``other``
        """
        updates = {k: v for k, v in asdict(other).items() if getattr(self, k) is None}
        return replace(self, **updates)

    def to_dict(self):
        return asdict(self)


def _neighbourhood(values, S, lambda_bar):
    if not lambda_bar > 0:
        raise InvalidRadius(f"lambda_bar must be positive, got {lambda_bar!r}")
    dist = np.min(np.abs(values[:, None] - values[list(S)][None, :]), axis=1)
    return tuple(int(j) for j in np.flatnonzero(dist <= lambda_bar))


def select_neighborhood(spec, S, lambda_bar):
    """
    Build the selection ``N = {j : |lambda_i - lambda_j| <= lambda_bar for some i in S}``

    spec
        :class:`~eigenshift.spectral_core.Spectrum` of the signal

    S
        selected eigenvalue indices (0-based)

    lambda_bar
        neighbourhood radius, strictly positive
    """
    idx = check_selection(S, spec.n)
    N = _neighbourhood(np.asarray(spec.eigenvalues), idx, lambda_bar)
    log.debug(f"Neighbourhood of S={idx} with radius {lambda_bar!r} has r={len(N)}")
    return Selection(S=idx, lambda_bar=float(lambda_bar), N=N, n=spec.n)


def singular_selection(spec, p, lambda_bar):
    """
    Selection of the ``p`` eigenvalues of largest absolute value
    """
    if not 1 <= p <= spec.n:
        raise InvalidSelection(f"p={p} out of range for dimension {spec.n}")
    S = singular_order(spec).leading(p)
    return select_neighborhood(spec, S, lambda_bar)


def select_singular_neighborhood(rs, S, sigma_bar):
    """
    Neighbourhood over singular values of a :class:`~eigenshift.spectral_core.SingularSpectrum`
    """
    idx = check_selection(S, rs.k)
    N = _neighbourhood(np.asarray(rs.values), idx, sigma_bar)
    return Selection(S=idx, lambda_bar=float(sigma_bar), N=N, n=rs.k)


def _boundary_gap(values, S):
    out = complement(S, values.shape[0])
    if not out:
        raise InvalidSelection("selection must be a proper subset")
    return float(np.min(np.abs(values[list(S)][:, None] - values[list(out)][None, :])))


def spectral_gaps(spec, S, p=None, delta=None, values=None):
    """
    Gap report for the selection ``S``.

    ``delta_p`` and ``delta_paren`` refer to the leading ``p`` eigenvalues (``p`` defaults to
    ``|S|``), ``delta_bar_p`` to the ``p`` eigenvalues of largest absolute value. ``delta`` is the
    contour margin, defaulting to ``delta_S``.
    """
    w = np.asarray(spec.eigenvalues if values is None else values, dtype=float)
    n = w.shape[0]
    idx = check_selection(S, n)
    delta_S = _boundary_gap(w, idx)
    if delta_S == 0.0:
        raise DegenerateGap(f"delta_S = 0 for S={idx}")
    p = len(idx) if p is None else int(p)
    if not 1 <= p <= n:
        raise InvalidSelection(f"p={p} out of range for dimension {n}")

    def _delta(k):
        # delta_k = lambda_k - lambda_{k+1} in 1-based terms; delta_0 = delta_n = inf
        if k <= 0 or k >= n:
            return math.inf
        return float(w[k - 1] - w[k])

    delta_p = _delta(p)
    delta_paren = min(_delta(p - 1), delta_p)
    if p < n:
        source = spec if values is None else Spectrum(eigenvalues=w, eigenvectors=None)
        delta_bar_p = _boundary_gap(w, singular_order(source).leading(p))
    else:
        delta_bar_p = math.inf
    if delta is None:
        delta = delta_S
    elif not 0 < delta <= delta_S:
        raise InvalidRadius(f"contour margin {delta!r} must lie in (0, {delta_S!r}]")
    return GapReport(
        delta_S=delta_S,
        delta_p=delta_p,
        delta_paren=delta_paren,
        delta_bar_p=delta_bar_p,
        delta=float(delta),
        p=p,
    )


def _resolvent_pairs(W, d):
    """
    ``max_{i != j} |sum_l W[l, i] W[l, j] / d[l]|``
    """
    if W.shape[0] == 0 or W.shape[1] < 2:
        return 0.0
    Y = W.T @ (W / d[:, None])
    np.fill_diagonal(Y, 0.0)
    return float(np.max(np.abs(Y)))


def _middle_denominators(values, k, out):
    d = values[k] - values[list(out)]
    if np.any(d == 0.0):
        raise DegenerateGap(f"eigenvalue {values[k]!r} of index {k} repeats outside N")
    return d


def skew_xyw(spec, E, sel, kset=None):
    """
    Compute ``x``, ``y`` and ``w`` for the selection ``sel``.

    spec
        signal spectrum

    E
        symmetric noise matrix

    sel
        :class:`Selection` from :func:`select_neighborhood`

    kset
        indices ``k`` over which ``y`` is maximised, a subset of ``sel.S`` (all of it by default)
    """
    sym = as_symmetric(E)
    if sym.shape[0] != spec.n:
        raise DimensionError(f"E is {sym.shape}, spectrum has dimension {spec.n}")
    kset = sel.S if kset is None else tuple(kset)
    stray = set(kset) - set(sel.S)
    if stray:
        raise InvalidSelection(f"kset indices {sorted(stray)} are not in S")

    values = np.asarray(spec.eigenvalues)
    U_N = spec.vectors(sel.N)
    EU = sym @ U_N
    X = U_N.T @ EU
    x = float(np.max(np.abs(X)))
    w = float(np.max(np.linalg.norm(EU, axis=0)))

    out = sel.outside
    y = 0.0
    if out:
        W = spec.vectors(out).T @ EU
        for k in kset:
            d = _middle_denominators(values, k, out)
            y = max(y, _resolvent_pairs(W, d))
    E_norm = operator_norm(sym)
    log.debug(f"Skewness x={x!r} y={y!r} w={w!r} with ||E||={E_norm!r}")
    return SkewnessReport(
        x=x, y=y, w=w, E_norm=E_norm, p=sel.p, r=sel.r, lambda_bar=sel.lambda_bar
    )


def skew_aux(spec, E, sel, p=None):
    """
    Auxiliary quantities ``xbar`` (over all eigenvectors), ``ybar`` (off-diagonal ``E^2`` over
    ``N``) and ``sigma = min_{i < p} |lambda_i|``
    """
    sym = as_symmetric(E)
    if sym.shape[0] != spec.n:
        raise DimensionError(f"E is {sym.shape}, spectrum has dimension {spec.n}")
    p = sel.p if p is None else int(p)
    U = np.asarray(spec.eigenvectors)
    xbar = float(np.max(np.abs(U.T @ sym @ U)))
    EU_N = sym @ spec.vectors(sel.N)
    ybar = _resolvent_pairs(EU_N, np.ones(EU_N.shape[0]))
    sigma = float(np.min(np.abs(np.asarray(spec.eigenvalues)[:p])))
    return SkewnessReport(xbar=xbar, ybar=ybar, sigma=sigma, p=p, r=sel.r)


def skewness_report(spec, E, sel, p=None, kset=None, gaps=None):
    """
    Full report combining :func:`skew_xyw`, :func:`skew_aux` and ``delta_S``
    """
    report = skew_xyw(spec, E, sel, kset=kset).merge(skew_aux(spec, E, sel, p=p))
    if gaps is None:
        gaps = spectral_gaps(spec, sel.S)
    return replace(report, delta_S=gaps.delta_S)


def rect_skew_xyw(rs, E, sel, kset=None):
    """
    Skewness quantities of a rectangular problem.

    rs
        :class:`~eigenshift.spectral_core.SingularSpectrum` of the signal

    E
        noise matrix with the shape of the signal

    sel
        selection over singular indices from :func:`select_singular_neighborhood`

    The outer sums of ``y`` run over the singular indices ``1..min(m, n)`` outside ``N``.
    """
    arr = as_matrix(E)
    if arr.shape != rs.shape:
        raise DimensionError(f"E is {arr.shape}, signal is {rs.shape}")
    kset = sel.S if kset is None else tuple(kset)
    values = np.asarray(rs.values)
    U_N = rs.left[:, list(sel.N)]
    V_N = rs.right[:, list(sel.N)]
    EV = arr @ V_N
    ETU = arr.T @ U_N
    x = float(np.max(np.abs(U_N.T @ EV)))
    w = float(max(np.max(np.linalg.norm(EV, axis=0)), np.max(np.linalg.norm(ETU, axis=0))))

    out = sel.outside
    y = 0.0
    if out:
        W_left = rs.left[:, list(out)].T @ EV
        W_right = rs.right[:, list(out)].T @ ETU
        for k in kset:
            d = _middle_denominators(values, k, out)
            y = max(y, _resolvent_pairs(W_left, d), _resolvent_pairs(W_right, d))
    return SkewnessReport(
        x=x,
        y=y,
        w=w,
        E_norm=operator_norm(arr),
        p=sel.p,
        r=sel.r,
        lambda_bar=sel.lambda_bar,
    )
