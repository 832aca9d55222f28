"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Contour calculus
================
Combinatorial evaluation of ``(1/2 pi i) \\oint dz / prod (z - lambda)`` over a contour enclosing
a subset of the poles, expressed as a signed sum over integer compositions and their bipartite
profile graphs, plus a Gauss-Legendre quadrature oracle and the first-order term of the
resolvent expansion of a spectral projector.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy
:platform:      All

Positions in a profile graph are 1-based: ``X`` occupies ``1..T`` and ``Y`` occupies
``T+1..s+1``.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from eigenshift.ensembles import POLES
from eigenshift.ensembles import stream
from eigenshift.exceptions import DegenerateGap
from eigenshift.exceptions import NoSeparatingContour
from eigenshift.exceptions import NonConvergent
from eigenshift.exceptions import ShapeError
from eigenshift.exceptions import UnsupportedAllInside
from eigenshift.spectral_core import as_symmetric
from eigenshift.spectral_core import check_selection
from eigenshift.spectral_core import complement

# Globals
log = logging.getLogger(__name__)

MAX_S = 18
GAUSS_NODES = 32
MAX_DOUBLINGS = 20
SEPARATION_MARGIN = 1e-6


@dataclass(frozen=True)
class Composition:
    m: Tuple[int, ...]

    @property
    def T(self):
        return len(self.m)

    @property
    def s(self):
        return sum(self.m)


@dataclass(frozen=True)
class ProfileGraph:
    """
    Directed bipartite multigraph ``G(X, Y | L)``.

    ``edges`` are ``(x_position, y_position)`` pairs, ``degrees[q]`` is the degree of Y position
    ``T + 1 + q`` and ``far`` lists the Y positions counted in ``r_c``.
    """

    composition: Composition
    edges: Tuple[Tuple[int, int], ...]
    degrees: Tuple[int, ...]
    far: Tuple[int, ...]
    r_c: int

    @property
    def T(self):
        return self.composition.T

    @property
    def s(self):
        return self.composition.s

    @property
    def y_positions(self):
        return tuple(range(self.T + 1, self.s + 2))


@dataclass(frozen=True)
class ProfileStats:
    degrees: Tuple[int, ...]
    r_c: int
    edge_count: int
    near_edge_count: int


def enumerate_compositions(T, s, max_s=MAX_S):
    """
    All compositions of ``s`` into ``T`` positive parts, in lexicographic order.

    Returns an empty list when ``T < 1`` or ``T > s``. ``s`` above ``max_s`` is refused; pass a
    larger ``max_s`` to override.
    """
    if s > max_s:
        raise ShapeError(f"s={s} exceeds the enumeration cap {max_s}")
    if T < 1 or T > s:
        return []
    result = []
    for cuts in itertools.combinations(range(1, s), T - 1):
        bounds = (0,) + cuts + (s,)
        result.append(Composition(m=tuple(b - a for a, b in zip(bounds, bounds[1:]))))
    return result


def build_profile(x_len, y_len, L, far=None):
    """
    Build ``G(X, Y | L)``: X position ``j`` is joined to every Y position in
    ``[(s+1) - sum_{k<=j}(m_k - 1), (s+1) - sum_{k<j}(m_k - 1)]``.

    x_len, y_len
        lengths of ``X`` and ``Y``; ``x_len == T`` and ``x_len + y_len == s + 1``

    L
        :class:`Composition` or sequence of parts

    far
        Y positions counted in ``r_c`` (all of them by default)
    """
    comp = L if isinstance(L, Composition) else Composition(m=tuple(int(v) for v in L))
    T, s = comp.T, comp.s
    if T < 1 or any(v < 1 for v in comp.m):
        raise ShapeError(f"invalid composition {comp.m}")
    if x_len != T or x_len + y_len != s + 1:
        raise ShapeError(f"lengths ({x_len}, {y_len}) do not fit composition {comp.m}")

    edges = []
    excess = 0
    for j, m_j in enumerate(comp.m, start=1):
        hi = s + 1 - excess
        excess += m_j - 1
        lo = s + 1 - excess
        edges.extend((j, q) for q in range(hi, lo - 1, -1))

    degrees = [0] * y_len
    for _, q in edges:
        degrees[q - T - 1] += 1
    y_positions = range(T + 1, s + 2)
    far = tuple(y_positions) if far is None else tuple(sorted(set(far)))
    if any(q not in y_positions for q in far):
        raise ShapeError(f"far positions {far} are not Y positions")
    r_c = sum(degrees[q - T - 1] - 1 for q in far)
    return ProfileGraph(
        composition=comp, edges=tuple(edges), degrees=tuple(degrees), far=far, r_c=r_c
    )


def profile_stats(g):
    """
    Degrees, ``r_c``, the number of edges and the number of edges ending outside ``far``
    """
    far = set(g.far)
    near = sum(d for q, d in zip(g.y_positions, g.degrees) if q not in far)
    return ProfileStats(
        degrees=g.degrees, r_c=g.r_c, edge_count=len(g.edges), near_edge_count=near
    )


def profile_weight(g, values_X, values_Y):
    """
    ``w(X, Y | L) = prod_e 1 / (lambda_{e+} - lambda_{e-})`` over the edge multiset, ``0`` when
    either side is empty
    """
    if len(values_X) == 0 or len(values_Y) == 0:
        return 0.0
    if len(values_X) != g.T or len(values_Y) != len(g.degrees):
        raise ShapeError(
            f"got {len(values_X)} X and {len(values_Y)} Y values for T={g.T}, s={g.s}"
        )
    weight = 1.0
    for x_pos, y_pos in g.edges:
        diff = float(values_X[x_pos - 1]) - float(values_Y[y_pos - g.T - 1])
        if diff == 0.0:
            raise DegenerateGap(f"edge ({x_pos} -> {y_pos}) joins equal values")
        weight /= diff
    return weight


def integral_combinatorial(inside_values, outside_values, max_s=MAX_S):
    """
    ``(1/2 pi i) \\oint dz / prod(z - lambda)`` over a contour enclosing exactly
    ``inside_values``, as ``(-1)^(T+1) sum_{L} w(X, Y | L)``

    Values may repeat within a side, but never across the two sides.
    """
    inside = [float(v) for v in inside_values]
    outside = [float(v) for v in outside_values]
    T = len(inside)
    if T == 0:
        return 0.0
    if not outside:
        raise UnsupportedAllInside(f"all {T} poles are inside the contour")
    if set(inside) & set(outside):
        raise DegenerateGap("a value appears both inside and outside the contour")
    s = T + len(outside) - 1
    weights = [
        profile_weight(build_profile(T, len(outside), L), inside, outside)
        for L in enumerate_compositions(T, s, max_s=max_s)
    ]
    # np.sum uses pairwise summation
    total = float(np.sum(np.asarray(weights))) if weights else 0.0
    return total if T % 2 == 1 else -total


def _separating_rectangle(poles, inside):
    inner = poles[inside]
    outer = poles[~inside]
    spread = float(np.ptp(poles)) if poles.size > 1 else 1.0
    margin = SEPARATION_MARGIN * max(spread, np.finfo(float).tiny)
    if inner.size == 0:
        # nothing enclosed: a box to the right of every pole
        top = float(np.max(poles))
        return top + 1.0, top + 2.0, 1.0
    lo, hi = float(np.min(inner)), float(np.max(inner))
    if np.any((outer >= lo) & (outer <= hi)):
        raise NoSeparatingContour("an outside pole lies between inside poles")
    height = 1.0 + (hi - lo)
    below = outer[outer < lo]
    above = outer[outer > hi]
    if below.size:
        nearest = float(np.max(below))
        if lo - nearest < margin:
            raise NoSeparatingContour(f"gap {lo - nearest!r} below margin {margin!r}")
        left = (lo + nearest) / 2.0
    else:
        left = lo - height / 2.0
    if above.size:
        nearest = float(np.min(above))
        if nearest - hi < margin:
            raise NoSeparatingContour(f"gap {nearest - hi!r} below margin {margin!r}")
        right = (hi + nearest) / 2.0
    else:
        right = hi + height / 2.0
    return left, right, height


def _rectangle_integral(poles, corners, panels, nodes, weights):
    total = 0.0 + 0.0j
    for a, b in zip(corners, corners[1:] + corners[:1]):
        t = np.linspace(0.0, 1.0, panels + 1)
        mid = (t[:-1] + t[1:]) / 2.0
        half = (t[1:] - t[:-1]) / 2.0
        params = mid[:, None] + half[:, None] * nodes[None, :]
        z = a + (b - a) * params
        f = 1.0 / np.prod(z[..., None] - poles, axis=-1)
        total += (b - a) * np.sum(half[:, None] * weights[None, :] * f)
    return total


def integral_numeric(poles, inside, tol=1e-10, max_doublings=MAX_DOUBLINGS):
    """
    Quadrature oracle for the contour integral.

    The contour is an axis-aligned rectangle whose vertical edges bisect the gaps between the
    extreme inside poles and their nearest outside neighbours, with height ``1 + spread`` of the
    inside poles. Each edge uses composite Gauss-Legendre; panels are doubled until successive
    estimates agree to ``tol``.

    poles
        real pole locations

    inside
        boolean flags, same length as ``poles``
    """
    poles = np.asarray(poles, dtype=float)
    inside = np.asarray(inside, dtype=bool)
    if poles.shape != inside.shape or poles.ndim != 1:
        raise ShapeError(f"poles {poles.shape} and flags {inside.shape} differ")
    left, right, height = _separating_rectangle(poles, inside)
    corners = [
        complex(left, -height / 2.0),
        complex(right, -height / 2.0),
        complex(right, height / 2.0),
        complex(left, height / 2.0),
    ]
    nodes, weights = leggauss(GAUSS_NODES)
    panels = 1
    previous = _rectangle_integral(poles, corners, panels, nodes, weights) / (2j * math.pi)
    for _ in range(max_doublings):
        panels *= 2
        current = _rectangle_integral(poles, corners, panels, nodes, weights) / (2j * math.pi)
        if abs(current - previous) < tol * max(1.0, abs(current)):
            if abs(current.imag) > tol * max(1.0, abs(current.real)):
                raise NonConvergent(f"imaginary part {current.imag!r} exceeds tolerance")
            log.debug(f"Quadrature converged with {panels} panels per edge")
            return current
        previous = current
    log.error(f"Quadrature did not converge after {max_doublings} doublings")
    raise NonConvergent(f"no convergence after {max_doublings} doublings")


def linear_response(spec, E, S):
    """
    First-order term of ``Pi~_S - Pi_S``, the sum over ``i in S`` and ``j not in S`` of
    ``(u_i u_i^T E u_j u_j^T + u_j u_j^T E u_i u_i^T) / (lambda_i - lambda_j)``
    """
    sym = as_symmetric(E)
    idx = check_selection(S, spec.n)
    out = complement(idx, spec.n)
    values = np.asarray(spec.eigenvalues)
    diff = values[list(idx)][:, None] - values[list(out)][None, :]
    if np.any(diff == 0.0):
        raise DegenerateGap("an eigenvalue in S repeats outside S")
    U_S = spec.vectors(idx)
    U_out = spec.vectors(out)
    F = U_S @ ((U_S.T @ sym @ U_out) / diff) @ U_out.T
    return F + F.T


def random_poles(rng, T, s):
    """
    ``s + 1`` sorted poles with gaps drawn from ``[0.2, 1]`` and a random window of ``T``
    consecutive poles marked inside
    """
    poles = np.cumsum(rng.uniform(0.2, 1.0, size=s + 1))
    poles -= poles.mean()
    start = int(rng.integers(0, s + 2 - T))
    inside = np.zeros(s + 1, dtype=bool)
    inside[start : start + T] = True
    return poles, inside


def contour_check(s, trials, seed, tol=1e-8):
    """
    Compare :func:`integral_combinatorial` with :func:`integral_numeric` on random pole
    configurations. Trial ``t`` uses ``T = 1 + t mod s`` inside poles.

    Returns one verdict per trial with both values, their difference and ``match``.
    """
    if s < 1 or trials < 1:
        raise ShapeError(f"need s >= 1 and trials >= 1, got s={s}, trials={trials}")
    verdicts = []
    for trial in range(trials):
        T = 1 + trial % s
        poles, inside = random_poles(stream(seed, trial, POLES), T, s)
        combinatorial = integral_combinatorial(poles[inside], poles[~inside])
        numeric = integral_numeric(poles, inside, tol=tol).real
        error = abs(combinatorial - numeric)
        verdicts.append(
            {
                "trial": trial,
                "T": T,
                "s": s,
                "combinatorial": combinatorial,
                "numeric": numeric,
                "error": error,
                "match": bool(error <= tol * max(1.0, abs(combinatorial))),
            }
        )
    failed = sum(1 for v in verdicts if not v["match"])
    if failed:
        log.warning(f"{failed} of {trials} contour checks exceed tolerance {tol!r}")
    return verdicts
