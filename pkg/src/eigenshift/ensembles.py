"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Random ensembles
================
Seeded generators for the noise and signal models (Wigner, generalized Wigner, regular and
K-bounded noise, spiked signals, stochastic block models, hidden cliques and the spiked
population model) plus evaluators for the tail and norm estimates the random-noise bounds rely on.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy, scipy
:platform:      All

Every draw comes from :func:`stream`, a Philox generator keyed by ``(seed, trial, component)``.
The output of a trial therefore does not depend on which worker runs it or in which order.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict
from typing import Optional
from typing import Tuple

import numpy as np
from scipy import linalg as la

from eigenshift.exceptions import DegenerateGap
from eigenshift.exceptions import IncompleteInput
from eigenshift.exceptions import LayoutError
from eigenshift.exceptions import NotPSD
from eigenshift.exceptions import ProfileError
from eigenshift.exceptions import ShapeError
from eigenshift.exceptions import UsageError
from eigenshift.spectral_core import as_symmetric
from eigenshift.spectral_core import operator_norm

# Globals
log = logging.getLogger(__name__)

PROFILE_TOL = 1e-9
PSD_TOL = 1e-9

NOISE, SIGNAL, CLIQUE, SAMPLES, JITTER, POLES = range(6)

ENSEMBLE_KINDS = ("wigner", "generalized_wigner", "regular", "k_bounded")
ENTRY_DISTS = ("gaussian", "rademacher", "bounded_uniform")
SIGNAL_KINDS = ("diag_spikes", "rotated_low_rank", "sbm")

# E[xi^4] for a unit-variance entry
_FOURTH_MOMENT = {"gaussian": 3.0, "rademacher": 1.0, "bounded_uniform": 9.0 / 5.0}
_SQRT3 = math.sqrt(3.0)


def stream(seed, *keys):
    """
    Independent generator for ``seed`` and the integer ``keys``
    """
    if int(seed) < 0:
        raise UsageError(f"seed must be non-negative, got {seed!r}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *keys])))


def draw_entries(rng, entry_dist, shape, truncation=None):
    """
    Mean-zero unit-variance entries; gaussian entries are clipped to ``[-truncation, truncation]``
    when a truncation level is given
    """
    if entry_dist == "gaussian":
        values = rng.standard_normal(shape)
        if truncation is not None:
            np.clip(values, -truncation, truncation, out=values)
        return values
    if entry_dist == "rademacher":
        return rng.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
    if entry_dist == "bounded_uniform":
        return rng.uniform(-_SQRT3, _SQRT3, size=shape)
    raise UsageError(f"unknown entry distribution {entry_dist!r}")


def _row_sums_equal(profile):
    sums = profile.sum(axis=1)
    return float(np.ptp(sums)) <= PROFILE_TOL * max(1.0, float(np.max(sums)))


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """
    Symmetric noise ensemble.

    ``variance_profile`` holds ``sigma_ij^2``; ``comparability`` is the declared ``C`` bounding
    ``max / min`` of the profile for ``generalized_wigner``; ``bound`` is the declared ``K`` for
    ``k_bounded``; ``truncation`` clips gaussian entries and may be ``"log"`` for ``log n``.
    """

    kind: str
    n: int
    entry_dist: str = "gaussian"
    variance_profile: Optional[np.ndarray] = None
    seed: int = 0
    comparability: Optional[float] = None
    bound: Optional[float] = None
    truncation: Optional[object] = None

    @property
    def truncation_level(self):
        if self.truncation is None:
            return None
        if self.truncation == "log":
            return math.log(self.n)
        return float(self.truncation)

    def profile(self):
        if self.variance_profile is None:
            return np.ones((self.n, self.n))
        return np.asarray(self.variance_profile, dtype=float)

    def entry_sup(self):
        if self.entry_dist == "rademacher":
            return 1.0
        if self.entry_dist == "bounded_uniform":
            return _SQRT3
        level = self.truncation_level
        return math.inf if level is None else level

    def _fail(self, message):
        log.error(f"Invalid {self.kind} ensemble: {message}")
        raise ProfileError(message)

    def validate(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise UsageError(f"unknown ensemble kind {self.kind!r}")
        if self.entry_dist not in ENTRY_DISTS:
            raise UsageError(f"unknown entry distribution {self.entry_dist!r}")
        if self.n < 1:
            self._fail(f"dimension must be positive, got {self.n}")
        if self.kind == "wigner":
            if self.variance_profile is not None:
                self._fail("the wigner kind has a unit profile")
            return self

        if self.kind in ("generalized_wigner", "regular") and self.variance_profile is None:
            self._fail("a variance profile is required")
        profile = self.profile()
        if profile.shape != (self.n, self.n):
            self._fail(f"profile has shape {profile.shape}, expected {(self.n, self.n)}")
        if not np.all(np.isfinite(profile)) or np.any(profile < 0):
            self._fail("profile entries must be finite and non-negative")
        if not np.array_equal(profile, profile.T):
            self._fail("profile is not symmetric")

        if self.kind in ("generalized_wigner", "regular") and not _row_sums_equal(profile):
            self._fail("row variance sums differ")
        if self.kind == "generalized_wigner":
            if self.comparability is None:
                self._fail("comparability constant C is required")
            low = float(np.min(profile))
            if low <= 0 or float(np.max(profile)) / low > self.comparability:
                self._fail(f"profile variances are not comparable within C={self.comparability}")
        if self.kind == "k_bounded":
            if self.bound is None or not self.bound > 0:
                self._fail("a positive entry bound K is required")
            sup = math.sqrt(float(np.max(profile))) * self.entry_sup()
            if sup > self.bound * (1.0 + PROFILE_TOL):
                self._fail(f"entries reach {sup!r}, above the declared bound {self.bound!r}")
        return self


def gen_symmetric_noise(spec, trial=0):
    """
    Draw the symmetric noise matrix of ``spec`` for ``trial``.

    Upper-triangular entries (diagonal included) are independent and scaled by the square root
    of the profile; the wigner kind has diagonal variance 2.
    """
    spec.validate()
    rng = stream(spec.seed, trial, NOISE)
    Z = draw_entries(rng, spec.entry_dist, (spec.n, spec.n), spec.truncation_level)
    upper = np.triu(Z)
    E = upper + np.triu(Z, 1).T
    if spec.kind == "wigner":
        E[np.diag_indices(spec.n)] *= math.sqrt(2.0)
    else:
        E *= np.sqrt(spec.profile())
    log.debug(f"Drew {spec.kind} noise n={spec.n} seed={spec.seed} trial={trial}")
    return as_symmetric(E)


def _densities(densities, k):
    arr = np.asarray(densities, dtype=float)
    if arr.ndim == 1 and arr.shape[0] == 2:
        # (within, across)
        arr = np.full((k, k), arr[1]) + np.eye(k) * (arr[0] - arr[1])
    if arr.shape != (k, k) or not np.array_equal(arr, arr.T):
        raise ShapeError(f"densities must be a symmetric {k}x{k} matrix or a pair")
    return arr


def gen_signal(kind, n, spikes=(), seed=0, blocks=(), densities=None):
    """
    Deterministic signal matrix.

    kind
        ``diag_spikes`` puts ``spikes`` on the leading diagonal; ``rotated_low_rank`` returns
        ``Q diag(spikes) Q^T`` with ``Q`` orthonormalized from a seeded gaussian matrix; ``sbm``
        returns the expected adjacency matrix of a block model with ``blocks`` sizes and
        ``densities``

    n
        dimension
    """
    spikes = np.asarray(spikes, dtype=float)
    if not np.all(np.isfinite(spikes)):
        raise ShapeError("spikes must be finite")
    if kind in ("diag_spikes", "rotated_low_rank") and spikes.shape[0] > n:
        raise ShapeError(f"{spikes.shape[0]} spikes do not fit dimension {n}")

    if kind == "diag_spikes":
        A = np.zeros((n, n))
        A[np.arange(spikes.shape[0]), np.arange(spikes.shape[0])] = spikes
    elif kind == "rotated_low_rank":
        G = stream(seed, 0, SIGNAL).standard_normal((n, spikes.shape[0]))
        Q, R = la.qr(G, mode="economic")
        Q = Q * np.sign(np.diag(R))
        A = (Q * spikes) @ Q.T
    elif kind == "sbm":
        sizes = [int(b) for b in blocks]
        if sum(sizes) != n or any(b < 1 for b in sizes):
            raise ShapeError(f"block sizes {sizes} do not sum to {n}")
        labels = np.repeat(np.arange(len(sizes)), sizes)
        A = _densities(densities, len(sizes))[np.ix_(labels, labels)]
    else:
        raise UsageError(f"unknown signal kind {kind!r}")
    return as_symmetric(A)


@dataclass(frozen=True, eq=False)
class HiddenCliques:
    A_truth: np.ndarray
    A_tilde: np.ndarray
    memberships: Tuple[Tuple[int, ...], ...]

    @property
    def noise(self):
        return self.A_tilde - self.A_truth


def _layout(n, sizes, memberships):
    if memberships is None:
        offsets = np.cumsum([0] + sizes)
        return tuple(tuple(range(a, b)) for a, b in zip(offsets, offsets[1:]))
    layout = tuple(tuple(int(v) for v in m) for m in memberships)
    if [len(m) for m in layout] != sizes:
        raise LayoutError("memberships do not match the clique sizes")
    flat = [v for m in layout for v in m]
    if len(set(flat)) != len(flat):
        raise LayoutError("cliques overlap")
    if any(v < 0 or v >= n for v in flat):
        raise LayoutError(f"clique vertex out of range for n={n}")
    return layout


def gen_hidden_cliques(n, clique_sizes, seed, memberships=None):
    """
    ``+-1`` adjacency matrix with disjoint planted cliques (loops included).

    ``A_truth`` is 1 on every clique block and 0 elsewhere; ``A_tilde`` carries independent
    signs off the cliques. Cliques are laid out consecutively unless ``memberships`` is given.
    """
    sizes = [int(k) for k in clique_sizes]
    if any(k < 1 for k in sizes) or sum(sizes) > n:
        log.error(f"Clique sizes {sizes} do not fit n={n}")
        raise LayoutError(f"clique sizes {sizes} do not fit n={n}")
    layout = _layout(n, sizes, memberships)

    rng = stream(seed, 0, CLIQUE)
    Z = draw_entries(rng, "rademacher", (n, n))
    A_tilde = np.triu(Z) + np.triu(Z, 1).T
    A_truth = np.zeros((n, n))
    for members in layout:
        block = np.ix_(members, members)
        A_tilde[block] = 1.0
        A_truth[block] = 1.0
    return HiddenCliques(
        A_truth=as_symmetric(A_truth), A_tilde=as_symmetric(A_tilde), memberships=layout
    )


@dataclass(frozen=True, eq=False)
class SpikedModelSpec:
    """
    Samples ``X_i = M^(1/2) Y_i`` with iid unit-variance entries in ``Y_i``
    """

    M: np.ndarray
    n_samples: int
    entry_dist: str = "gaussian"
    seed: int = 0

    @property
    def d(self):
        return np.asarray(self.M).shape[0]


@dataclass(frozen=True, eq=False)
class SpikedSamples:
    samples: np.ndarray
    M_tilde: np.ndarray
    E: np.ndarray


def psd_sqrt(M):
    """
    Spectral square root; eigenvalues in ``[-1e-9 ||M||, 0)`` are clipped to 0
    """
    sym = as_symmetric(M)
    w, V = la.eigh(sym)
    floor = -PSD_TOL * max(operator_norm(sym), np.finfo(float).tiny)
    if np.min(w) < floor:
        log.error(f"Covariance has eigenvalue {np.min(w)!r} below {floor!r}")
        raise NotPSD(f"minimum eigenvalue {np.min(w)!r} is below {floor!r}")
    if np.any(w < 0):
        log.warning(f"Clipping {int(np.sum(w < 0))} small negative eigenvalue(s) of M to 0")
        w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.T


def gen_spiked_samples(spec, trial=0):
    """
    Draw ``n_samples`` columns, the sample covariance ``M~`` and ``E = M~ - M``
    """
    if spec.n_samples < 1:
        raise UsageError(f"n_samples must be positive, got {spec.n_samples}")
    root = psd_sqrt(spec.M)
    rng = stream(spec.seed, trial, SAMPLES)
    Y = draw_entries(rng, spec.entry_dist, (spec.d, spec.n_samples))
    X = root @ Y
    M_tilde = as_symmetric(X @ X.T / spec.n_samples)
    E = as_symmetric(M_tilde - as_symmetric(spec.M))
    return SpikedSamples(samples=X, M_tilde=M_tilde, E=E)


@dataclass(frozen=True)
class TailBoundQuery:
    kind: str
    parameters: Dict[str, float]


# kind -> (required parameters, clamp to [0, 1])
TAIL_KINDS = {
    "bernstein_uEv": (("t", "sigma", "K"), True),
    "bernstein_uEv_subgaussian": (("t", "sigma"), True),
    "chebyshev_G12": (("t", "n", "sigma", "K"), True),
    "chebyshev_EuEv": (("t", "n", "m4"), True),
    "matrix_bernstein": (("t", "n", "d", "V", "L"), True),
    "matrix_bernstein_spiked": (("lambda_1", "r_lambda", "n", "d", "L", "kurtosis_excess"), False),
}


def tail_bound(q):
    """
    Evaluate a tail probability (or, for ``matrix_bernstein_spiked``, a norm estimate).

    bernstein_uEv
        ``exp(-(t^2 / 2) / (2 sigma^2 + K t))``

    bernstein_uEv_subgaussian
        ``exp(-t^2 / (4 sigma^2))``

    chebyshev_G12
        ``6 n sigma^2 (sigma^2 + K^2) / t^2``

    chebyshev_EuEv
        ``5 n m4 / t^2``

    matrix_bernstein
        ``(d + n) exp(-(t^2 n / 2) / (V + 2 L t / 3))``

    matrix_bernstein_spiked
        ``(2 + kurtosis_excess) (lambda_1 sqrt(r_lambda log(n + d) / n) + L log(n + d))``
    """
    if q.kind not in TAIL_KINDS:
        raise UsageError(f"unknown tail bound kind {q.kind!r}")
    required, clamp = TAIL_KINDS[q.kind]
    missing = [name for name in required if name not in q.parameters]
    if missing:
        raise IncompleteInput(missing, context=q.kind)
    v = {name: float(q.parameters[name]) for name in required}
    bad = [k for k, value in v.items() if value < 0 or (value == 0 and k != "kurtosis_excess")]
    if bad:
        raise UsageError(f"parameters must be positive for {q.kind}: {bad}")

    if q.kind == "bernstein_uEv":
        value = math.exp(-(v["t"] ** 2 / 2.0) / (2.0 * v["sigma"] ** 2 + v["K"] * v["t"]))
    elif q.kind == "bernstein_uEv_subgaussian":
        value = math.exp(-(v["t"] ** 2) / (4.0 * v["sigma"] ** 2))
    elif q.kind == "chebyshev_G12":
        value = 6.0 * v["n"] * v["sigma"] ** 2 * (v["sigma"] ** 2 + v["K"] ** 2) / v["t"] ** 2
    elif q.kind == "chebyshev_EuEv":
        value = 5.0 * v["n"] * v["m4"] / v["t"] ** 2
    elif q.kind == "matrix_bernstein":
        exponent = -(v["t"] ** 2 * v["n"] / 2.0) / (v["V"] + 2.0 * v["L"] * v["t"] / 3.0)
        value = (v["d"] + v["n"]) * math.exp(exponent)
    else:
        log_nd = math.log(v["n"] + v["d"])
        value = (2.0 + v["kurtosis_excess"]) * (
            v["lambda_1"] * math.sqrt(v["r_lambda"] * log_nd / v["n"]) + v["L"] * log_nd
        )
    return min(max(value, 0.0), 1.0) if clamp else value


def circulant_profile(n, weights):
    """
    Regular variance profile ``sigma_ij^2 = weights[dist(i, j)]`` where ``dist`` is the circular
    distance; missing weights are 0
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] == 0 or np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ProfileError("weights must be a non-empty sequence of non-negative numbers")
    dist = np.minimum(np.arange(n), n - np.arange(n))
    column = np.where(dist < w.shape[0], w[np.minimum(dist, w.shape[0] - 1)], 0.0)
    return la.circulant(column)


@dataclass(frozen=True)
class ProfileMoments:
    m2: float
    m4: float
    sigma2: float


def profile_moments(profile, entry_dist="gaussian"):
    """
    ``m2 = max_i (1/n) sum_j sigma_ij^2``, ``m4 = max_i (1/n) sum_j E xi_ij^4`` and
    ``sigma2 = max sigma_ij^2``
    """
    prof = np.asarray(profile, dtype=float)
    n = prof.shape[0]
    if entry_dist not in _FOURTH_MOMENT:
        raise UsageError(f"unknown entry distribution {entry_dist!r}")
    m2 = float(np.max(prof.sum(axis=1))) / n
    m4 = _FOURTH_MOMENT[entry_dist] * float(np.max((prof**2).sum(axis=1))) / n
    return ProfileMoments(m2=m2, m4=m4, sigma2=float(np.max(prof)))


def _max_offdiag(M):
    if M.shape[0] < 2:
        return 0.0
    upper = np.triu_indices(M.shape[0], k=1)
    return float(np.max(np.abs(M[upper])))


def mu_statistic(vectors, profile):
    """
    ``max_{k < l} |sum_i u_ki u_li sum_j sigma_ji^2|`` over the columns of ``vectors``
    """
    U = np.asarray(vectors, dtype=float)
    col_sums = np.asarray(profile, dtype=float).sum(axis=0)
    return _max_offdiag(U.T @ (U * col_sums[:, None]))


def mu_statistic_high_rank(spec, profile, r, p):
    """
    High-rank ``mu``: the column sums are weighted by
    ``s_jj = sum_{l > r} u_lj^2 / (lambda_pbar - lambda_l)`` and the maximum also runs over
    ``pbar <= p``
    """
    if not 1 <= p <= r < spec.n:
        raise UsageError(f"need 1 <= p <= r < n, got p={p}, r={r}, n={spec.n}")
    values = np.asarray(spec.eigenvalues)
    prof = np.asarray(profile, dtype=float)
    U_r = spec.vectors(range(r))
    U_out = spec.vectors(range(r, spec.n))
    result = 0.0
    for pbar in range(p):
        d = values[pbar] - values[r:]
        if np.any(d == 0.0):
            raise DegenerateGap(f"lambda_{pbar + 1} repeats beyond r={r}")
        s = (U_out**2) @ (1.0 / d)
        weights = prof.T @ s
        result = max(result, _max_offdiag(U_r.T @ (U_r * weights[:, None])))
    return result


def jitter(A, eps, seed):
    """
    ``A + eps G / ||G||`` for a seeded symmetric gaussian ``G``; separates repeated eigenvalues
    """
    sym = as_symmetric(A)
    n = sym.shape[0]
    Z = stream(seed, 0, JITTER).standard_normal((n, n))
    G = np.triu(Z) + np.triu(Z, 1).T
    return as_symmetric(sym + eps * G / operator_norm(G))
