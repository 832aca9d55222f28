"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Spectral core
=============
Dense symmetric spectral decompositions, spectral projectors, subspace distances, the singular
ordering of a symmetric spectrum and the additive symmetrization of rectangular matrices.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy, scipy
:platform:      All

All index sets are 0-based. The eigensolver is :func:`scipy.linalg.eigh`; this module owns the
ordering, tie-breaking and the orthonormality re-checks.
"""
import logging
from dataclasses import dataclass
from typing import Iterable
from typing import Tuple

import numpy as np
from scipy import linalg as la

from eigenshift.exceptions import DimensionError
from eigenshift.exceptions import InvalidMatrix
from eigenshift.exceptions import InvalidSelection

# Globals
log = logging.getLogger(__name__)

ORTHONORMALITY_TOL = 1e-10
RESIDUAL_TOL = 1e-10
NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """
    Eigenvalues in descending order and the matching orthonormal eigenvectors (as columns)
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def vectors(self, indices):
        return self.eigenvectors[:, list(indices)]


@dataclass(frozen=True)
class Projector:
    matrix: np.ndarray
    rank: int
    indices: Tuple[int, ...] = ()

    @property
    def n(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SingularOrder:
    """
    ``permutation[k]`` is the eigenvalue index holding the (k+1)-th largest absolute value
    """

    permutation: Tuple[int, ...]

    def leading(self, p):
        return tuple(self.permutation[:p])


@dataclass(frozen=True)
class SingularSpectrum:
    """
    Thin singular value decomposition ``A = left @ diag(values) @ right.T``
    """

    left: np.ndarray
    values: np.ndarray
    right: np.ndarray

    @property
    def shape(self):
        return self.left.shape[0], self.right.shape[0]

    @property
    def k(self):
        return self.values.shape[0]


def _readonly(arr):
    arr.setflags(write=False)
    return arr


def as_matrix(M):
    """
    Convert ``M`` to a finite 2d float array

    M
        array-like of shape (m, n)
    """
    arr = np.array(M, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidMatrix(f"expected a non-empty 2d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("matrix has non-finite entries")
    return arr


def as_symmetric(M):
    """
    Return the symmetric part ``(M + M.T) / 2`` of a square finite matrix as a read-only array.
    The result is symmetric bit for bit.
    """
    arr = as_matrix(M)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {arr.shape}")
    sym = (arr + arr.T) / 2.0
    return _readonly(sym)


def check_selection(S, n):
    """
    Validate an index set against dimension ``n`` and return it as a sorted tuple
    """
    try:
        idx = tuple(int(i) for i in S)
    except (TypeError, ValueError) as exc:
        raise InvalidSelection(f"index set is not a sequence of integers: {S!r}") from exc
    if not idx:
        raise InvalidSelection("index set is empty")
    if len(set(idx)) != len(idx):
        raise InvalidSelection(f"index set has duplicates: {idx}")
    bad = [i for i in idx if i < 0 or i >= n]
    if bad:
        raise InvalidSelection(f"indices {bad} out of range for dimension {n}")
    return tuple(sorted(idx))


def complement(S, n):
    chosen = set(S)
    return tuple(i for i in range(n) if i not in chosen)


def operator_norm(M):
    """
    Spectral norm of ``M``.

    The norm is the square root of the top eigenvalue of the smaller Gram matrix. Results below
    ``NORM_FLOOR`` times the largest absolute entry are reported as 0.
    """
    arr = np.asarray(M, dtype=float)
    if arr.size == 0:
        return 0.0
    scale = float(np.max(np.abs(arr)))
    if scale == 0.0:
        return 0.0
    gram = arr.T @ arr if arr.shape[0] >= arr.shape[1] else arr @ arr.T
    k = gram.shape[0]
    top = la.eigvalsh(gram, subset_by_index=[k - 1, k - 1])[0]
    value = float(np.sqrt(max(top, 0.0)))
    if value < NORM_FLOOR * scale:
        return 0.0
    return value


def decompose_symmetric(A):
    """
    Spectral decomposition of a symmetric matrix with eigenvalues in descending order.

    Ties are broken by ascending solver index. A failed orthonormality or residual re-check is
    logged as a warning.

    A
        real symmetric matrix, symmetrized on entry
    """
    sym = as_symmetric(A)
    w, U = la.eigh(sym)
    order = np.argsort(-w, kind="stable")
    w = np.ascontiguousarray(w[order])
    U = np.ascontiguousarray(U[:, order])

    n = sym.shape[0]
    ortho = float(np.max(np.abs(U.T @ U - np.eye(n))))
    if ortho > ORTHONORMALITY_TOL:
        log.warning(f"Eigenvector orthonormality error {ortho:.3e} exceeds {ORTHONORMALITY_TOL}")
    scale = max(1.0, float(np.max(np.abs(w))))
    residual = float(np.max(np.linalg.norm(sym @ U - U * w, axis=0)))
    if residual > RESIDUAL_TOL * scale:
        log.warning(f"Eigen residual {residual:.3e} exceeds {RESIDUAL_TOL} * {scale:.3e}")
    log.debug(f"Decomposed {n}x{n} matrix, top eigenvalue {w[0]!r}")
    return Spectrum(eigenvalues=_readonly(w), eigenvectors=_readonly(U))


def spectral_projector(spec, S):
    """
    Orthogonal projector onto the span of the eigenvectors indexed by ``S``
    """
    idx = check_selection(S, spec.n)
    U_S = spec.vectors(idx)
    P = U_S @ U_S.T
    P = (P + P.T) / 2.0
    return Projector(matrix=_readonly(P), rank=len(idx), indices=idx)


def _projector_matrix(P):
    return P.matrix if isinstance(P, Projector) else np.asarray(P, dtype=float)


def subspace_distance(P, Q):
    """
    Spectral norm distance between two projectors
    """
    P_m = _projector_matrix(P)
    Q_m = _projector_matrix(Q)
    if P_m.shape != Q_m.shape:
        raise DimensionError(f"projector shapes differ: {P_m.shape} vs {Q_m.shape}")
    return operator_norm(P_m - Q_m)


def singular_order(spec):
    """
    Permutation sorting eigenvalues by absolute value, descending. Among equal absolute values a
    non-negative eigenvalue comes first, then the smaller index.
    """
    w = np.asarray(spec.eigenvalues)
    idx = np.arange(w.shape[0])
    # np.lexsort sorts by the last key first
    order = np.lexsort((idx, (w < 0).astype(int), -np.abs(w)))
    return SingularOrder(permutation=tuple(int(i) for i in order))


def symmetrize_additive(A):
    """
    Return the ``(m+n) x (m+n)`` symmetric dilation ``[[0, A], [A.T, 0]]``
    """
    arr = as_matrix(A)
    m, n = arr.shape
    dilation = np.block([[np.zeros((m, m)), arr], [arr.T, np.zeros((n, n))]])
    return _readonly(dilation)


def decompose_rectangular(A):
    """
    Thin SVD of ``A`` with singular values in descending order
    """
    arr = as_matrix(A)
    left, values, right_t = la.svd(arr, full_matrices=False)
    return SingularSpectrum(
        left=_readonly(left), values=_readonly(values), right=_readonly(right_t.T.copy())
    )


def perturbed_distance(A, E, S):
    """
    Measured distance ``||Pi~_S - Pi_S||`` where both projectors use the same index positions
    in the descending spectra of ``A`` and ``A + E``
    """
    sym_a = as_symmetric(A)
    sym_e = as_symmetric(E)
    if sym_a.shape != sym_e.shape:
        raise DimensionError(f"A is {sym_a.shape}, E is {sym_e.shape}")
    before = spectral_projector(decompose_symmetric(sym_a), S)
    after = spectral_projector(decompose_symmetric(sym_a + sym_e), S)
    return subspace_distance(after, before)


def perturbed_magnitude_distance(A, E, p):
    """
    Measured distance between the projectors onto the ``p`` eigenvectors of largest absolute
    eigenvalue of ``A`` and of ``A + E``, each ordered by :func:`singular_order`
    """
    sym_a = as_symmetric(A)
    sym_e = as_symmetric(E)
    if sym_a.shape != sym_e.shape:
        raise DimensionError(f"A is {sym_a.shape}, E is {sym_e.shape}")
    before = decompose_symmetric(sym_a)
    after = decompose_symmetric(sym_a + sym_e)
    P = spectral_projector(before, singular_order(before).leading(p))
    Q = spectral_projector(after, singular_order(after).leading(p))
    return subspace_distance(Q, P)


def perturbed_singular_distance(A, E, S):
    """
    Measured left and right singular subspace distances for the singular indices ``S``
    """
    arr_a = as_matrix(A)
    arr_e = as_matrix(E)
    if arr_a.shape != arr_e.shape:
        raise DimensionError(f"A is {arr_a.shape}, E is {arr_e.shape}")
    before = decompose_rectangular(arr_a)
    after = decompose_rectangular(arr_a + arr_e)
    idx = list(check_selection(S, before.k))

    def _dist(B0, B1):
        return operator_norm(B1[:, idx] @ B1[:, idx].T - B0[:, idx] @ B0[:, idx].T)

    return _dist(before.left, after.left), _dist(before.right, after.right)


def reconstruct(spec, indices: Iterable[int] = None):
    """
    ``sum_i lambda_i u_i u_i^T`` over ``indices`` (all by default)
    """
    idx = list(range(spec.n)) if indices is None else list(indices)
    U = spec.vectors(idx)
    return (U * spec.eigenvalues[idx]) @ U.T
