"""Dense complex matrix foundation.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_matrix` is the single validation point.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (ClusterAmbiguity, DecompositionFailure,
                     IllConditionedSeparation, InvalidMatrix)

__all__ = ['EigenData', 'as_matrix', 'adjoint', 'commutator_norm',
           'eigen_clustered', 'identity', 'op_norm', 'random_unitary',
           'rank_with_tolerance', 'riesz_projection', 'singular_values',
           'direct_sum', 'shift_matrix']

DEFAULT_ATOL = 1e-10
DEFAULT_RTOL = 1e-8


def as_matrix(A):
    """Return `A` as a validated square complex128 array (a copy)."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidMatrix('matrix must be square, got shape %r' % (M.shape,))
    if M.shape[0] < 1:
        raise InvalidMatrix('matrix dimension must be at least 1')
    if not np.all(np.isfinite(M)):
        raise InvalidMatrix('matrix has non-finite entries')
    return M


def identity(n):
    return np.eye(n, dtype=np.complex128)


def adjoint(A):
    return np.conj(A).T


def op_norm(A):
    """Spectral norm (largest singular value)."""
    s = singular_values(A)
    return float(s[0])


def commutator_norm(A):
    """Spectral norm of ``A A* - A* A``; zero exactly for normal `A`."""
    A = np.asarray(A, dtype=np.complex128)
    Ah = adjoint(A)
    return op_norm(A @ Ah - Ah @ A)


def direct_sum(*blocks):
    return scipy.linalg.block_diag(*[np.asarray(b, dtype=np.complex128) for b in blocks])


def shift_matrix(k):
    """k-by-k nilpotent Jordan shift: ones on the superdiagonal."""
    return np.eye(k, k, 1, dtype=np.complex128)


def random_unitary(n, rng):
    """Haar-distributed unitary from the QR factorisation of a Gaussian matrix."""
    rng = np.random.default_rng(rng)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def singular_values(A):
    """All singular values of `A`, non-increasing.

    Computed by an SVD of `A` itself; ``A* A`` is never formed.
    """
    A = np.asarray(A, dtype=np.complex128)
    try:
        s = scipy.linalg.svd(A, compute_uv=False, lapack_driver='gesdd')
    except (np.linalg.LinAlgError, ValueError):
        try:
            s = scipy.linalg.svd(A, compute_uv=False, lapack_driver='gesvd')
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise DecompositionFailure('SVD did not converge') from exc
    return np.asarray(s, dtype=float)


def rank_with_tolerance(A, tol=1e-10):
    """Number of singular values strictly greater than ``tol * s_1(A)``."""
    if tol < 0:
        raise ValueError('tol must be non-negative')
    s = singular_values(A)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


@dataclass(frozen=True)
class EigenData:
    """Eigenvalues grouped into clusters.

    ``clusters[i]`` holds the indices into ``eigenvalues`` whose centroid is
    ``representatives[i]``. Clusters are ordered by decreasing modulus of
    their representative, ties broken by real then imaginary part.
    """
    eigenvalues: np.ndarray
    clusters: tuple
    representatives: np.ndarray
    cluster_tolerance: float

    @property
    def m(self):
        return len(self.clusters)

    def cluster_of(self, index):
        for c, members in enumerate(self.clusters):
            if index in members:
                return c
        raise IndexError(index)


def _single_linkage(values, delta):
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= delta:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def eigen_clustered(A, atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL):
    """Eigenvalues of `A` grouped by single linkage at radius
    ``delta = max(atol, rtol * spr(A))``.

    Raises
    ------
    ClusterAmbiguity
        if a member lies farther than ``delta`` from its cluster centroid or
        two centroids are within ``2 * delta`` of each other.
    """
    if atol < 0 or rtol < 0 or (atol == 0 and rtol == 0):
        raise ValueError('atol and rtol must be non-negative and not both zero')
    A = as_matrix(A)
    try:
        ev = scipy.linalg.eigvals(A)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DecompositionFailure('eigenvalue iteration did not converge') from exc
    spr = float(np.max(np.abs(ev)))
    delta = max(atol, rtol * spr)
    groups = _single_linkage(ev, delta)
    reps = [complex(np.mean(ev[g])) for g in groups]
    order = sorted(range(len(groups)),
                   key=lambda i: (-abs(reps[i]), -reps[i].real, -reps[i].imag))
    groups = [tuple(sorted(groups[i])) for i in order]
    reps = np.array([reps[i] for i in order], dtype=np.complex128)

    for g, r in zip(groups, reps):
        if np.max(np.abs(ev[list(g)] - r)) > delta:
            raise ClusterAmbiguity(
                'cluster around %r spreads beyond delta=%g' % (r, delta))
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if abs(reps[i] - reps[j]) <= 2 * delta:
                raise ClusterAmbiguity(
                    'cluster representatives %r and %r closer than 2*delta=%g'
                    % (reps[i], reps[j], 2 * delta))
    return EigenData(ev, tuple(groups), reps, delta)


def riesz_projection(A, indices, eig=None, atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL):
    """Spectral (Riesz) idempotent of `A` for the eigenvalues ``eig.eigenvalues[indices]``.

    `indices` must be a union of whole clusters of `eig` (computed from `A`
    when omitted). The idempotent is obtained from a complex Schur form
    ordered so the selected eigenvalues come first, ``T = [[T11, T12], [0, T22]]``,
    and the solution ``R`` of ``T11 R - R T22 = T12``; then
    ``Q = Z [[I, R], [0, 0]] Z*``. This stays accurate for non-normal and
    defective `A`, where eigenvector inversion does not.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if eig is None:
        eig = eigen_clustered(A, atol=atol, rtol=rtol)
    sel = set(int(i) for i in indices)
    if not sel <= set(range(len(eig.eigenvalues))):
        raise IndexError('eigenvalue index out of range')
    chosen = [c for c, members in enumerate(eig.clusters) if sel & set(members)]
    for c in chosen:
        if not set(eig.clusters[c]) <= sel:
            raise ValueError('selection must be a union of whole clusters')
    k = len(sel)
    if k == 0:
        return np.zeros((n, n), dtype=np.complex128)
    if k == n:
        return identity(n)

    reps = eig.representatives
    chosen_reps = reps[chosen]
    other_reps = np.delete(reps, chosen)
    gap = np.min(np.abs(chosen_reps[:, None] - other_reps[None, :]))
    if gap <= eig.cluster_tolerance:
        raise IllConditionedSeparation(
            'selected and unselected eigenvalues are %g apart' % gap)

    chosen_set = set(chosen)

    def selected(x):
        nearest = int(np.argmin(np.abs(reps - x)))
        return nearest in chosen_set

    try:
        T, Z, sdim = scipy.linalg.schur(A, output='complex', sort=selected)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DecompositionFailure('ordered Schur form failed') from exc
    if sdim != k:
        raise IllConditionedSeparation(
            'ordered Schur form selected %d eigenvalues, expected %d' % (sdim, k))
    T11, T12, T22 = T[:k, :k], T[:k, k:], T[k:, k:]
    R = scipy.linalg.solve_sylvester(T11, -T22, T12)
    P = np.zeros((n, n), dtype=np.complex128)
    P[:k, :k] = np.eye(k)
    P[:k, k:] = R
    return Z @ P @ adjoint(Z)
