"""Random instance generators shared by tests, the acceptance suite and the CLI."""

import numpy as np

from .gauge import GaugeSpec, KINDS
from .linalg import commutator_norm, op_norm, random_unitary
from .norms import NormHandle


def random_spectrum(m, rng, radius=2.0, min_gap=0.2, min_modulus=0.0):
    """`m` distinct complex numbers in the disk of the given radius, pairwise
    at least `min_gap` apart and of modulus at least `min_modulus`."""
    rng = np.random.default_rng(rng)
    out = []
    while len(out) < m:
        z = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if abs(z) < min_modulus:
            continue
        if all(abs(z - w) >= min_gap for w in out):
            out.append(complex(z))
    return np.array(out)


def random_multiplicities(m, n, rng):
    """Random composition of `n` into `m` positive parts."""
    rng = np.random.default_rng(rng)
    cuts = np.sort(rng.choice(np.arange(1, n), size=m - 1, replace=False)) if m > 1 else []
    parts = np.diff(np.r_[0, cuts, n]).astype(int)
    return parts


def random_normal(n, rng, m=None, **spectrum_kw):
    """``(N, eigenvalue list with multiplicity)`` for ``N = U diag U*``."""
    rng = np.random.default_rng(rng)
    if m is None:
        m = int(rng.integers(1, n + 1))
    lam = random_spectrum(m, rng, **spectrum_kw)
    mult = random_multiplicities(m, n, rng)
    diag = np.repeat(lam, mult)
    U = random_unitary(n, rng)
    return U @ np.diag(diag) @ U.conj().T, diag


def similar_non_normal(diag, rng, min_commutator=0.1, strength=(0.3, 2.0), max_tries=200):
    """Non-normal matrix with the same eigenvalues (and multiplicities) as
    ``diag``, with ``||A A* - A* A|| >= min_commutator * ||A||**2``.

    Random mix of two constructions: an upper-triangular perturbation of the
    diagonal (possibly defective) and an oblique similarity ``S D S^-1``.
    """
    rng = np.random.default_rng(rng)
    diag = np.asarray(diag, dtype=complex)
    n = diag.size
    D = np.diag(diag)
    for _ in range(max_tries):
        t = rng.uniform(*strength)
        G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        if rng.uniform() < 0.5:
            B = D + t * np.triu(G, 1)
        else:
            S = np.eye(n) + t * G / np.sqrt(n)
            if np.linalg.cond(S) > 1e3:
                continue
            B = S @ D @ np.linalg.inv(S)
        U = random_unitary(n, rng)
        A = U @ B @ U.conj().T
        if commutator_norm(A) >= min_commutator * op_norm(A) ** 2:
            return A
    raise RuntimeError('could not draw a sufficiently non-normal matrix')


def random_weights(k, rng):
    rng = np.random.default_rng(rng)
    return tuple(np.sort(rng.uniform(0.1, 3.0, size=k))[::-1])


def random_gauge(n, rng, kind=None):
    """Random member of the five gauge families with arity `n`."""
    rng = np.random.default_rng(rng)
    if kind is None:
        kind = KINDS[int(rng.integers(len(KINDS)))]
    p = float(rng.uniform(1.0, 4.0))
    k = int(rng.integers(1, n + 1))
    if kind == 'lp':
        return GaugeSpec.lp(p, n)
    if kind == 'kyfan':
        return GaugeSpec.ky_fan(k, n)
    if kind == 'topkp':
        return GaugeSpec.top_k_p(k, p, n)
    if kind == 'weighted_kyfan':
        return GaugeSpec.weighted_ky_fan(random_weights(k, rng), n)
    return GaugeSpec.cp(random_weights(k, rng), p, n)


def random_handle(n, rng, kind=None):
    return NormHandle(random_gauge(n, rng, kind))
