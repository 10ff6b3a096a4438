"""Unitarily-invariant matrix norms: gauges applied to singular spectra."""

from dataclasses import dataclass

import numpy as np

from .errors import ArityMismatch
from .gauge import GaugeSpec, gauge_eval
from .linalg import singular_values

__all__ = ['NormHandle', 'ui_norm', 'cp_sandwich_check', 'separates_rank',
           'schatten', 'operator_norm', 'ky_fan', 'cp_norm', 'accepts_dim']

FLUSH = 1e-300


@dataclass(frozen=True)
class NormHandle:
    gauge: GaugeSpec
    label: str = ''

    def __post_init__(self):
        if not self.label:
            object.__setattr__(self, 'label', self.gauge.describe())

    def __call__(self, A):
        return ui_norm(A, self)


def schatten(p, n):
    return NormHandle(GaugeSpec.lp(p, n), 'schatten-%g' % p)


def operator_norm(n):
    return NormHandle(GaugeSpec.ky_fan(1, n), 'operator')


def ky_fan(k, n):
    return NormHandle(GaugeSpec.ky_fan(k, n))


def cp_norm(c, p, n=None):
    return NormHandle(GaugeSpec.cp(c, p, len(c) if n is None else n))


def accepts_dim(h, n):
    """Whether `h` can measure an ``n x n`` matrix.

    Smaller matrices are zero-padded. Larger ones are only admissible when
    the gauge reads a bounded number of leading singular values; the
    ``lp`` family reads all of them, so its arity must cover `n`.
    """
    g = h.gauge
    return n <= g.arity or g.kind != 'lp'


def _spectrum_for(h, A):
    s = singular_values(A)
    s = np.where(s < FLUSH, 0.0, s)
    arity = h.gauge.arity
    if s.size < arity:
        s = np.concatenate([s, np.zeros(arity - s.size)])
    elif s.size > arity:
        if h.gauge.kind == 'lp':
            raise ArityMismatch('%dx%d matrix for an lp gauge of arity %d'
                                % (s.size, s.size, arity))
        s = s[:arity]
    return s


def ui_norm(A, h):
    """``gauge(singular_values(A))`` for the handle `h`."""
    return gauge_eval(h.gauge, _spectrum_for(h, A))


def cp_sandwich_check(A, c, p):
    """``(c_1**(1/p) * ||A||, ||A||_{c,p}, (sum c)**(1/p) * ||A||)``.

    The middle value always lies between the outer two.
    """
    A = np.asarray(A, dtype=np.complex128)
    n = A.shape[0]
    g = GaugeSpec.cp(c, p, max(n, len(c)))
    value = ui_norm(A, NormHandle(g))
    s1 = float(singular_values(A)[0])
    lower = g.c[0] ** (1.0 / g.p) * s1
    upper = float(np.sum(g.c)) ** (1.0 / g.p) * s1
    return lower, value, upper


def rank_projection_norms(h, n):
    """Norms of rank-k orthogonal projections, k = 0..n."""
    arity = h.gauge.arity
    return [gauge_eval(h.gauge, np.r_[np.ones(k), np.zeros(arity - k)])
            for k in range(n + 1)]


def separates_rank(h, n, rtol=1e-12):
    """Whether `h` gives distinct norms to projections of distinct ranks in
    dimension `n`.

    Values closer than `rtol` relative count as equal; a difference that
    small cannot be used to tell ranks apart numerically.
    """
    if n < 1 or h.gauge.arity < n:
        raise ArityMismatch('need 1 <= n <= arity')
    vals = np.sort(rank_projection_norms(h, n))
    gaps = np.diff(vals)
    return bool(np.all(gaps > rtol * np.maximum(vals[1:], 1.0)))
