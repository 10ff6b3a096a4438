"""Symmetric gauge functions and weak majorization.

Five parametric families are supported. Each is evaluated on the
non-increasing rearrangement ``xt`` of a non-negative vector:

=================  =================================
``lp``             ``(sum xt_j**p) ** (1/p)``
``kyfan``          ``sum_{j<=k} xt_j``
``weighted_kyfan`` ``sum_j c_j xt_j``
``cp``             ``(sum_j c_j xt_j**p) ** (1/p)``
``topkp``          ``(sum_{j<=k} xt_j**p) ** (1/p)``
=================  =================================
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArityMismatch, InvalidGauge, InvalidShape

__all__ = ['GaugeSpec', 'gauge_eval', 'weakly_majorizes',
           'comparison_lemma_gap', 'KINDS']

KINDS = ('lp', 'kyfan', 'weighted_kyfan', 'cp', 'topkp')


@dataclass(frozen=True)
class GaugeSpec:
    kind: str
    arity: int
    p: float = None
    k: int = None
    c: tuple = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidGauge('unknown gauge kind %r' % (self.kind,))
        if not isinstance(self.arity, (int, np.integer)) or self.arity < 1:
            raise InvalidGauge('arity must be a positive integer')
        if self.kind in ('lp', 'cp', 'topkp'):
            if self.p is None or not np.isfinite(self.p) or self.p < 1:
                raise InvalidGauge('p must be a finite real >= 1')
            object.__setattr__(self, 'p', float(self.p))
        if self.kind in ('kyfan', 'topkp'):
            if not isinstance(self.k, (int, np.integer)) or self.k < 1:
                raise InvalidGauge('k must be a positive integer')
            if self.k > self.arity:
                raise InvalidGauge('k=%d exceeds arity %d' % (self.k, self.arity))
        if self.kind in ('weighted_kyfan', 'cp'):
            if self.c is None or len(self.c) == 0:
                raise InvalidGauge('weights c must be non-empty')
            c = tuple(float(v) for v in self.c)
            if not all(np.isfinite(v) and v > 0 for v in c):
                raise InvalidGauge('weights must be finite and positive')
            if any(c[j] < c[j + 1] for j in range(len(c) - 1)):
                raise InvalidGauge('weights must be non-increasing')
            if len(c) > self.arity:
                raise InvalidGauge('%d weights exceed arity %d' % (len(c), self.arity))
            object.__setattr__(self, 'c', c)

    # constructors -------------------------------------------------------

    @classmethod
    def lp(cls, p, arity):
        return cls('lp', arity, p=p)

    @classmethod
    def ky_fan(cls, k, arity):
        return cls('kyfan', arity, k=k)

    @classmethod
    def weighted_ky_fan(cls, c, arity):
        return cls('weighted_kyfan', arity, c=tuple(c))

    @classmethod
    def cp(cls, c, p, arity):
        return cls('cp', arity, p=p, c=tuple(c))

    @classmethod
    def top_k_p(cls, k, p, arity):
        return cls('topkp', arity, k=k, p=p)

    @property
    def support(self):
        """Number of leading sorted entries the value depends on."""
        if self.kind == 'lp':
            return self.arity
        if self.kind in ('kyfan', 'topkp'):
            return self.k
        return len(self.c)

    def with_arity(self, arity):
        return GaugeSpec(self.kind, arity, p=self.p, k=self.k, c=self.c)

    def to_dict(self):
        d = {'kind': self.kind}
        if self.c is not None:
            d['c'] = list(self.c)
        if self.k is not None:
            d['k'] = int(self.k)
        if self.p is not None:
            d['p'] = self.p
        d['arity'] = int(self.arity)
        return d

    def describe(self):
        if self.kind == 'lp':
            return 'schatten-%g' % self.p
        if self.kind == 'kyfan':
            return 'kyfan-%d' % self.k
        if self.kind == 'topkp':
            return '[%g,%d]-singular' % (self.p, self.k)
        if self.kind == 'cp':
            return '(c,%g)' % self.p
        return 'weighted-kyfan'


def _as_nonneg(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidShape('expected a vector')
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise InvalidShape('entries must be finite and non-negative')
    return x


def _power_sum(v, w, p):
    """``(sum w_j v_j**p) ** (1/p)`` with scaling against overflow."""
    top = v.max() if v.size else 0.0
    if top == 0.0:
        return 0.0
    u = v / top
    return float(top * np.sum(w * u ** p) ** (1.0 / p))


def gauge_eval(g, x):
    """Value of the gauge `g` at the non-negative vector `x`."""
    x = _as_nonneg(x)
    if x.size != g.arity:
        raise ArityMismatch('vector of length %d for gauge of arity %d'
                            % (x.size, g.arity))
    xt = np.sort(x)[::-1]
    if g.kind == 'lp':
        return _power_sum(xt, 1.0, g.p)
    if g.kind == 'kyfan':
        return float(np.sum(xt[:g.k]))
    if g.kind == 'topkp':
        return _power_sum(xt[:g.k], 1.0, g.p)
    c = np.asarray(g.c)
    head = xt[:c.size]
    if g.kind == 'weighted_kyfan':
        return float(np.dot(c, head))
    return _power_sum(head, c, g.p)


def weakly_majorizes(x, y):
    """True iff ``x`` is weakly majorized by ``y`` (every partial sum of the
    sorted-descending `x` is at most the matching partial sum of `y`).

    Floating partial sums are compared exactly.
    """
    x, y = _as_nonneg(x), _as_nonneg(y)
    if x.size != y.size:
        raise ArityMismatch('vectors of lengths %d and %d' % (x.size, y.size))
    sx = np.cumsum(np.sort(x)[::-1])
    sy = np.cumsum(np.sort(y)[::-1])
    return bool(np.all(sx <= sy))


def comparison_lemma_gap(g, p, q, r):
    """Return ``(gauge(x), gauge(y))`` for

    ``x = (0 * p, 1 * q, 1 * k)`` and ``y = (0 * p, 1 * q, 1 + r_1, ..., 1 + r_k)``.

    Every symmetric gauge satisfies ``gauge(y) >= (1 + r_1/(2q)) * gauge(x)``
    for these vectors.
    """
    r = np.asarray(r, dtype=float).ravel()
    if int(p) != p or p < 0 or int(q) != q or q < 1:
        raise InvalidShape('need integers p >= 0, q >= 1')
    if r.size < 1 or not np.all(np.isfinite(r)) or r[0] <= 0 or np.any(np.diff(r) <= 0):
        raise InvalidShape('r must be positive and strictly increasing')
    p, q = int(p), int(q)
    if g.arity != p + q + r.size:
        raise ArityMismatch('gauge arity %d != p+q+k = %d' % (g.arity, p + q + r.size))
    x = np.concatenate([np.zeros(p), np.ones(q), np.ones(r.size)])
    y = np.concatenate([np.zeros(p), np.ones(q), 1.0 + r])
    return gauge_eval(g, x), gauge_eval(g, y)
