"""Polynomial functional calculus on matrices."""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import IllConditionedSpectrum, NonFiniteResult, ToleranceAmbiguity
from .linalg import as_matrix, identity, op_norm

__all__ = ['Polynomial', 'LagrangeBasis', 'poly_eval_matrix',
           'minimal_polynomial', 'lagrange_basis', 'reconstruction_poly',
           'random_polynomial', 'eval_condition']

GAP_RTOL = 1e-8


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial, coefficients in ascending degree.

    Exact trailing zeros are stripped, so the zero polynomial has
    ``coeffs == ()`` and ``degree == -1``.
    """
    coeffs: tuple = ()

    def __post_init__(self):
        c = [complex(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, 'coeffs', tuple(c))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, value):
        return cls((value,))

    @classmethod
    def from_roots(cls, roots):
        """Monic polynomial with the given roots."""
        return cls(tuple(npoly.polyfromroots(np.asarray(roots, dtype=complex))))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def array(self):
        return np.array(self.coeffs, dtype=np.complex128)

    def __call__(self, z):
        if self.is_zero():
            return np.zeros_like(np.asarray(z, dtype=complex))
        return npoly.polyval(z, self.array())

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial((other,))

    def __add__(self, other):
        other = self._coerce(other)
        return Polynomial(tuple(npoly.polyadd(self.array() if self.coeffs else [0],
                                              other.array() if other.coeffs else [0])))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        return Polynomial(tuple(npoly.polymul(self.array(), other.array())))

    __rmul__ = __mul__

    def at_zero(self):
        return self.coeffs[0] if self.coeffs else 0j

    def without_constant(self):
        if not self.coeffs:
            return self
        return Polynomial((0,) + self.coeffs[1:])

    def monic(self):
        return Polynomial(tuple(c / self.coeffs[-1] for c in self.coeffs))

    def __repr__(self):
        return 'Polynomial(%r)' % (list(self.coeffs),)


def eval_condition(p, rho):
    """``sum |c_j| rho**j``: bounds the size of every intermediate in Horner
    evaluation at a point (or matrix) of modulus (norm) at most `rho`."""
    if p.is_zero():
        return 0.0
    return float(np.sum(np.abs(p.array()) * rho ** np.arange(len(p.coeffs))))


def poly_eval_matrix(p, A):
    """``p(A)`` by Horner's rule; the constant term contributes ``c_0 I``."""
    A = as_matrix(A)
    n = A.shape[0]
    if p.is_zero():
        return np.zeros((n, n), dtype=np.complex128)
    c = p.coeffs
    I = identity(n)
    R = c[-1] * I
    with np.errstate(over='ignore', invalid='ignore'):
        for cj in reversed(c[:-1]):
            R = R @ A + cj * I
    if not np.all(np.isfinite(R)):
        raise NonFiniteResult('polynomial evaluation overflowed')
    return R


def minimal_polynomial(A, tol=1e-9):
    """Monic polynomial of least degree annihilating `A` to tolerance `tol`.

    With ``B = A / ||A||`` the powers ``I, B, B**2, ...`` are tested for
    linear dependence: degree ``d`` is accepted once the least-squares
    residual of ``B**d`` against the lower powers, measured as a normalised
    Frobenius norm, is below ``tol / 10``. A residual between ``tol / 10``
    and ``10 * tol`` raises :class:`ToleranceAmbiguity`.
    """
    if tol <= 0:
        raise ValueError('tol must be positive')
    A = as_matrix(A)
    n = A.shape[0]
    s = op_norm(A)
    if s == 0.0:
        return Polynomial.x()
    B = A / s
    cols = [identity(n).ravel()]
    P = identity(n)
    for d in range(1, n + 1):
        P = P @ B
        K = np.column_stack(cols)
        b = P.ravel()
        a, *_ = np.linalg.lstsq(K, b, rcond=None)
        res = np.linalg.norm(b - K @ a) / np.sqrt(n)
        if res <= tol / 10:
            coeffs = [-a[j] * s ** (d - j) for j in range(d)] + [1.0]
            return Polynomial(tuple(coeffs))
        if res <= 10 * tol:
            raise ToleranceAmbiguity(
                'degree-%d dependence residual %.3e is within a factor 10 of tol=%.1e'
                % (d, res, tol), residual=res, tol=tol)
        cols.append(b)
    raise ToleranceAmbiguity('no dependence found up to degree n; '
                             'residual %.3e' % res, residual=res, tol=tol)


class LagrangeBasis:
    """The polynomials ``p_i`` with ``p_i(lambda_j) = delta_ij``.

    Behaves as a sequence of :class:`Polynomial`. ``kappa`` is the largest
    :func:`eval_condition` of a basis polynomial at radius
    ``max(1, max|lambda|)``; rounding error of ``p_i(lambda_j)`` is of order
    ``kappa * eps``.
    """

    def __init__(self, nodes, polys, kappa):
        self.nodes = nodes
        self.polys = polys
        self.kappa = kappa

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]


def _check_nodes(lambdas):
    lam = np.asarray(lambdas, dtype=np.complex128).ravel()
    if lam.size < 2:
        raise ValueError('need at least two nodes')
    d = np.abs(lam[:, None] - lam[None, :])
    gap = np.min(d[~np.eye(lam.size, dtype=bool)])
    scale = np.max(np.abs(lam))
    if gap == 0 or gap < GAP_RTOL * scale:
        raise IllConditionedSpectrum('minimum node gap %.3e is below %.0e * %.3e'
                                     % (gap, GAP_RTOL, scale))
    return lam


def lagrange_basis(lambdas):
    lam = _check_nodes(lambdas)
    polys = []
    for i in range(lam.size):
        others = np.delete(lam, i)
        denom = np.prod(lam[i] - others)
        polys.append(Polynomial(tuple(npoly.polyfromroots(others) / denom)))
    rho = max(1.0, float(np.max(np.abs(lam))))
    kappa = max(eval_condition(p, rho) for p in polys)
    return LagrangeBasis(lam, polys, kappa)


def reconstruction_poly(lambdas):
    """``z - sum_i lambda_i p_i(z)``; identically zero up to rounding since
    the interpolant of ``z`` on two or more nodes is ``z`` itself."""
    basis = lagrange_basis(lambdas)
    acc = Polynomial.x()
    for lam, p in zip(basis.nodes, basis):
        acc = acc - complex(lam) * p
    return acc


def random_polynomial(max_degree, seed):
    """Polynomial of degree `max_degree` with iid standard complex Gaussian
    coefficients. `seed` is anything ``numpy.random.default_rng`` accepts."""
    if max_degree < 0:
        raise ValueError('max_degree must be non-negative')
    rng = np.random.default_rng(seed)
    m = max_degree + 1
    c = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)
    return Polynomial(tuple(c))
