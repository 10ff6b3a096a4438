"""Decision procedures for polynomial isometry against a normal matrix.

The normality certificate replays, numerically, the argument that a matrix
polynomially isometric to a normal matrix ``N`` is itself normal: only
finitely many polynomials are needed (the minimal polynomial of ``N``, its
Lagrange idempotent polynomials, their squares and pairwise products), so
each step becomes a comparison ``||w(A)||_u`` against ``||w(N)||_u`` for an
explicit polynomial ``w``. A failed comparison returns ``w`` as witness.
"""

from dataclasses import asdict, dataclass, field, replace

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._parallel import pmap
from .errors import (DimensionMismatch, NotInvertible, NotNormalReference,
                     PreconditionFailure, ToleranceAmbiguity)
from .linalg import (adjoint, as_matrix, commutator_norm, eigen_clustered,
                     identity, op_norm, rank_with_tolerance, singular_values)
from .norms import accepts_dim, schatten, separates_rank, ui_norm
from .polycalc import (Polynomial, eval_condition, lagrange_basis,
                       minimal_polynomial, poly_eval_matrix, random_polynomial)

__all__ = ['NORMAL', 'NOT_ISOMETRIC', 'INCONCLUSIVE', 'TolProfile', 'Check',
           'NormalityCertificate', 'IsometryReport', 'isometry_defect',
           'certify_normality', 'projection_lemma_check',
           'certify_constant_free', 'projection_idempotent_pair', 'example_502']

NORMAL = 'Normal'
NOT_ISOMETRIC = 'NotIsometric'
INCONCLUSIVE = 'Inconclusive'

EPS_FLOOR = 1e-300


@dataclass(frozen=True)
class TolProfile:
    """Tolerances used by the certificates.

    A polynomial comparison ``||w(A)|| = ||w(N)||`` passes when the gap is
    at most ``norm_equality * max(lhs, rhs) + annihilation * cond(w) * ||I||``
    where ``cond(w)`` is :func:`~polyiso.polycalc.eval_condition` at
    ``max(1, ||A||, ||N||)``. Gaps up to ``inconclusive_band`` times the
    tolerance are reported as inconclusive rather than as failures.
    """
    norm_equality: float = 1e-8
    annihilation: float = 1e-8
    selfadjoint: float = 1e-8
    normality: float = 1e-8
    rank: float = 1e-8
    invertibility: float = 1e-10
    minpoly: float = 1e-9
    cluster_atol: float = 1e-10
    cluster_rtol: float = 1e-8
    inconclusive_band: float = 10.0

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError('unknown tolerance fields: %s' % ', '.join(sorted(unknown)))
        return cls(**{k: float(v) for k, v in d.items()})

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float
    rhs: float
    tol: float
    passed: bool
    status: str = 'pass'          # 'pass', 'band' or 'fail'
    witness: Polynomial = None

    @property
    def gap(self):
        return abs(self.lhs - self.rhs)


def _classify(gap, tol, band):
    if gap <= tol:
        return 'pass'
    if gap <= band * tol:
        return 'band'
    return 'fail'


def _check(name, lhs, rhs, tol, band, witness=None):
    status = _classify(abs(lhs - rhs), tol, band)
    return Check(name, float(lhs), float(rhs), float(tol), status == 'pass',
                 status, witness)


@dataclass
class NormalityCertificate:
    verdict: str
    lambdas: np.ndarray
    checks: list
    idempotents: list = field(default_factory=list)
    witness: Polynomial = None
    reconstruction: np.ndarray = None
    ranks_match: bool = None
    kappa: float = None
    norm_label: str = ''
    note: str = ''

    @property
    def unitarily_similar(self):
        return self.verdict == NORMAL and self.ranks_match is True

    def failed(self):
        return [c for c in self.checks if not c.passed]

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class IsometryReport:
    samples: int
    max_rel_defect: float
    worst_polynomial: Polynomial
    degree_bound: int
    seed: int
    constant_free: bool = False


def _relative_defect(a, b):
    return abs(a - b) / max(a, b, EPS_FLOOR)


def isometry_defect(A, B, h, max_degree, samples, seed=0, constant_free=False,
                    hB=None):
    """Largest relative gap ``|‖p(A)‖ - ‖p(B)‖| / max(‖p(A)‖, ‖p(B)‖)`` over
    `samples` random polynomials of degree `max_degree`.

    Sample ``i`` uses the ``i``-th child of ``SeedSequence(seed)``, so the
    result is independent of evaluation order. With `constant_free` the
    constant coefficient is zeroed. `hB` optionally measures `B` with a
    different handle (matrices of different sizes).
    """
    A, B = as_matrix(A), as_matrix(B)
    hB = h if hB is None else hB
    if samples < 1:
        raise ValueError('samples must be >= 1')
    if not (accepts_dim(h, A.shape[0]) and accepts_dim(hB, B.shape[0])):
        raise DimensionMismatch('norm handle cannot measure %s and %s matrices'
                                % (A.shape, B.shape))
    children = np.random.SeedSequence(seed).spawn(samples)

    def one(child):
        p = random_polynomial(max_degree, child)
        if constant_free:
            p = p.without_constant()
        a = ui_norm(poly_eval_matrix(p, A), h)
        b = ui_norm(poly_eval_matrix(p, B), hB)
        return _relative_defect(a, b), p

    results = pmap(one, children)
    worst = max(range(samples), key=lambda i: (results[i][0], -i))
    return IsometryReport(samples, float(results[worst][0]), results[worst][1],
                          max_degree, seed, constant_free)


class _Comparer:
    """Evaluates ``||w(A)||`` against ``||w(N)||`` with the profile's tolerance."""

    def __init__(self, A, N, hA, hN, prof):
        self.A, self.N, self.hA, self.hN, self.prof = A, N, hA, hN, prof
        self.rho = max(1.0, op_norm(A), op_norm(N))
        self.ident = max(ui_norm(identity(A.shape[0]), hA),
                         ui_norm(identity(N.shape[0]), hN))

    def tol_for(self, lhs, rhs, cond):
        p = self.prof
        return p.norm_equality * max(lhs, rhs) + p.annihilation * cond * self.ident

    def poly(self, name, w):
        lhs = ui_norm(poly_eval_matrix(w, self.A), self.hA)
        rhs = ui_norm(poly_eval_matrix(w, self.N), self.hN)
        tol = self.tol_for(lhs, rhs, eval_condition(w, self.rho))
        return _check(name, lhs, rhs, tol, self.prof.inconclusive_band, w)

    def matrices(self, name, XA, XN, cond):
        lhs = ui_norm(XA, self.hA)
        rhs = ui_norm(XN, self.hN)
        tol = self.tol_for(lhs, rhs, cond)
        return _check(name, lhs, rhs, tol, self.prof.inconclusive_band)


def _verdict(checks):
    """First hard failure with a witness decides NotIsometric; any other
    failure or a band result is Inconclusive."""
    for c in checks:
        if c.status == 'fail' and c.witness is not None:
            return NOT_ISOMETRIC, c.witness
    if all(c.passed for c in checks):
        return NORMAL, None
    return INCONCLUSIVE, None


def _require_normal(N, prof):
    scale = op_norm(N) ** 2
    if commutator_norm(N) > prof.normality * scale:
        raise NotNormalReference('reference matrix is not normal: '
                                 '||NN*-N*N|| = %.3e' % commutator_norm(N))


def certify_normality(A, N, h, tol=None):
    """Run the normality certification of `A` against the normal matrix `N`
    under the unitarily-invariant norm `h`.

    Steps, each recorded in ``checks``:

    1. ``mu_N`` (minimal polynomial of ``N`` from its clustered eigenvalues)
       must annihilate `A` as well: ``||mu_N(A)|| = ||mu_N(N)|| = 0``.
    2. One distinct eigenvalue ``lam``: ``||A - lam I|| = 0``.
    3. Otherwise, with Lagrange polynomials ``p_i``, ``Q_i = p_i(A)`` and
       ``P_i = p_i(N)``: equal norms of ``p_i``, ``1 - p_i``, ``p_i - p_i**2``
       and ``p_i p_j``; ``Q_i`` selfadjoint; ``sum Q_i = I``.
    4. ``A = sum lam_i Q_i``.
    5. If `h` separates projections by rank, ``rank P_i = rank Q_i``.
    """
    prof = tol or TolProfile()
    A, N = as_matrix(A), as_matrix(N)
    if A.shape != N.shape:
        raise DimensionMismatch('A is %s but N is %s' % (A.shape, N.shape))
    n = A.shape[0]
    if not accepts_dim(h, n):
        raise DimensionMismatch('norm of arity %d cannot measure %dx%d matrices'
                                % (h.gauge.arity, n, n))
    _require_normal(N, prof)
    eig = eigen_clustered(N, atol=prof.cluster_atol, rtol=prof.cluster_rtol)
    lambdas = eig.representatives
    m = eig.m
    cmp = _Comparer(A, N, h, h, prof)
    checks = []

    mu = Polynomial.from_roots(lambdas)
    checks.append(cmp.poly('spectrum containment ||mu_N(A)|| = ||mu_N(N)||', mu))

    can_rank = h.gauge.arity >= n and separates_rank(h, n)
    I = identity(n)
    if m == 1:
        lam = complex(lambdas[0])
        w = Polynomial((-lam, 1))
        checks.append(cmp.poly('scalar ||A - lambda I|| = ||N - lambda I||', w))
        verdict, witness = _verdict(checks)
        return NormalityCertificate(
            verdict, lambdas, checks, idempotents=[I], witness=witness,
            reconstruction=lam * I, ranks_match=True if can_rank else None,
            kappa=1.0, norm_label=h.label)

    basis = lagrange_basis(lambdas)
    Q = [poly_eval_matrix(p, A) for p in basis]
    P = [poly_eval_matrix(p, N) for p in basis]
    conds = [eval_condition(p, cmp.rho) for p in basis]
    for i, p in enumerate(basis):
        k = i + 1
        checks.append(cmp.poly('||Q_%d|| = ||P_%d||' % (k, k), p))
        checks.append(cmp.poly('||I - Q_%d|| = ||I - P_%d||' % (k, k), 1 - p))
        checks.append(cmp.poly('idempotent ||Q_%d - Q_%d^2|| = ||P_%d - P_%d^2||'
                               % (k, k, k, k), p - p * p))
    for i in range(m):
        for j in range(i + 1, m):
            checks.append(cmp.poly('||Q_%d Q_%d|| = ||P_%d P_%d||'
                                   % (i + 1, j + 1, i + 1, j + 1), basis[i] * basis[j]))
    for i, Qi in enumerate(Q):
        sa = op_norm(Qi - adjoint(Qi))
        checks.append(_check('selfadjoint ||Q_%d - Q_%d*||' % (i + 1, i + 1), sa, 0.0,
                             prof.selfadjoint * (1 + op_norm(Qi)),
                             prof.inconclusive_band))
    checks.append(cmp.matrices('partition ||sum Q_i - I|| = ||sum P_i - I||',
                               sum(Q) - I, sum(P) - I, sum(conds)))
    R_A = sum(complex(l) * Qi for l, Qi in zip(lambdas, Q))
    R_N = sum(complex(l) * Pi for l, Pi in zip(lambdas, P))
    cond_rec = cmp.rho + sum(abs(l) * c for l, c in zip(lambdas, conds))
    rec = cmp.matrices('reconstruction ||A - sum lambda_i Q_i|| = ||N - sum lambda_i P_i||',
                       A - R_A, N - R_N, cond_rec)
    # the reconstruction polynomial vanishes identically; keep it only as a label
    checks.append(replace(rec, witness=None))

    ranks_match = None
    if can_rank:
        rq = [rank_with_tolerance(Qi, prof.rank) for Qi in Q]
        rp = [rank_with_tolerance(Pi, prof.rank) for Pi in P]
        ranks_match = rq == rp
        checks.append(Check('rank P_i = rank Q_i', float(sum(rq)), float(sum(rp)),
                            0.0, ranks_match, 'pass' if ranks_match else 'fail'))

    verdict, witness = _verdict(checks)
    return NormalityCertificate(verdict, lambdas, checks, idempotents=Q,
                                witness=witness, reconstruction=R_A,
                                ranks_match=ranks_match, kappa=basis.kappa,
                                norm_label=h.label)


def projection_lemma_check(P, Q, h, tol=1e-10, sa_tol=None):
    """Given an orthogonal projection `P` and an idempotent `Q` with
    ``||P|| = ||Q||`` and ``||I - P|| = ||I - Q||``, report whether `Q` is
    selfadjoint, i.e. ``||Q - Q*|| <= sa_tol * (1 + ||Q||)``.

    Under these hypotheses `Q` is always an orthogonal projection; a
    ``False`` return means the arithmetic is inconsistent. Violated
    hypotheses raise :class:`PreconditionFailure`.
    """
    sa_tol = tol if sa_tol is None else sa_tol
    P, Q = as_matrix(P), as_matrix(Q)
    if P.shape != Q.shape:
        raise DimensionMismatch('P is %s but Q is %s' % (P.shape, Q.shape))
    n = P.shape[0]
    nP, nQ = op_norm(P), op_norm(Q)
    e = op_norm(P @ P - P)
    if e > tol * (1 + nP) ** 2:
        raise PreconditionFailure('P is not idempotent', e, 0.0)
    e = op_norm(P - adjoint(P))
    if e > tol * (1 + nP):
        raise PreconditionFailure('P is not selfadjoint', e, 0.0)
    e = op_norm(Q @ Q - Q)
    if e > tol * (1 + nQ) ** 2:
        raise PreconditionFailure('Q is not idempotent', e, 0.0)
    a, b = ui_norm(P, h), ui_norm(Q, h)
    if abs(a - b) > tol * max(a, b):
        raise PreconditionFailure('||P||_u != ||Q||_u', a, b)
    I = identity(n)
    a, b = ui_norm(I - P, h), ui_norm(I - Q, h)
    if abs(a - b) > tol * max(a, b):
        raise PreconditionFailure('||I - P||_u != ||I - Q||_u', a, b)
    return bool(op_norm(Q - adjoint(Q)) <= sa_tol * (1 + nQ))


def _constant_free_form(r, mu):
    """Polynomial ``q`` with ``q(0) = 0``, degree below ``deg mu + 1``, and
    ``q(X) = r(X)`` for every ``X`` annihilated by ``mu`` (``mu(0) != 0``).

    ``r`` is reduced modulo ``mu`` first; then, since
    ``nu(X) = mu(X) - mu(0) I = -mu(0) I``, the constant ``r_0`` is replaced
    by ``-(r_0 / mu(0)) nu``.
    """
    if r.is_zero():
        return r
    _, rem = npoly.polydiv(r.array(), mu.array())
    r = Polynomial(tuple(rem))
    r0 = r.at_zero()
    mu0 = mu.at_zero()
    nu = mu - mu0
    return r.without_constant() - (r0 / mu0) * nu


def _smallest_singular_ratio(X):
    s = singular_values(X)
    return s[-1] / s[0] if s[0] > 0 else 0.0


def certify_constant_free(A, N, p, tol=None):
    """Certify normality of the invertible `A` from Schatten-`p` norms of
    polynomials without constant term only.

    `A` (m x m) and `N` (n x n) may differ in size. Steps:

    1. ``mu_N`` and ``mu_A`` annihilate each other's matrix, tested through
       the constant-free polynomials ``z mu_N`` and ``z mu_A``.
    2. ``mu(0) != 0`` for the common minimal polynomial ``mu``.
    3. With ``nu = mu - mu(0)``: ``||nu(A)||_p = |mu(0)| m**(1/p)`` must equal
       ``||nu(N)||_p = |mu(0)| n**(1/p)``, which forces ``m = n``.
    4. :func:`certify_normality` under the Schatten-`p` norm. A witness
       found there is converted to a constant-free polynomial of degree at
       most ``deg mu`` and re-checked.
    """
    prof = tol or TolProfile()
    A, N = as_matrix(A), as_matrix(N)
    m, n = A.shape[0], N.shape[0]
    if p < 1 or not np.isfinite(p):
        raise ValueError('p must be a finite real >= 1')
    if _smallest_singular_ratio(A) <= prof.invertibility:
        raise NotInvertible('A is not invertible')
    if _smallest_singular_ratio(N) <= prof.invertibility:
        raise NotInvertible('N is not invertible')
    _require_normal(N, prof)

    hA, hN = schatten(p, m), schatten(p, n)
    eig = eigen_clustered(N, atol=prof.cluster_atol, rtol=prof.cluster_rtol)
    lambdas = eig.representatives
    cmp = _Comparer(A, N, hA, hN, prof)
    z = Polynomial.x()
    mu_N = Polynomial.from_roots(lambdas)
    checks = [cmp.poly('||A mu_N(A)|| = ||N mu_N(N)||', z * mu_N)]

    def finish(note=''):
        verdict, witness = _verdict(checks)
        if verdict == NORMAL and note:
            verdict = INCONCLUSIVE
        return NormalityCertificate(verdict, lambdas, checks, witness=witness,
                                    norm_label=hN.label, note=note)

    try:
        mu_A = minimal_polynomial(A, prof.minpoly)
    except ToleranceAmbiguity as exc:
        return finish('minimal polynomial of A is ambiguous: %s' % exc)
    checks.append(cmp.poly('||A mu_A(A)|| = ||N mu_A(N)||', z * mu_A))
    verdict, _ = _verdict(checks)
    if verdict != NORMAL:
        return finish()
    if mu_A.degree != mu_N.degree:
        return finish('minimal polynomial degrees differ (%d vs %d) although both '
                      'annihilation checks pass' % (mu_A.degree, mu_N.degree))

    mu = mu_N
    mu0 = mu.at_zero()
    checks.append(Check('mu(0) != 0', abs(mu0), 0.0, 0.0, abs(mu0) > 0,
                        'pass' if abs(mu0) > 0 else 'fail'))
    nu = mu - mu0
    dim_check = cmp.poly('dimension ||nu(A)||_p = ||nu(N)||_p '
                         '(|mu(0)| m^(1/p) = %.17g, |mu(0)| n^(1/p) = %.17g)'
                         % (abs(mu0) * m ** (1 / p), abs(mu0) * n ** (1 / p)), nu)
    checks.append(dim_check)
    verdict, _ = _verdict(checks)
    if verdict != NORMAL:
        return finish()
    if m != n:
        return finish('dimension check passed numerically although m != n')

    full = certify_normality(A, N, hN, prof)
    checks.extend(replace(c, name='full: ' + c.name, witness=None) for c in full.checks)
    cert = NormalityCertificate(full.verdict, lambdas, checks,
                                idempotents=full.idempotents,
                                reconstruction=full.reconstruction,
                                ranks_match=full.ranks_match, kappa=full.kappa,
                                norm_label=hN.label)
    if full.verdict == NOT_ISOMETRIC:
        q = _constant_free_form(full.witness, mu)
        c = cmp.poly('constant-free witness ||q(A)||_p = ||q(N)||_p', q)
        checks.append(c)
        if c.status == 'fail':
            cert.witness = q
        else:
            cert.verdict = INCONCLUSIVE
            cert.note = 'constant-free form of the witness does not separate A and N'
    return cert


def projection_idempotent_pair(dimensional_variant=True):
    """The projection/idempotent pair that is isometric for all polynomials
    vanishing at 0.

    Returns ``(N, A)``: ``N = I_2`` and ``A = [[1, 1], [0, 0]]``, or with
    ``dimensional_variant=False`` the same pair embedded in 3 x 3
    (``N = diag(1, 1, 0)``).
    """
    if dimensional_variant:
        N = identity(2)
        A = np.array([[1, 1], [0, 0]], dtype=np.complex128)
    else:
        N = np.diag([1, 1, 0]).astype(np.complex128)
        A = np.zeros((3, 3), dtype=np.complex128)
        A[0, 0] = A[0, 1] = 1
    return N, A


example_502 = projection_idempotent_pair
