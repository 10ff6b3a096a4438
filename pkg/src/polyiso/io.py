"""JSON wire formats.

Complex numbers are ``[re, im]`` pairs of IEEE-754 doubles. Python's float
``repr`` is the shortest round-tripping decimal, so every emitted value
re-parses bit-identically.

Matrix      ``{"dim": n, "entries": [[re, im], ...]}``  (n*n pairs, row-major)
Gauge       ``{"kind": "cp", "c": [...], "p": 2, "arity": n}``
Polynomial  ``{"coeffs": [[re, im], ...]}``  (ascending degree)
Grid        ``{"origin": [re, im], "cell": h, "width": w, "height": ht,
"mask": "<base64>"}`` where the mask is ``numpy.packbits`` (MSB first) of the
row-major ``height x width`` boolean array, row ``iy`` holding the cells of
imaginary part ``origin.imag + iy * h``.
"""

import base64
import json
import math

import numpy as np

from .errors import DataError, InvalidSpec
from .gauge import GaugeSpec
from .polycalc import Polynomial
from .spectral_sets import CompactSetGrid, CounterexampleSpec

__all__ = ['dumps', 'load_json', 'matrix_to_dict', 'matrix_from_dict',
           'gauge_from_dict', 'polynomial_to_dict', 'polynomial_from_dict',
           'grid_to_dict', 'grid_from_dict', 'spec_from_dict', 'spec_to_dict',
           'certificate_to_dict', 'report_to_dict', 'counterexample_report_to_dict']


def dumps(obj):
    return json.dumps(obj, allow_nan=False)


def load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        raise DataError('%s: %s' % (path, exc.strerror)) from exc
    except json.JSONDecodeError as exc:
        raise DataError('%s: invalid JSON (%s)' % (path, exc)) from exc


def _field(d, key, path):
    if not isinstance(d, dict):
        raise DataError('%s: expected an object' % (path or '$'))
    if key not in d:
        raise DataError('%s: missing field' % _join(path, key))
    return d[key]


def _join(path, key):
    if isinstance(key, int):
        return '%s[%d]' % (path, key)
    return '%s.%s' % (path, key) if path else key


def _real(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DataError('%s: expected a number' % path)
    v = float(v)
    if not math.isfinite(v):
        raise DataError('%s: non-finite number' % path)
    return v


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise DataError('%s: expected an integer' % path)
    return v


def _complex(v, path):
    if not isinstance(v, list) or len(v) != 2:
        raise DataError('%s: expected [re, im]' % path)
    return complex(_real(v[0], path + '[0]'), _real(v[1], path + '[1]'))


def _complex_list(v, path):
    if not isinstance(v, list):
        raise DataError('%s: expected a list' % path)
    return [_complex(x, '%s[%d]' % (path, i)) for i, x in enumerate(v)]


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


# matrices -----------------------------------------------------------------

def matrix_to_dict(A):
    A = np.asarray(A, dtype=np.complex128)
    return {'dim': int(A.shape[0]), 'entries': [_pair(z) for z in A.ravel()]}


def matrix_from_dict(d, path=''):
    n = _int(_field(d, 'dim', path), _join(path, 'dim'))
    if n < 1:
        raise DataError('%s: must be >= 1' % _join(path, 'dim'))
    entries = _complex_list(_field(d, 'entries', path), _join(path, 'entries'))
    if len(entries) != n * n:
        raise DataError('%s: expected %d entries, got %d'
                        % (_join(path, 'entries'), n * n, len(entries)))
    return np.array(entries, dtype=np.complex128).reshape(n, n)


# gauges -------------------------------------------------------------------

def gauge_from_dict(d, path=''):
    kind = _field(d, 'kind', path)
    arity = _int(_field(d, 'arity', path), _join(path, 'arity'))
    kw = {}
    if 'p' in d:
        kw['p'] = _real(d['p'], _join(path, 'p'))
    if 'k' in d:
        kw['k'] = _int(d['k'], _join(path, 'k'))
    if 'c' in d:
        if not isinstance(d['c'], list):
            raise DataError('%s: expected a list' % _join(path, 'c'))
        kw['c'] = tuple(_real(v, '%s[%d]' % (_join(path, 'c'), i))
                        for i, v in enumerate(d['c']))
    try:
        return GaugeSpec(kind, arity, **kw)
    except DataError as exc:
        raise DataError('%s: %s' % (path or 'gauge', exc)) from exc


# polynomials --------------------------------------------------------------

def polynomial_to_dict(p):
    return {'coeffs': [_pair(c) for c in p.coeffs]}


def polynomial_from_dict(d, path=''):
    return Polynomial(tuple(_complex_list(_field(d, 'coeffs', path), _join(path, 'coeffs'))))


# grids --------------------------------------------------------------------

def grid_to_dict(K):
    bits = np.packbits(K.mask.ravel())
    return {'origin': _pair(K.origin), 'cell': K.cell, 'width': K.width,
            'height': K.height, 'mask': base64.b64encode(bits.tobytes()).decode('ascii')}


def grid_from_dict(d, path=''):
    origin = _complex(_field(d, 'origin', path), _join(path, 'origin'))
    cell = _real(_field(d, 'cell', path), _join(path, 'cell'))
    w = _int(_field(d, 'width', path), _join(path, 'width'))
    h = _int(_field(d, 'height', path), _join(path, 'height'))
    raw = _field(d, 'mask', path)
    if not isinstance(raw, str):
        raise DataError('%s: expected a base64 string' % _join(path, 'mask'))
    try:
        data = base64.b64decode(raw, validate=True)
    except ValueError as exc:
        raise DataError('%s: invalid base64' % _join(path, 'mask')) from exc
    if w < 1 or h < 1 or len(data) != (w * h + 7) // 8:
        raise DataError('%s: %d bytes do not encode a %dx%d mask'
                        % (_join(path, 'mask'), len(data), h, w))
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:w * h]
    try:
        return CompactSetGrid(origin, cell, w, h, bits.reshape(h, w).astype(bool))
    except DataError as exc:
        raise DataError('%s: %s' % (path or 'grid', exc)) from exc


# counterexample specs -----------------------------------------------------

def spec_to_dict(spec):
    return {'spectrum': [_pair(z) for z in spec.spectrum_samples],
            'epsilon': spec.epsilon, 'shift_dim': spec.shift_dim,
            'center': _pair(spec.disk_center)}


def spec_from_dict(d, path=''):
    """Accepts ``"spectrum"`` (explicit samples) or ``"roots_of_unity": m``."""
    eps = _real(_field(d, 'epsilon', path), _join(path, 'epsilon'))
    k = _int(_field(d, 'shift_dim', path), _join(path, 'shift_dim'))
    center = _complex(d['center'], _join(path, 'center')) if 'center' in d else 0j
    try:
        if 'roots_of_unity' in d and 'spectrum' not in d:
            m = _int(d['roots_of_unity'], _join(path, 'roots_of_unity'))
            if m < 1:
                raise DataError('%s: must be >= 1' % _join(path, 'roots_of_unity'))
            spec = CounterexampleSpec.roots_of_unity(m, eps, k)
            return CounterexampleSpec(spec.spectrum_samples, eps, k, center)
        samples = _complex_list(_field(d, 'spectrum', path), _join(path, 'spectrum'))
        return CounterexampleSpec(tuple(samples), eps, k, center)
    except InvalidSpec as exc:
        raise DataError('%s: %s' % (path or 'spec', exc)) from exc


# reports ------------------------------------------------------------------

def check_to_dict(c):
    return {'name': c.name, 'lhs': c.lhs, 'rhs': c.rhs, 'tol': c.tol,
            'passed': c.passed, 'status': c.status,
            'witness': None if c.witness is None else polynomial_to_dict(c.witness)}


def certificate_to_dict(cert):
    return {
        'verdict': cert.verdict,
        'norm': cert.norm_label,
        'lambdas': [_pair(z) for z in cert.lambdas],
        'checks': [check_to_dict(c) for c in cert.checks],
        'witness': None if cert.witness is None else polynomial_to_dict(cert.witness),
        'ranks_match': cert.ranks_match,
        'unitarily_similar': cert.unitarily_similar,
        'lagrange_condition': cert.kappa,
        'note': cert.note,
        'reconstruction': None if cert.reconstruction is None
        else matrix_to_dict(cert.reconstruction),
        'idempotents': [matrix_to_dict(Q) for Q in cert.idempotents],
    }


def report_to_dict(r):
    return {'samples': r.samples, 'max_rel_defect': r.max_rel_defect,
            'worst_polynomial': polynomial_to_dict(r.worst_polynomial),
            'degree_bound': r.degree_bound, 'seed': r.seed,
            'constant_free': r.constant_free}


def counterexample_report_to_dict(r):
    return {'samples': r.samples, 'max_degree': r.max_degree, 'seed': r.seed,
            'von_neumann_pass': r.von_neumann_pass,
            'dominance_count': r.dominance_count,
            'equality_count': r.equality_count,
            'worst_von_neumann_margin': r.worst_von_neumann_margin,
            'worst_equality_error': r.worst_equality_error,
            'commutator_norm': r.commutator_norm,
            'bound_checked': r.bound_checked}
