"""``polyiso`` command line.

Every command writes JSON to standard output. Exit codes: 0 success or
Normal, 2 NotIsometric or a false predicate, 3 Inconclusive, 64 usage
error, 65 data error.
"""

import argparse
import csv
import os
import sys

import numpy as np

from . import io
from .certify import (INCONCLUSIVE, NORMAL, TolProfile, certify_constant_free,
                      certify_normality, example_502, isometry_defect)
from .errors import DataError, PolyisoError
from .gauge import comparison_lemma_gap, gauge_eval, weakly_majorizes
from .linalg import as_matrix, singular_values
from .norms import NormHandle, separates_rank, ui_norm
from .polycalc import minimal_polynomial
from .spectral_sets import (build_counterexample, is_lavrentieff,
                            polynomial_hull, verify_counterexample)

EXIT_OK = 0
EXIT_FALSE = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_DATA = 65

VERDICT_EXIT = {NORMAL: EXIT_OK, INCONCLUSIVE: EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _matrix(path, field):
    try:
        return as_matrix(io.matrix_from_dict(io.load_json(path), field))
    except DataError as exc:
        raise DataError('%s (%s)' % (exc, path)) from exc


def _handle(path):
    return NormHandle(io.gauge_from_dict(io.load_json(path), 'norm'))


def _vector(text, name):
    try:
        return np.array([float(v) for v in text.split(',')])
    except ValueError as exc:
        raise DataError('%s: expected comma-separated numbers' % name) from exc


def _emit(obj, out):
    out.write(io.dumps(obj) + '\n')


def _write_json(path, obj):
    with open(path, 'w') as f:
        f.write(io.dumps(obj) + '\n')


def _write_csv(path, header, rows):
    with open(path, 'w', newline='') as f:
        w = csv.writer(f)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])


# commands -----------------------------------------------------------------

def cmd_svals(args, out):
    s = singular_values(_matrix(args.matrix, 'matrix'))
    _emit({'singular_values': [float(v) for v in s]}, out)
    return EXIT_OK


def cmd_norm(args, out):
    _emit(ui_norm(_matrix(args.matrix, 'matrix'), _handle(args.norm)), out)
    return EXIT_OK


def cmd_minpoly(args, out):
    p = minimal_polynomial(_matrix(args.matrix, 'matrix'), args.tol)
    _emit(io.polynomial_to_dict(p), out)
    return EXIT_OK


def cmd_defect(args, out):
    A, B = _matrix(args.A, 'A'), _matrix(args.B, 'B')
    degree = args.degree if args.degree is not None else max(A.shape[0], B.shape[0]) - 1
    r = isometry_defect(A, B, _handle(args.norm), degree, args.samples, args.seed,
                        constant_free=args.constant_free)
    _emit(io.report_to_dict(r), out)
    return EXIT_OK


def cmd_certify(args, out):
    A, N = _matrix(args.A, 'A'), _matrix(args.N, 'N')
    prof = TolProfile()
    if args.tol_profile:
        try:
            prof = TolProfile.from_dict(io.load_json(args.tol_profile))
        except (TypeError, ValueError) as exc:
            raise DataError('tol-profile: %s' % exc) from exc
    if args.constant_free:
        cert = certify_constant_free(A, N, args.p, prof)
    else:
        if not args.norm:
            raise UsageError('--norm is required unless --constant-free is given')
        cert = certify_normality(A, N, _handle(args.norm), prof)
    if args.csv:
        _write_csv(args.csv, ['name', 'lhs', 'rhs', 'tol', 'status'],
                   [(c.name, c.lhs, c.rhs, c.tol, c.status) for c in cert.checks])
    _emit(io.certificate_to_dict(cert), out)
    return VERDICT_EXIT.get(cert.verdict, EXIT_FALSE)


def _grid(path):
    try:
        return io.grid_from_dict(io.load_json(path), 'set')
    except DataError as exc:
        raise DataError('%s (%s)' % (exc, path)) from exc


def cmd_lavrentieff(args, out):
    flag, reason = is_lavrentieff(_grid(args.set))
    _emit({'lavrentieff': flag, 'reason': reason}, out)
    return EXIT_OK if flag else EXIT_FALSE


def cmd_hull(args, out):
    K = _grid(args.set)
    H = polynomial_hull(K)
    d = io.grid_to_dict(H)
    if args.output:
        _write_json(args.output, d)
        _emit({'cells_in_set': int(K.mask.sum()), 'cells_in_hull': int(H.mask.sum()),
               'output': args.output}, out)
    else:
        _emit(d, out)
    return EXIT_OK


def cmd_counterexample(args, out):
    spec = io.spec_from_dict(io.load_json(args.spec), 'spec')
    T = build_counterexample(spec, check=not args.no_hull_check)
    result = {'matrix': io.matrix_to_dict(T)}
    if args.output:
        _write_json(args.output, io.matrix_to_dict(T))
    code = EXIT_OK
    if args.verify:
        r = verify_counterexample(spec, args.degree, args.samples, args.seed)
        result['report'] = io.counterexample_report_to_dict(r)
        if args.csv:
            _write_csv(args.csv, list(r.rows[0]), [list(row.values()) for row in r.rows])
        if r.von_neumann_pass != r.samples:
            code = EXIT_FALSE
    _emit(result, out)
    return code


def cmd_example502(args, out):
    N, A = example_502(dimensional_variant=not args.embedded)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        _write_json(os.path.join(args.out_dir, 'N.json'), io.matrix_to_dict(N))
        _write_json(os.path.join(args.out_dir, 'A.json'), io.matrix_to_dict(A))
    _emit({'N': io.matrix_to_dict(N), 'A': io.matrix_to_dict(A)}, out)
    return EXIT_OK


def cmd_gauge_check(args, out):
    h = _handle(args.norm)
    g = h.gauge
    result = {'gauge': g.to_dict(), 'separates_rank': separates_rank(h, g.arity)}
    code = EXIT_OK
    if args.x:
        x = _vector(args.x, 'x')
        result['phi_x'] = gauge_eval(g, x)
        if args.y:
            y = _vector(args.y, 'y')
            result['phi_y'] = gauge_eval(g, y)
            result['x_weakly_majorized_by_y'] = weakly_majorizes(x, y)
            if not result['x_weakly_majorized_by_y']:
                code = EXIT_FALSE
    if args.lemma:
        p, q = int(args.lemma[0]), int(args.lemma[1])
        r = _vector(args.lemma[2], 'lemma r')
        fx, fy = comparison_lemma_gap(g, p, q, r)
        result['lemma'] = {'phi_x': fx, 'phi_y': fy, 'strict': fx < fy}
        if not fx < fy:
            code = EXIT_FALSE
    _emit(result, out)
    return code


def build_parser():
    parser = _Parser(prog='polyiso', description=__doc__.split('\n')[0])
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_Parser)

    p = sub.add_parser('svals', help='singular values of a matrix')
    p.add_argument('--matrix', required=True, help='matrix JSON file')
    p.set_defaults(func=cmd_svals)

    p = sub.add_parser('norm', help='unitarily-invariant norm of a matrix')
    p.add_argument('--matrix', required=True, help='matrix JSON file')
    p.add_argument('--norm', required=True, help='gauge JSON file')
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser('minpoly', help='minimal polynomial of a matrix')
    p.add_argument('--matrix', required=True, help='matrix JSON file')
    p.add_argument('--tol', type=float, default=1e-9, help='dependence tolerance (default 1e-9)')
    p.set_defaults(func=cmd_minpoly)

    p = sub.add_parser('defect', help='sampled polynomial-isometry defect of two matrices')
    p.add_argument('--A', required=True, help='matrix JSON file')
    p.add_argument('--B', required=True, help='matrix JSON file')
    p.add_argument('--norm', required=True, help='gauge JSON file')
    p.add_argument('--degree', type=int, default=None,
                   help='polynomial degree (default: dimension - 1)')
    p.add_argument('--samples', type=int, default=200, help='number of random polynomials')
    p.add_argument('--seed', type=int, default=0, help='random seed (default 0)')
    p.add_argument('--constant-free', action='store_true',
                   help='only polynomials with zero constant term')
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser('certify', help='certify normality of A against a normal N')
    p.add_argument('--A', required=True, help='matrix JSON file')
    p.add_argument('--N', required=True, help='normal reference matrix JSON file')
    p.add_argument('--norm', help='gauge JSON file (not used with --constant-free)')
    p.add_argument('--constant-free', action='store_true',
                   help='invertible A, N; Schatten-p norms of polynomials q with q(0)=0')
    p.add_argument('--p', type=float, default=2.0, help='Schatten exponent for --constant-free')
    p.add_argument('--tol-profile', help='JSON object overriding tolerance fields')
    p.add_argument('--csv', help='also write the checks table to this CSV file')
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser('lavrentieff', help='test a rasterised compact set')
    p.add_argument('--set', required=True, help='grid JSON file')
    p.set_defaults(func=cmd_lavrentieff)

    p = sub.add_parser('hull', help='polynomially convex hull of a rasterised set')
    p.add_argument('--set', required=True, help='grid JSON file')
    p.add_argument('-o', '--output', help='write the hull grid here instead of stdout')
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser('counterexample', help='build (and verify) N + (c + eps S_k)')
    p.add_argument('--spec', required=True, help='counterexample spec JSON file')
    p.add_argument('-o', '--output', help='also write the matrix JSON here')
    p.add_argument('--verify', action='store_true', help='run the sampled verification')
    p.add_argument('--degree', type=int, default=5, help='polynomial degree (default 5)')
    p.add_argument('--samples', type=int, default=200, help='number of polynomials (default 200)')
    p.add_argument('--seed', type=int, default=0, help='random seed (default 0)')
    p.add_argument('--csv', help='write per-polynomial rows to this CSV file')
    p.add_argument('--no-hull-check', action='store_true',
                   help='skip the disk-in-hull precondition')
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser('example502', help='emit the projection/idempotent pair')
    p.add_argument('--embedded', action='store_true', help='3x3 embedding instead of 2x2')
    p.add_argument('--out-dir', help='also write N.json and A.json into this directory')
    p.set_defaults(func=cmd_example502)

    p = sub.add_parser('gauge-check', help='evaluate a gauge, majorization and the comparison lemma')
    p.add_argument('--norm', required=True, help='gauge JSON file')
    p.add_argument('--x', help='comma-separated vector')
    p.add_argument('--y', help='comma-separated vector compared with --x')
    p.add_argument('--lemma', nargs=3, metavar=('P', 'Q', 'R'),
                   help='zero count, one count and comma-separated increments r')
    p.set_defaults(func=cmd_gauge_check)
    return parser


def run(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write('polyiso: usage error: %s\n' % exc)
        return EXIT_USAGE
    except (DataError, PolyisoError) as exc:
        err.write('polyiso: %s: %s\n' % (type(exc).__name__, exc))
        return EXIT_DATA
    except ValueError as exc:
        err.write('polyiso: invalid value: %s\n' % exc)
        return EXIT_DATA


def main(argv=None, out=None, err=None):
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write('polyiso: usage error: %s\n' % exc)
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(err)
        return EXIT_USAGE
    return run(args, out, err)


def main_exit():
    sys.exit(main())


if __name__ == '__main__':
    main_exit()
