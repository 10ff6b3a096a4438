from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyiso.errors import HullViolation, InvalidGrid, InvalidSpec
from polyiso.linalg import commutator_norm, direct_sum, op_norm, shift_matrix
from polyiso.polycalc import Polynomial, poly_eval_matrix, random_polynomial
from polyiso.spectral_sets import (CompactSetGrid, CounterexampleSpec, Frame, build_counterexample,
                                   is_lavrentieff, max_modulus_on_circle, polynomial_hull,
                                   verify_counterexample)

seeds = st.integers(0, 2**32 - 1)


def bfs_hull(mask):
    """Independent flood fill at double resolution: each cell becomes a 2x2
    block, the exterior is grown from the border with 4-neighbour steps, and
    the result is folded back to the original resolution."""
    fine = np.kron(mask, np.ones((2, 2), dtype=bool))
    h, w = fine.shape
    seen = np.zeros_like(fine)
    todo = deque()
    for y in range(h):
        for x in range(w):
            if (y in (0, h - 1) or x in (0, w - 1)) and not fine[y, x]:
                seen[y, x] = True
                todo.append((y, x))
    while todo:
        y, x = todo.popleft()
        for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            v, u = y + dy, x + dx
            if 0 <= v < h and 0 <= u < w and not fine[v, u] and not seen[v, u]:
                seen[v, u] = True
                todo.append((v, u))
    outside = seen[::2, ::2]
    return ~outside


def random_grid(rng, size=None, density=None):
    size = size or int(rng.integers(6, 24))
    density = rng.uniform(0.2, 0.7) if density is None else density
    mask = np.zeros((size, size), dtype=bool)
    mask[1:-1, 1:-1] = rng.uniform(size=(size - 2, size - 2)) < density
    if not mask.any():
        mask[size // 2, size // 2] = True
    return CompactSetGrid(0j, 1.0, size, size, mask)


# grid type ------------------------------------------------------------------

def test_grid_invariants():
    m = np.zeros((4, 4), dtype=bool)
    with pytest.raises(InvalidGrid):
        CompactSetGrid(0j, 1.0, 4, 4, m)             # empty
    m[0, 1] = True
    with pytest.raises(InvalidGrid):
        CompactSetGrid(0j, 1.0, 4, 4, m)             # touches margin
    m[0, 1], m[1, 1] = False, True
    with pytest.raises(InvalidGrid):
        CompactSetGrid(0j, 1.0, 3, 4, m)             # shape
    with pytest.raises(InvalidGrid):
        CompactSetGrid(0j, -1.0, 4, 4, m)


def test_frame_geometry():
    f = Frame.covering(-1 - 1j, 1 + 1j, 0.5)
    c = f.centers()
    assert c.shape == (f.height, f.width)
    assert c[0, 0] == f.origin and np.isclose(c[0, 1] - c[0, 0], 0.5)
    assert np.isclose(c[1, 0] - c[0, 0], 0.5j)
    K = CompactSetGrid.points([0.5 + 0.5j], 0.5, f)
    assert K.contains(0.5 + 0.5j) and not K.contains(0)


# hull ---------------------------------------------------------------------

def test_hull_of_ring_is_disk():
    h = 0.05
    ring = CompactSetGrid.ring(0, 1.0, h)
    disk = CompactSetGrid.disk(0, 1.0 + 0.55 * h, h, frame=ring.frame)
    assert polynomial_hull(ring) == disk
    assert ring <= polynomial_hull(ring)


def test_hull_of_segment_is_itself():
    seg = CompactSetGrid.segment(-1, 1, 0.05)
    assert polynomial_hull(seg) == seg


def test_hull_of_two_disks_is_itself():
    f = Frame.covering(-3 - 1.5j, 3 + 1.5j, 0.1)
    a = CompactSetGrid.disk(-1.5, 1.0, 0.1, frame=f).mask
    b = CompactSetGrid.disk(1.5, 1.0, 0.1, frame=f).mask
    K = CompactSetGrid(f.origin, f.cell, f.width, f.height, a | b)
    hull = polynomial_hull(K)
    assert hull == K
    assert np.array_equal(bfs_hull(K.mask), hull.mask)


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_hull_matches_bfs_oracle(seed):
    K = random_grid(np.random.default_rng(seed))
    assert np.array_equal(polynomial_hull(K).mask, bfs_hull(K.mask))


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_hull_monotone_idempotent(seed):
    rng = np.random.default_rng(seed)
    K = random_grid(rng)
    extra = np.zeros_like(K.mask)
    extra[1:-1, 1:-1] = rng.uniform(size=(K.height - 2, K.width - 2)) < 0.2
    K2 = K.with_mask(K.mask | extra)
    H = polynomial_hull(K)
    assert K <= H
    assert polynomial_hull(H) == H
    assert H <= polynomial_hull(K2)


# Lavrentieff predicate ----------------------------------------------------------

def test_lavrentieff_examples():
    assert is_lavrentieff(CompactSetGrid.points([0, 1, 1j, 2 + 2j], 0.25)) == (
        True, 'connected complement and empty interior')
    ok, why = is_lavrentieff(CompactSetGrid.disk(0, 1, 0.1))
    assert not ok and why == 'nonempty interior'
    ok, why = is_lavrentieff(CompactSetGrid.ring(0, 1, 0.05))
    assert not ok and why == 'disconnected complement'
    assert is_lavrentieff(CompactSetGrid.segment(-1, 1j, 0.05))[0]


def test_lavrentieff_both_failures():
    f = Frame.covering(-4 - 4j, 4 + 4j, 0.1)
    ring = CompactSetGrid.ring(0, 3, 0.1, frame=f).mask
    disk = CompactSetGrid.disk(0, 1, 0.1, frame=f).mask
    ok, why = is_lavrentieff(CompactSetGrid(f.origin, f.cell, f.width, f.height, ring | disk))
    assert not ok and why == 'disconnected complement; nonempty interior'


@settings(max_examples=50, deadline=None)
@given(seed=seeds)
def test_scattered_points_are_lavrentieff(seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-5, 5, 20) + 1j * rng.uniform(-5, 5, 20)
    K = CompactSetGrid.points(pts, 0.01)
    assert is_lavrentieff(K)[0]


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_strict_hull_means_not_lavrentieff(seed):
    K = random_grid(np.random.default_rng(seed))
    H = polynomial_hull(K)
    if H != K:
        ok, why = is_lavrentieff(K)
        assert not ok and 'disconnected complement' in why


@settings(max_examples=30, deadline=None)
@given(r=st.floats(0.3, 2.0), cell=st.sampled_from([0.02, 0.05]))
def test_hull_of_ring_has_interior(r, cell):
    ring = CompactSetGrid.ring(0, r, cell)
    H = polynomial_hull(ring)
    assert H != ring
    ok, why = is_lavrentieff(H)
    assert not ok and why == 'nonempty interior'


def test_single_cell_hole_needs_no_interior():
    # a plus-shaped set encloses one cell 4-wise; filling it creates no
    # 8-neighbourhood interior, so the hull here is still Lavrentieff
    mask = np.zeros((5, 5), dtype=bool)
    mask[1, 2] = mask[3, 2] = mask[2, 1] = mask[2, 3] = True
    K = CompactSetGrid(0j, 1.0, 5, 5, mask)
    H = polynomial_hull(K)
    assert H.mask[2, 2] and H != K
    assert is_lavrentieff(H)[0]


# counterexample --------------------------------------------------------------

def test_counterexample_small():
    spec = CounterexampleSpec.roots_of_unity(4, 0.5, 2)
    T = build_counterexample(spec)
    assert T.shape == (6, 6)
    assert np.isclose(commutator_norm(T), 0.25, rtol=1e-14)


def test_counterexample_invalid_specs():
    with pytest.raises(InvalidSpec):
        CounterexampleSpec.roots_of_unity(4, 0.5, 1)
    with pytest.raises(InvalidSpec):
        CounterexampleSpec((), 0.5, 2)
    with pytest.raises(InvalidSpec):
        CounterexampleSpec((1,), 0.0, 2)


def test_counterexample_hull_violation():
    with pytest.raises(HullViolation):
        build_counterexample(CounterexampleSpec.roots_of_unity(16, 1.5, 3))
    # a segment spectrum has no hull interior at all
    seg = CounterexampleSpec(tuple(np.linspace(-1, 1, 40)), 0.1, 3)
    with pytest.raises(HullViolation):
        build_counterexample(seg)


def test_counterexample_off_center():
    spec = CounterexampleSpec(CounterexampleSpec.roots_of_unity(64, 0.3, 3).spectrum_samples,
                              0.3, 3, 0.4 + 0.1j)
    T = build_counterexample(spec)
    assert np.isclose(commutator_norm(T), 0.09, rtol=1e-12)
    rep = verify_counterexample(spec, 5, 40, seed=1)
    assert rep.von_neumann_pass == 40


def test_shift_polynomial_norms():
    spec = CounterexampleSpec.roots_of_unity(64, 0.5, 8)
    T = build_counterexample(spec)
    N = np.diag(spec.spectrum_samples)
    C = 0.5 * shift_matrix(8)
    z = Polynomial.x()
    assert np.isclose(op_norm(poly_eval_matrix(z, C)), 0.5)
    assert np.isclose(op_norm(poly_eval_matrix(z, N)), 1.0)
    assert np.isclose(op_norm(poly_eval_matrix(z, T)), 1.0)
    zk = Polynomial((0,) * 8 + (1,))
    assert op_norm(poly_eval_matrix(zk, C)) == 0.0


def test_max_modulus_on_circle():
    p = Polynomial((1, 0, 1))          # 1 + z^2, max on |z| = r is 1 + r^2
    assert np.isclose(max_modulus_on_circle(p, 0, 0.5), 1.25, rtol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_block_norm_law(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    Y = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    p = random_polynomial(int(rng.integers(0, 5)), rng)
    lhs = op_norm(poly_eval_matrix(p, direct_sum(X, Y)))
    rhs = max(op_norm(poly_eval_matrix(p, X)), op_norm(poly_eval_matrix(p, Y)))
    assert np.isclose(lhs, rhs, rtol=1e-12)


def test_verify_degree_cap_and_determinism(monkeypatch):
    spec = CounterexampleSpec.roots_of_unity(16, 0.5, 4)
    with pytest.raises(InvalidSpec):
        verify_counterexample(spec, 4, 10)
    monkeypatch.setenv('POLYISO_THREADS', '1')
    a = verify_counterexample(spec, 3, 30, seed=5)
    monkeypatch.setenv('POLYISO_THREADS', '5')
    b = verify_counterexample(spec, 3, 30, seed=5)
    assert a == b


def test_verify_against_direct_svd():
    spec = CounterexampleSpec.roots_of_unity(64, 0.5, 8)
    rep = verify_counterexample(spec, 5, 20, seed=3)
    T = build_counterexample(spec, check=False)
    children = np.random.SeedSequence(3).spawn(20)
    for row, child in zip(rep.rows, children):
        p = random_polynomial(5, child)
        t = np.linalg.svd(poly_eval_matrix(p, T), compute_uv=False)[0]
        assert np.isclose(row['total_norm'], t, rtol=1e-12)
        c = np.linalg.svd(np.diag(p(np.array(spec.spectrum_samples))), compute_uv=False)[0]
        assert np.isclose(row['normal_norm'], c, rtol=1e-12)
