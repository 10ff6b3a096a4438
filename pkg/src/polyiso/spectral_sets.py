"""Rasterised planar compact sets: polynomial hulls, the Lavrentieff test,
and the non-normal ``N + eps * shift`` direct-sum construction.

Grid topology: the complement is explored with 4-connectivity, the set's
interior with the 8-neighbourhood. The two choices are dual, so a digital
curve that is 8-connected separates the plane.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import ndimage
from scipy.optimize import minimize_scalar

from ._parallel import pmap
from .errors import HullViolation, InvalidGrid, InvalidSpec
from .linalg import commutator_norm, direct_sum, identity, op_norm, shift_matrix
from .polycalc import poly_eval_matrix, random_polynomial

__all__ = ['Frame', 'CompactSetGrid', 'polynomial_hull', 'is_lavrentieff',
           'CounterexampleSpec', 'CounterexampleReport', 'build_counterexample',
           'verify_counterexample', 'spectrum_hull_grid', 'max_modulus_on_circle']

FOUR = ndimage.generate_binary_structure(2, 1)
EIGHT = ndimage.generate_binary_structure(2, 2)


class Frame(NamedTuple):
    """Grid geometry. Cell ``(ix, iy)`` is centred at
    ``origin + cell * (ix + 1j * iy)``."""
    origin: complex
    cell: float
    width: int
    height: int

    @classmethod
    def covering(cls, lo, hi, cell, margin=2):
        """Smallest frame whose cell centres cover the box ``[lo, hi]`` with
        `margin` extra cells on each side."""
        lo, hi = complex(lo), complex(hi)
        w = int(math.ceil((hi.real - lo.real) / cell)) + 1 + 2 * margin
        h = int(math.ceil((hi.imag - lo.imag) / cell)) + 1 + 2 * margin
        return cls(lo - margin * cell * (1 + 1j), float(cell), w, h)

    def centers(self):
        ix = np.arange(self.width)
        iy = np.arange(self.height)
        return self.origin + self.cell * (ix[None, :] + 1j * iy[:, None])

    def rasterize(self, predicate):
        """Grid of the cells whose centre satisfies `predicate` (vectorised)."""
        return CompactSetGrid(self.origin, self.cell, self.width, self.height,
                              np.asarray(predicate(self.centers()), dtype=bool))


@dataclass(frozen=True, eq=False)
class CompactSetGrid:
    """Boolean raster of a compact set; ``mask[iy, ix]`` is True inside.

    The outermost ring of cells must be empty so that the set lies strictly
    inside the grid.
    """
    origin: complex
    cell: float
    width: int
    height: int
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        object.__setattr__(self, 'origin', complex(self.origin))
        object.__setattr__(self, 'cell', float(self.cell))
        if not (self.cell > 0 and math.isfinite(self.cell)):
            raise InvalidGrid('cell size must be positive')
        if self.width < 3 or self.height < 3:
            raise InvalidGrid('grid must be at least 3x3')
        if mask.shape != (self.height, self.width):
            raise InvalidGrid('mask shape %r does not match height x width (%d, %d)'
                              % (mask.shape, self.height, self.width))
        if not mask.any():
            raise InvalidGrid('set is empty')
        if mask[0].any() or mask[-1].any() or mask[:, 0].any() or mask[:, -1].any():
            raise InvalidGrid('set touches the grid margin')
        mask.setflags(write=False)
        object.__setattr__(self, 'mask', mask)

    @property
    def frame(self):
        return Frame(self.origin, self.cell, self.width, self.height)

    def with_mask(self, mask):
        return CompactSetGrid(self.origin, self.cell, self.width, self.height, mask)

    def __eq__(self, other):
        if not isinstance(other, CompactSetGrid):
            return NotImplemented
        return (self.frame == other.frame and np.array_equal(self.mask, other.mask))

    def __le__(self, other):
        """Set inclusion on a common frame."""
        if self.frame != other.frame:
            raise InvalidGrid('grids have different frames')
        return bool(np.all(other.mask[self.mask]))

    def contains(self, z):
        ix = int(round((complex(z) - self.origin).real / self.cell))
        iy = int(round((complex(z) - self.origin).imag / self.cell))
        if 0 <= ix < self.width and 0 <= iy < self.height:
            return bool(self.mask[iy, ix])
        return False

    # rasterisers --------------------------------------------------------

    @classmethod
    def disk(cls, center, radius, cell, frame=None):
        frame = frame or Frame.covering(center - radius * (1 + 1j),
                                        center + radius * (1 + 1j), cell)
        return frame.rasterize(lambda z: np.abs(z - center) <= radius)

    @classmethod
    def ring(cls, center, radius, cell, frame=None, half_width=0.55):
        """Digital circle: cells within ``half_width * cell`` of the circle.

        A half-width of at least half a cell blocks every 4-connected path
        across the circle; below ``1/sqrt(2)`` cells no cell gets a full
        8-neighbourhood.
        """
        w = half_width * cell
        frame = frame or Frame.covering(center - (radius + w) * (1 + 1j),
                                        center + (radius + w) * (1 + 1j), cell)
        return frame.rasterize(lambda z: np.abs(np.abs(z - center) - radius) <= w)

    @classmethod
    def segment(cls, a, b, cell, frame=None, half_width=0.55):
        a, b = complex(a), complex(b)
        w = half_width * cell
        lo = complex(min(a.real, b.real), min(a.imag, b.imag)) - w * (1 + 1j)
        hi = complex(max(a.real, b.real), max(a.imag, b.imag)) + w * (1 + 1j)
        frame = frame or Frame.covering(lo, hi, cell)
        d = b - a

        def near(z):
            t = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
            return np.abs(z - (a + t * d)) <= w

        return frame.rasterize(near)

    @classmethod
    def points(cls, pts, cell, frame=None):
        """One cell per point: the cell whose centre is nearest."""
        pts = np.asarray(pts, dtype=complex).ravel()
        if pts.size == 0:
            raise InvalidGrid('no points')
        lo = complex(pts.real.min(), pts.imag.min())
        hi = complex(pts.real.max(), pts.imag.max())
        frame = frame or Frame.covering(lo, hi, cell)
        mask = np.zeros((frame.height, frame.width), dtype=bool)
        rel = (pts - frame.origin) / frame.cell
        mask[np.rint(rel.imag).astype(int), np.rint(rel.real).astype(int)] = True
        return CompactSetGrid(frame.origin, frame.cell, frame.width, frame.height, mask)


def _unbounded_component(mask):
    """Cells of the complement 4-connected to the grid margin."""
    labels, _ = ndimage.label(~mask, structure=FOUR)
    border = np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]))
    border = border[border > 0]
    return np.isin(labels, border)


def polynomial_hull(K):
    """K together with every bounded component of its complement."""
    return K.with_mask(~_unbounded_component(K.mask))


def is_lavrentieff(K):
    """``(flag, reason)``: connected complement and empty interior at grid
    resolution. A cell is interior when all 8 neighbours are in the set."""
    problems = []
    if not np.array_equal(~_unbounded_component(K.mask), K.mask):
        problems.append('disconnected complement')
    if ndimage.binary_erosion(K.mask, structure=EIGHT).any():
        problems.append('nonempty interior')
    if problems:
        return False, '; '.join(problems)
    return True, 'connected complement and empty interior'


def spectrum_hull_grid(samples, cell=None):
    """Raster of the polynomial hull of the continuum that `samples`
    approximates.

    Each sample is thickened to a disk of radius 0.6 times the largest
    nearest-neighbour spacing, so consecutive samples of a curve overlap.
    """
    s = np.asarray(samples, dtype=complex).ravel()
    if s.size == 1:
        radius = cell or 1e-3
    else:
        d = np.abs(s[:, None] - s[None, :])
        np.fill_diagonal(d, np.inf)
        radius = 0.6 * float(np.max(np.min(d, axis=1)))
    cell = cell or radius / 4
    pad = radius * (1 + 1j)
    frame = Frame.covering(complex(s.real.min(), s.imag.min()) - pad,
                           complex(s.real.max(), s.imag.max()) + pad, cell)

    def thick(z):
        out = np.zeros(z.shape, dtype=bool)
        for w in s:
            out |= np.abs(z - w) <= radius
        return out

    return polynomial_hull(frame.rasterize(thick))


@dataclass(frozen=True)
class CounterexampleSpec:
    """``diag(spectrum_samples)`` direct sum ``center I + epsilon S_k``.

    The closed disk ``|z - center| <= epsilon`` must lie in the polynomial
    hull of the continuum the samples approximate.
    """
    spectrum_samples: tuple
    epsilon: float
    shift_dim: int
    disk_center: complex = 0j

    def __post_init__(self):
        s = tuple(complex(v) for v in self.spectrum_samples)
        if not s:
            raise InvalidSpec('spectrum_samples is empty')
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in s):
            raise InvalidSpec('spectrum samples must be finite')
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise InvalidSpec('epsilon must be positive')
        if int(self.shift_dim) != self.shift_dim or self.shift_dim < 2:
            raise InvalidSpec('shift_dim must be an integer >= 2 '
                              '(a 1x1 shift is zero, hence normal)')
        object.__setattr__(self, 'spectrum_samples', s)
        object.__setattr__(self, 'epsilon', float(self.epsilon))
        object.__setattr__(self, 'shift_dim', int(self.shift_dim))
        object.__setattr__(self, 'disk_center', complex(self.disk_center))

    @classmethod
    def roots_of_unity(cls, m, epsilon, shift_dim, radius=1.0):
        z = radius * np.exp(2j * np.pi * np.arange(m) / m)
        return cls(tuple(z), epsilon, shift_dim, 0j)

    def check_hull(self, cell=None):
        hull = spectrum_hull_grid(self.spectrum_samples, cell)
        centers = hull.frame.centers()
        disk = np.abs(centers - self.disk_center) <= self.epsilon + hull.cell
        lo, hi = self.disk_center - self.epsilon, self.disk_center + self.epsilon
        inside = (hull.contains(lo) and hull.contains(hi)
                  and hull.contains(self.disk_center + 1j * self.epsilon)
                  and hull.contains(self.disk_center - 1j * self.epsilon))
        if not inside or not np.all(hull.mask[disk]):
            raise HullViolation('disk of radius %g about %r is not inside the '
                                'polynomial hull of the spectrum'
                                % (self.epsilon, self.disk_center))
        return hull


def _blocks(spec):
    N = np.diag(np.array(spec.spectrum_samples, dtype=np.complex128))
    k = spec.shift_dim
    C = spec.disk_center * identity(k) + spec.epsilon * shift_matrix(k)
    return N, C


def build_counterexample(spec, check=True):
    """The block-diagonal matrix ``diag(samples) + (center I + eps S_k)``."""
    if check:
        spec.check_hull()
    N, C = _blocks(spec)
    return direct_sum(N, C)


def max_modulus_on_circle(p, center, radius, points=4096):
    """``max |p|`` on the circle, by dense sampling plus a bounded 1-D
    refinement around the best sample."""
    theta = 2 * np.pi * np.arange(points) / points
    vals = np.abs(p(center + radius * np.exp(1j * theta)))
    j = int(np.argmax(vals))
    step = 2 * np.pi / points
    res = minimize_scalar(lambda t: -abs(p(center + radius * np.exp(1j * t))),
                          bounds=(theta[j] - step, theta[j] + step), method='bounded',
                          options={'xatol': 1e-12})
    return max(float(vals[j]), float(-res.fun))


@dataclass
class CounterexampleReport:
    samples: int
    max_degree: int
    seed: int
    von_neumann_pass: int
    dominance_count: int
    equality_count: int
    worst_von_neumann_margin: float
    worst_equality_error: float
    commutator_norm: float
    bound_checked: str
    rows: list = field(default_factory=list, repr=False)

    @property
    def von_neumann_rate(self):
        return self.von_neumann_pass / self.samples

    @property
    def equality_rate(self):
        return self.equality_count / self.samples


ROWS = ('index', 'shift_norm', 'circle_max', 'normal_norm', 'total_norm',
        'von_neumann_ok', 'dominated', 'equal')


def verify_counterexample(spec, max_degree, samples, seed=0, boundary_points=4096,
                          rtol=1e-10):
    """Degree-bounded check that ``T = N + (c + eps S_k)`` behaves like `N`.

    For each random polynomial ``p``: ``a = ||p(c + eps S_k)||``,
    ``b = max |p|`` on ``|z - c| = eps``, ``c = max |p(samples)| = ||p(N)||``
    and ``t = ||p(T)||``. The truncated shift is nilpotent (spectral radius
    0), so the checked fact is the contraction bound ``a <= b``; equality
    ``t = c`` is expected whenever ``b <= c``.
    """
    count = len(spec.spectrum_samples)
    if not max_degree < count / 4:
        raise InvalidSpec('max_degree=%d must be below len(samples)/4 = %g'
                          % (max_degree, count / 4))
    N, C = _blocks(spec)
    T = direct_sum(N, C)
    lam = np.array(spec.spectrum_samples)
    children = np.random.SeedSequence(seed).spawn(samples)

    def one(arg):
        i, child = arg
        p = random_polynomial(max_degree, child)
        a = op_norm(poly_eval_matrix(p, C))
        b = max_modulus_on_circle(p, spec.disk_center, spec.epsilon, boundary_points)
        c = float(np.max(np.abs(p(lam))))
        t = op_norm(poly_eval_matrix(p, T))
        vn = a <= b * (1 + rtol)
        dom = b <= c
        eq = abs(t - c) <= rtol * c
        return (i, a, b, c, t, vn, dom, eq)

    rows = pmap(one, enumerate(children))
    vn_margin = max((r[1] - r[2]) / max(r[2], 1e-300) for r in rows)
    eq_err = max(abs(r[4] - r[3]) / max(r[3], 1e-300) for r in rows)
    return CounterexampleReport(
        samples=samples, max_degree=max_degree, seed=seed,
        von_neumann_pass=sum(r[5] for r in rows),
        dominance_count=sum(r[6] for r in rows),
        equality_count=sum(r[6] and r[7] for r in rows),
        worst_von_neumann_margin=float(vn_margin),
        worst_equality_error=float(eq_err),
        commutator_norm=commutator_norm(T),
        bound_checked='||p(c I + eps S_k)|| <= max_{|z-c|=eps} |p(z)| '
                      '(contraction bound; truncated shift has spectral radius 0)',
        rows=[dict(zip(ROWS, r)) for r in rows])
