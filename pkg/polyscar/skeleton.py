"""
Periodic and aperiodic skeletons of a billiard.

Trajectories are traced inside the billiard with exact arithmetic while the
linear part :math:`g` of the unfolding is carried along, so a billiard
direction :math:`v` always corresponds to the fixed direction :math:`d = g v`
on the invariant surface.  A periodic direction decomposes into periodic
orbit channels (POCs), strips of parallel periodic orbits bounded by
singular diagonals (SDs), i.e. trajectories joining two vertices.
"""

import logging
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from polyscar.errors import (
    ConsistencyError,
    DomainError,
    KindError,
    PolyscarError,
    ResourceError,
)
from polyscar.exact import (
    Mat2,
    QuadraticSurd,
    Vec2,
    as_surd,
    exact_sqrt,
    integer_kernel,
)
from polyscar.geometry import build_epp, reflection_group

logger = logging.getLogger(__name__)

MAX_PASSES = 4096

# seeds tried inside an uncovered offset interval
_SEEDS = [
    Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
    Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5), Fraction(1, 7),
    Fraction(3, 7), Fraction(5, 7), Fraction(2, 9), Fraction(7, 11),
]


class Kind(Enum):
    PERIODIC = "periodic"
    APERIODIC = "aperiodic"


def as_direction(value):
    """
    Converts :code:`(x, y)` pairs or :code:`"x,y"` strings to an exact :class:`exact.Vec2`.
    """
    if isinstance(value, Vec2):
        d = value
    else:
        if isinstance(value, str):
            value = value.split(",")
        try:
            x, y = value
        except (TypeError, ValueError):
            raise DomainError(f"cannot read a direction from {value!r}")
        d = Vec2(as_surd(x.strip() if isinstance(x, str) else x), as_surd(y.strip() if isinstance(y, str) else y))
    if d.is_zero():
        raise DomainError("direction must be nonzero")
    return d


@dataclass(frozen=True)
class Pass:
    """
    One straight piece of a traced orbit between two reflections.

    :param linear: unfolding :math:`g` with :math:`d = g v`
    :param start: entry point on :code:`side_in`
    :param end: exit point on :code:`side_out`
    :param velocity: billiard direction :math:`v`
    :param offset: orbit parameter :math:`\\Lambda` at :code:`start`
    :param step: parameter length :math:`\\lambda` of the pass
    """

    linear: Mat2
    start: Vec2
    end: Vec2
    velocity: Vec2
    side_in: int
    side_out: int
    offset: QuadraticSurd
    step: QuadraticSurd


def _exit(sides, A, v, side_in):
    # first boundary hit of A + lam v, lam > 0; returns (lam, mu, side)
    best = None
    for j, (P0, P1) in enumerate(sides):
        if j == side_in:
            continue
        e = P1 - P0
        den = v.cross(e)
        if not den:
            continue
        w = P0 - A
        lam = w.cross(e) / den
        if lam.sign() <= 0:
            continue
        mu = w.cross(v) / den
        if mu.sign() < 0 or mu > 1:
            continue
        if best is None or lam < best[0]:
            best = (lam, mu, j)
    if best is None:
        raise ConsistencyError(f"trajectory from {A} along {v} never meets the boundary")
    return best


def _reflections(spec):
    return [Mat2.reflection(q - p) for p, q in spec.sides()]


def trace_orbit(spec, direction, linear, start, side, max_passes=MAX_PASSES):
    """
    Traces the orbit through :code:`start` until its state repeats.

    :param spec: :class:`geometry.BilliardSpec`
    :param direction: direction :math:`d` on the invariant surface
    :param linear: initial unfolding :math:`g`
    :param start: point on :code:`side` where the orbit enters
    :param int side: entry side index
    :return: list of :class:`Pass`, or :code:`None` when the orbit hits a vertex
    """
    sides = spec.sides()
    mirrors = _reflections(spec)
    g, A, side_in = linear, start, side
    v = g.transpose() @ direction
    initial = (g, A, side_in)
    passes = []
    total = QuadraticSurd(0)
    while True:
        lam, mu, j = _exit(sides, A, v, side_in)
        if not mu or mu == 1:
            return None
        B = A + v * lam
        passes.append(Pass(g, A, B, v, side_in, j, total, lam))
        total = total + lam
        g, v, A, side_in = g @ mirrors[j], mirrors[j] @ v, B, j
        if (g, A, side_in) == initial:
            return passes
        if len(passes) >= max_passes:
            raise ResourceError(f"orbit along {direction} did not close after {max_passes} passes")


@dataclass(frozen=True)
class SingularDiagonal:
    """
    Trajectory joining two vertices.

    :param anchor_index: index of the starting vertex
    :param anchor_vertex: starting vertex
    :param direction: billiard direction leaving the anchor
    :param bounce_counts: reflections on horizontal and on vertical sides
    :param side_bounces: reflections per side
    :param terminal_index: index of the vertex where the diagonal ends
    :param terminal_vertex: that vertex
    :param points: exact polyline inside the billiard, anchor first
    """

    anchor_index: int
    anchor_vertex: Vec2
    direction: Vec2
    bounce_counts: Tuple[int, int]
    side_bounces: Tuple[int, ...]
    terminal_index: int
    terminal_vertex: Vec2
    points: Tuple[Vec2, ...] = field(repr=False)


def _inward(spec, k, v, strict=True):
    # strict: v points into the billiard at vertex k; else v runs along a side
    n = len(spec.vertices)
    w = spec.vertices[k]
    forward = spec.vertices[(k + 1) % n] - w
    backward = spec.vertices[k - 1] - w
    a, b = forward.cross(v).sign(), v.cross(backward).sign()
    if strict:
        if spec.angles[k] < 1:
            return a > 0 and b > 0
        return a > 0 or b > 0
    return (a == 0 and forward.dot(v).sign() > 0) or (b == 0 and backward.dot(v).sign() > 0)


def singular_diagonal(spec, vertex, direction, max_bounces=MAX_PASSES):
    """
    Traces the trajectory leaving a vertex until it meets a vertex again.

    :param spec: :class:`geometry.BilliardSpec`
    :param vertex: vertex index or exact vertex
    :param direction: billiard direction pointing into the billiard or along a side
    :return: :class:`SingularDiagonal`
    """
    if isinstance(vertex, Vec2):
        try:
            vertex = spec.vertices.index(vertex)
        except ValueError:
            raise DomainError(f"{vertex} is not a vertex")
    n = len(spec.vertices)
    if not 0 <= vertex < n:
        raise DomainError(f"no vertex {vertex}")
    v = as_direction(direction)
    if not (_inward(spec, vertex, v) or _inward(spec, vertex, v, strict=False)):
        raise DomainError(f"direction {v} leaves the billiard at vertex {vertex}")
    sides = spec.sides()
    mirrors = _reflections(spec)
    A, side_in = spec.vertices[vertex], None
    points = [A]
    bounces = [0] * n
    while True:
        lam, mu, j = _exit(sides, A, v, side_in)
        A = A + v * lam
        points.append(A)
        if not mu or mu == 1:
            terminal = j if not mu else (j + 1) % n
            break
        bounces[j] += 1
        if sum(bounces) > max_bounces:
            raise ResourceError(f"no vertex reached along {direction} after {max_bounces} bounces")
        v, side_in = mirrors[j] @ v, j
    horizontal = sum(c for c, (p, q) in zip(bounces, sides) if not (q - p).y)
    vertical = sum(c for c, (p, q) in zip(bounces, sides) if not (q - p).x)
    return SingularDiagonal(
        vertex,
        spec.vertices[vertex],
        as_direction(direction),
        (horizontal, vertical),
        tuple(bounces),
        terminal,
        spec.vertices[terminal],
        tuple(points),
    )


def diagonal_set(spec, direction):
    """
    All distinct singular diagonals of a billiard along a direction and its reverse.

    :param spec: :class:`geometry.BilliardSpec`
    :param direction: see :func:`as_direction`
    :return: list of :class:`SingularDiagonal`
    """
    d = as_direction(direction)
    found = {}
    for k in range(len(spec.vertices)):
        for sign in (1, -1):
            try:
                sd = singular_diagonal(spec, k, d * sign)
            except PolyscarError as e:
                logger.debug(f"no diagonal from vertex {k} along {d * sign}: {e}")
                continue
            # a diagonal traced from either end is the same line
            path = tuple(str(p) for p in sd.points)
            found.setdefault(min(path, path[::-1]), sd)
    return list(found.values())


def fold_diagonal(spec, sd):
    """
    Image of a singular diagonal folded into the billiard.

    :param spec: :class:`geometry.BilliardSpec`
    :param sd: :class:`SingularDiagonal`
    :return: float array of shape (k, 2, 2), one row per straight segment
    """
    if sd.anchor_index >= len(spec.vertices) or spec.vertices[sd.anchor_index] != sd.anchor_vertex:
        raise DomainError("singular diagonal belongs to another billiard")
    pts = np.array([p.to_float() for p in sd.points])
    return np.stack([pts[:-1], pts[1:]], axis=1)


@dataclass(frozen=True, eq=False)
class FoldedCell:
    """
    The part of the billiard swept by one pass of a POC, with its channel coordinates.

    :math:`\\xi` runs along the orbit from its start, :math:`\\eta \\in [0, w]` across the channel.
    """

    image: int
    sign: int
    start: np.ndarray
    velocity: np.ndarray
    speed: float
    offset: float
    shift: float
    width: float
    side_in: Tuple[np.ndarray, np.ndarray]
    side_out: Tuple[np.ndarray, np.ndarray]

    def local(self, points, tol=1e-12):
        """
        :param points: array of shape (N, 2)
        :return: tuple (xi, eta, inside) of arrays
        """
        points = np.atleast_2d(points)
        rel = points - self.start
        vx, vy = self.velocity
        xi = self.offset + (rel @ self.velocity) / self.speed
        eta = (self.shift + self.sign * (vx * rel[:, 1] - vy * rel[:, 0])) / self.speed
        inside = (eta >= -tol) & (eta <= self.width + tol)
        for (p0, e), after in ((self.side_in, False), (self.side_out, True)):
            den = vx * e[1] - vy * e[0]
            w = p0 - points
            t = (w[:, 0] * e[1] - w[:, 1] * e[0]) / den
            inside &= (t >= -tol * self.speed) if after else (t <= tol * self.speed)
        return xi, eta, inside


@dataclass(frozen=True)
class PocDescriptor:
    """
    A periodic orbit channel.

    Offsets across the channel are measured by :math:`\\det(g)\\,v \\times (P - A)` from the
    traced orbit; the channel spans :math:`(-\\delta_R, \\delta_L)`.

    :param index: 1-based number within its skeleton
    :param direction: direction :math:`d` on the invariant surface
    :param period_vector: :math:`\\Lambda d`
    :param passes: the traced orbit
    :param left: :math:`\\delta_L`
    :param right: :math:`\\delta_R`
    :param bounding_diagonals: singular diagonals on the two channel borders
    :param folded_cells: one :class:`FoldedCell` per pass
    """

    index: int
    direction: Vec2
    period_vector: Vec2
    passes: Tuple[Pass, ...] = field(repr=False)
    left: QuadraticSurd
    right: QuadraticSurd
    bounding_diagonals: Tuple[Optional[SingularDiagonal], Optional[SingularDiagonal]] = field(repr=False)
    folded_cells: Tuple[FoldedCell, ...] = field(repr=False)

    @property
    def period(self):
        """Orbit parameter :math:`\\Lambda`, the period is :math:`\\Lambda d`."""
        last = self.passes[-1]
        return last.offset + last.step

    @property
    def speed(self):
        return math.sqrt(float(self.direction.norm2()))

    @property
    def width(self):
        return float(self.left + self.right) / self.speed

    @property
    def length(self):
        return float(self.period) * self.speed

    def exact_width(self):
        """Width as a :class:`exact.QuadraticSurd` when :math:`|d|` lies in a compatible field."""
        return self._exact(lambda norm: (self.left + self.right) / norm)

    def exact_length(self):
        return self._exact(lambda norm: self.period * norm)

    def _exact(self, f):
        norm = exact_sqrt(self.direction.norm2())
        if norm is None:
            return None
        try:
            return f(norm)
        except DomainError:
            return None

    def area(self):
        """Exact area swept in phase space, width times length."""
        return (self.left + self.right) * self.period

    def images(self):
        return sorted({cell.image for cell in self.folded_cells})


@dataclass(frozen=True)
class DirectionClass:
    """
    A direction on the invariant surface and the kind of skeleton it carries.

    :param direction: exact direction :math:`d`, not normalised
    :param kind: :class:`Kind`
    :param period: shortest period of an orbit along :math:`d`, or :code:`None`
    :param lattice_period: shortest lattice vector along :math:`d` when the parallel periods
        form a rank one group
    :param pocs: the channels of a periodic skeleton
    """

    direction: Vec2
    kind: Kind
    period: Optional[Vec2] = None
    lattice_period: Optional[Vec2] = None
    pocs: Tuple[PocDescriptor, ...] = field(default=(), compare=False, repr=False)

    def unit(self):
        """Float unit vector along the direction."""
        d = self.direction.to_float()
        return d / np.linalg.norm(d)

    def winding(self, lattice):
        """
        Coefficients :math:`(c_1, c_2)` of the period over the lattice generators.

        For the rectangle these are the winding numbers :math:`(q, r)`.
        """
        if self.period is None:
            raise KindError("aperiodic directions have no period")
        D1, D2 = lattice.generators
        det = D1.cross(D2)
        c1, c2 = self.period.cross(D2) / det, D1.cross(self.period) / det
        return tuple(c.a if c.is_rational else c for c in (c1, c2))


def _first_gap(intervals, lo, hi):
    cursor = lo
    for a, b in sorted(intervals, key=lambda iv: iv[0]):
        if b <= cursor:
            continue
        if a > cursor:
            return cursor, min(a, hi)
        cursor = b
        if cursor >= hi:
            return None
    return (cursor, hi) if cursor < hi else None


def _channel(spec, passes):
    # nearest vertex offsets on both sides of the orbit
    sides = spec.sides()
    left, right = [], []
    for i, p in enumerate(passes):
        det = p.linear.det()
        P_in, Q_in = sides[p.side_in]
        P_out, Q_out = sides[p.side_out]
        e_in, e_out = Q_in - P_in, Q_out - P_out
        c_in, c_out = p.velocity.cross(e_in), p.velocity.cross(e_out)
        for k, w in enumerate(spec.vertices):
            if (P_in - w).cross(e_in) / c_in > 0 or (P_out - w).cross(e_out) / c_out < 0:
                continue
            o = det * p.velocity.cross(w - p.start)
            if o.sign() > 0:
                left.append((o, i, k))
            elif o.sign() < 0:
                right.append((-o, i, k))
    if not left or not right:
        raise ConsistencyError("orbit channel is not bounded by vertices")
    dl = min(o for o, _, _ in left)
    dr = min(o for o, _, _ in right)
    return (
        dl,
        dr,
        [(i, k) for o, i, k in left if o == dl],
        [(i, k) for o, i, k in right if o == dr],
    )


def _border(spec, passes, candidates):
    for strict in (True, False):
        for i, k in candidates:
            v = passes[i].velocity
            for u in (v, -v):
                if _inward(spec, k, u, strict):
                    return singular_diagonal(spec, k, u)
    logger.warning("channel border has no singular diagonal leaving a vertex")
    return None


def _cells(spec, passes, left, right, index):
    sides = spec.sides()
    width = float(left + right)
    speed = math.sqrt(float(passes[0].velocity.norm2()))
    cells = []
    for p in passes:
        P_in, Q_in = sides[p.side_in]
        P_out, Q_out = sides[p.side_out]
        cells.append(
            FoldedCell(
                index[p.linear],
                1 if p.linear.det() > 0 else -1,
                p.start.to_float(),
                p.velocity.to_float(),
                speed,
                float(p.offset) * speed,
                float(right),
                width / speed,
                (P_in.to_float(), (Q_in - P_in).to_float()),
                (P_out.to_float(), (Q_out - P_out).to_float()),
            )
        )
    return tuple(cells)


def _seed_orbit(spec, direction, g, side, lo, hi, max_passes):
    P0, P1 = spec.sides()[side]
    e = P1 - P0
    v = g.transpose() @ direction
    for f in _SEEDS:
        t = lo + (hi - lo) * f
        A = P0 + e * ((t - v.cross(P0)) / v.cross(e))
        passes = trace_orbit(spec, direction, g, A, side, max_passes)
        if passes is not None:
            return passes
    raise ConsistencyError(f"every seed between offsets {lo} and {hi} hits a vertex")


def periodic_skeleton(spec, direction, max_passes=MAX_PASSES):
    """
    All orbit channels of a periodic direction, found by covering every
    (unfolding, side, offset) chord of the billiard with traced channels.

    :param spec: :class:`geometry.BilliardSpec`
    :param direction: exact direction :math:`d`
    :return: list of :class:`PocDescriptor`
    """
    d = as_direction(direction)
    sides = spec.sides()
    group = reflection_group(spec)
    index = {g: k for k, g in enumerate(group, 1)}
    covered = defaultdict(list)
    pocs = []
    for g in group:
        v = g.transpose() @ d
        offsets = sorted(set(v.cross(w) for w in spec.vertices))
        entering = [j for j, (p, q) in enumerate(sides) if (q - p).cross(v).sign() > 0]
        for lo, hi in zip(offsets, offsets[1:]):
            for j in entering:
                P0, P1 = sides[j]
                if lo < v.cross(P1) or hi > v.cross(P0):
                    continue
                while True:
                    gap = _first_gap(covered[(g, j)], lo, hi)
                    if gap is None:
                        break
                    passes = _seed_orbit(spec, d, g, j, gap[0], gap[1], max_passes)
                    left, right, lc, rc = _channel(spec, passes)
                    borders = (_border(spec, passes, lc), _border(spec, passes, rc))
                    period = passes[-1].offset + passes[-1].step
                    poc = PocDescriptor(
                        len(pocs) + 1,
                        d,
                        d * period,
                        tuple(passes),
                        left,
                        right,
                        borders,
                        _cells(spec, passes, left, right, index),
                    )
                    pocs.append(poc)
                    for p in passes:
                        t = p.velocity.cross(p.start)
                        if p.linear.det() > 0:
                            interval = (t - right, t + left)
                        else:
                            interval = (t - left, t + right)
                        covered[(p.linear, p.side_in)].append(interval)
    total = sum((poc.area() for poc in pocs), QuadraticSurd(0))
    expected = 2 * spec.C * spec.area()
    if total != expected:
        warnings.warn(f"channels along {d} cover {total} instead of {expected}")
    logger.info(f"{len(pocs)} orbit channels along {d}")
    return pocs


def _lattice_period(periods, d, kernel):
    vectors = []
    for n in kernel:
        V = Vec2(0, 0)
        for coefficient, D in zip(n, periods):
            V = V + D * coefficient
        if not V.is_zero():
            vectors.append(V)
    if not vectors:
        return False, None
    scalars = [V.dot(d) / d.norm2() for V in vectors]
    ratios = [s / scalars[0] for s in scalars]
    if not all(r.is_rational for r in ratios):
        return True, None
    ratios = [r.a for r in ratios]
    num = 0
    den = 1
    for r in ratios:
        num = math.gcd(num, r.numerator)
        den = den * r.denominator // math.gcd(den, r.denominator)
    t = scalars[0] * Fraction(num, den)
    return True, d * abs(t)


def classify_direction(lattice, direction, trace=True):
    """
    Decides whether a direction carries a periodic skeleton.

    The direction is periodic when some nonzero integer combination of the periods is
    parallel to it, i.e. when the rational and irrational parts of
    :math:`d \\times D_k` admit a common integer relation.

    :param lattice: :class:`geometry.PeriodLattice`
    :param direction: exact direction, pair or :code:`"x,y"` string
    :param bool trace: trace the channels to find the shortest realised period
    :return: :class:`DirectionClass`
    """
    d = as_direction(direction)
    periods = lattice.all_periods()
    crosses = [d.cross(D) for D in periods]
    kernel = integer_kernel([[c.a for c in crosses], [c.b for c in crosses]])
    periodic, lattice_period = _lattice_period(periods, d, kernel)
    if not periodic:
        logger.debug(f"{d} is aperiodic")
        return DirectionClass(d, Kind.APERIODIC)
    pocs = ()
    period = lattice_period
    if trace:
        pocs = tuple(periodic_skeleton(lattice.spec, d))
        shortest = min(pocs, key=lambda poc: poc.period)
        period = shortest.period_vector
    return DirectionClass(d, Kind.PERIODIC, period, lattice_period, pocs)


def enumerate_pocs(spec, lattice, direction):
    """
    Orbit channels of a periodic direction.

    :param spec: :class:`geometry.BilliardSpec`
    :param lattice: :class:`geometry.PeriodLattice` of :code:`spec`
    :param direction: :class:`DirectionClass`
    :return: list of :class:`PocDescriptor`
    """
    if lattice.spec.family is not spec.family:
        raise DomainError("lattice belongs to another billiard")
    if direction.kind is not Kind.PERIODIC:
        raise KindError(f"direction {direction.direction} is aperiodic and has no POCs")
    if direction.pocs:
        return list(direction.pocs)
    return periodic_skeleton(spec, direction.direction)


def poc_pieces(spec, poc):
    """
    Splits a channel into the strips it draws on the EPP of :func:`geometry.build_epp`.

    Two consecutive passes belong to one strip when the image of the second pass is the
    mirror image of the first across the side they share; every other reflection leaves
    the EPP through a border side and starts a new strip.  These strips are the POCs
    counted on a drawing of the EPP.

    :param spec: :class:`geometry.BilliardSpec`
    :param poc: :class:`PocDescriptor` of :code:`spec`
    :return: list of tuples of pass indices, each in orbit order
    """
    placements = {image.linear: image.translation for image in build_epp(spec)}
    sides = spec.sides()
    n = len(poc.passes)
    breaks = []
    for i, p in enumerate(poc.passes):
        P, Q = sides[p.side_out]
        r = Mat2.reflection(Q - P)
        if placements[p.linear @ r] != p.linear @ (P - r @ P) + placements[p.linear]:
            breaks.append(i)
    if not breaks:
        return [tuple(range(n))]
    pieces = []
    for a, b in zip(breaks, breaks[1:] + [breaks[0] + n]):
        pieces.append(tuple(k % n for k in range(a + 1, b + 1)))
    return pieces


def poc_types(pocs):
    """
    Groups channels of one direction by exact width and period.

    States built in channels of one type coincide once folded into the billiard.

    :param pocs: list of :class:`PocDescriptor` sharing a direction
    :return: list of tuples of :class:`PocDescriptor`, shortest period first
    """
    if len({poc.direction for poc in pocs}) > 1:
        raise DomainError("channels of different directions cannot be grouped")
    groups = defaultdict(list)
    for poc in pocs:
        groups[(poc.left + poc.right, poc.period)].append(poc)
    return [tuple(groups[key]) for key in sorted(groups, key=lambda key: (key[1], key[0]))]
