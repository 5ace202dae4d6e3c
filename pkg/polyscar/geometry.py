"""
Billiard families, the elementary polygon pattern (EPP) obtained by mirror
unfolding, and the projected lattice of periods of the invariant surface.
"""

import logging
import warnings
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np
from matplotlib.path import Path

from polyscar.errors import (
    ConfigurationError,
    ConsistencyError,
    DomainError,
    NeedsApproximationError,
    UnsupportedBoundaryError,
    UnsupportedError,
)
from polyscar.exact import (
    CfApprox,
    Mat2,
    QuadraticSurd,
    ReductionCertificate,
    Vec2,
    approximate_value,
    as_ratio,
    as_surd,
    axis_divisors,
    convergents,
    lcm_list,
    parse_surd,
    reduce_period,
)

logger = logging.getLogger(__name__)


class Family(Enum):
    TRIANGLE = "triangle"
    PARALLELOGRAM = "parallelogram"
    RECTANGLE = "rectangle"
    LSHAPE = "lshape"
    POLYGON = "polygon"


class Boundary(Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class Classification(Enum):
    INTEGER = "integer"
    DRPB = "drpb"
    IRRATIONAL = "irrational"


SQRT2 = QuadraticSurd(0, 1, 2)
SQRT3 = QuadraticSurd(0, 1, 3)
HALF = Fraction(1, 2)

_SIDE_NAMES = {Family.TRIANGLE: ("OF", "FH", "HO")}


@dataclass(frozen=True)
class BilliardSpec:
    """
    A rational polygon billiard.

    Vertices are exact and listed counter-clockwise; :code:`angles[k]` is the interior angle at
    :code:`vertices[k]` divided by :math:`\\pi`.  Use the family constructors
    :meth:`triangle`, :meth:`parallelogram`, :meth:`rectangle`, :meth:`lshape`.

    :param family: :class:`Family`
    :param angles: interior angles as fractions of :math:`\\pi`
    :param sizes: family size parameters
    :param vertices: exact polygon vertices
    """

    family: Family
    angles: Tuple[Fraction, ...]
    sizes: Dict[str, QuadraticSurd] = field(compare=False)
    vertices: Tuple[Vec2, ...] = field(compare=False)

    def __post_init__(self):
        n = len(self.angles)
        if n < 3:
            raise DomainError("a polygon needs at least three angles")
        for angle in self.angles:
            if angle <= 0 or angle >= 2:
                raise DomainError(f"angle {angle}π out of range")
        if sum(self.angles) != n - 2:
            raise DomainError(
                f"angles sum to {sum(self.angles)}π instead of {n - 2}π"
            )
        if self.vertices:
            if len(self.vertices) != n:
                raise DomainError("one angle per vertex expected")
            self._check_angles()

    def _check_angles(self):
        pts = self.float_vertices()
        n = len(pts)
        for k in range(n):
            prev, here, nxt = pts[k - 1], pts[k], pts[(k + 1) % n]
            u, v = nxt - here, prev - here
            interior = np.arctan2(u[0] * v[1] - u[1] * v[0], u @ v) % (2 * np.pi)
            if not np.isclose(interior, float(self.angles[k]) * np.pi, atol=1e-9):
                raise DomainError(
                    f"vertex {k} has angle {interior / np.pi:.6f}π, expected {self.angles[k]}π"
                )

    @classmethod
    def triangle(cls):
        """
        The right triangle with angles :math:`\\pi/8, \\pi/2, 3\\pi/8`.

        :math:`O=(0,0)`, :math:`F=(1+\\sqrt{2},0)`, :math:`H=(1+\\sqrt{2},1)`; the side FH lies
        on :math:`x=1+\\sqrt{2}`.
        """
        X = 1 + SQRT2
        vertices = (Vec2(0, 0), Vec2(X, 0), Vec2(X, 1))
        angles = (Fraction(1, 8), HALF, Fraction(3, 8))
        return cls(Family.TRIANGLE, angles, {}, vertices)

    @classmethod
    def parallelogram(cls, L=4):
        """
        Parallelogram with sides :math:`L` and 1 and angles :math:`\\pi/3, 2\\pi/3`.

        :param L: rational length or a surd of :math:`\\mathbb{Q}(\\sqrt{3})`
        """
        L = as_surd(L)
        if L <= 0:
            raise DomainError("L must be positive")
        if L.s not in (1, 3):
            raise NeedsApproximationError(
                f"L = {L} is not in Q(sqrt 3); replace it by a rational approximation"
            )
        h = SQRT3 / 2
        vertices = (Vec2(0, 0), Vec2(L, 0), Vec2(L + HALF, h), Vec2(HALF, h))
        third = Fraction(1, 3)
        angles = (third, 2 * third, third, 2 * third)
        return cls(Family.PARALLELOGRAM, angles, {"L": L}, vertices)

    @classmethod
    def rectangle(cls, a=1, b=1):
        a, b = as_surd(a), as_surd(b)
        if a <= 0 or b <= 0:
            raise DomainError("sides must be positive")
        vertices = (Vec2(0, 0), Vec2(a, 0), Vec2(a, b), Vec2(0, b))
        return cls(Family.RECTANGLE, (HALF,) * 4, {"a": a, "b": b}, vertices)

    @classmethod
    def lshape(cls, a, b, c, d):
        """
        L-shaped billiard: a bottom bar of width :math:`a+b` and height :math:`c` with a column
        of width :math:`a` and height :math:`d` on its left end.

        The ratios :math:`b/a` and :math:`d/c` must be rational.
        """
        a, b, c, d = (as_surd(v) for v in (a, b, c, d))
        if min(a, b, c, d) <= 0:
            raise DomainError("sizes must be positive")
        for num, den, name in ((b, a, "b/a"), (d, c, "d/c")):
            if not (num / den).is_rational:
                raise DomainError(f"{name} = {num / den} must be rational")
        vertices = (
            Vec2(0, 0),
            Vec2(a + b, 0),
            Vec2(a + b, c),
            Vec2(a, c),
            Vec2(a, c + d),
            Vec2(0, c + d),
        )
        angles = (HALF, HALF, HALF, Fraction(3, 2), HALF, HALF)
        return cls(Family.LSHAPE, angles, {"a": a, "b": b, "c": c, "d": d}, vertices)

    @classmethod
    def polygon(cls, angles, vertices=()):
        """
        Generic rational polygon.  Only genus and EPP construction are available for it.

        :param angles: interior angles as fractions of :math:`\\pi`
        :param vertices: optional exact vertices
        """
        angles = tuple(as_ratio(a) for a in angles)
        vertices = tuple(v if isinstance(v, Vec2) else Vec2(*v) for v in vertices)
        return cls(Family.POLYGON, angles, {}, vertices)

    @property
    def C(self):
        """Least common multiple of the angle denominators."""
        return lcm_list([a.denominator for a in self.angles])

    def float_vertices(self):
        return np.array([v.to_float() for v in self.vertices])

    def sides(self):
        """:return: list of exact (start, end) vertex pairs, side :math:`k` leaving vertex :math:`k`"""
        n = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def side_names(self):
        return _SIDE_NAMES.get(
            self.family, tuple(f"side{k}" for k in range(len(self.vertices)))
        )

    def side(self, name):
        """
        Looks up a side by name (:code:`"FH"`) or index.

        :return: tuple (index, start, end) with float endpoints
        """
        names = self.side_names()
        if isinstance(name, str) and name in names:
            k = names.index(name)
        else:
            try:
                k = int(str(name).replace("side", ""))
            except ValueError:
                raise DomainError(f"unknown side '{name}'; sides are {names}")
        if not 0 <= k < len(self.vertices):
            raise DomainError(f"unknown side '{name}'")
        pts = self.float_vertices()
        return k, pts[k], pts[(k + 1) % len(pts)]

    def area(self):
        """Exact area by the shoelace formula."""
        total = QuadraticSurd(0)
        for p, q in self.sides():
            total = total + p.cross(q)
        return total / 2

    def bounding_box(self):
        pts = self.float_vertices()
        return pts.min(axis=0), pts.max(axis=0)

    def path(self):
        return Path(self.float_vertices(), closed=False)

    def contains(self, points, tol=1e-12):
        """
        Closed point-in-polygon test.

        :param points: array of shape (N, 2)
        :return: boolean array
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        inside = self.path().contains_points(points)
        return inside | (self.boundary_distance(points) <= tol)

    def boundary_distance(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        pts = self.float_vertices()
        dist = np.full(len(points), np.inf)
        for k in range(len(pts)):
            p, q = pts[k], pts[(k + 1) % len(pts)]
            e = q - p
            t = np.clip(((points - p) @ e) / (e @ e), 0, 1)
            foot = p + t[:, None] * e
            dist = np.minimum(dist, np.linalg.norm(points - foot, axis=1))
        return dist


def genus(spec):
    """
    Genus of the invariant surface, :math:`g = 1 + \\frac{C}{2}\\sum_k (p_k - 1)/q_k`.

    :param spec: :class:`BilliardSpec` or a sequence of angles as fractions of :math:`\\pi`
    :return: integer genus
    """
    angles = spec.angles if isinstance(spec, BilliardSpec) else [as_ratio(a) for a in spec]
    C = lcm_list([a.denominator for a in angles])
    g = 1 + Fraction(C, 2) * sum(
        Fraction(a.numerator - 1, a.denominator) for a in angles
    )
    if g.denominator != 1:
        raise ConsistencyError(f"non-integer genus {g} for angles {list(angles)}")
    return int(g)


@dataclass(frozen=True)
class EppImage:
    """
    One mirror image of the billiard in the EPP.

    A base point :math:`r` is placed at :math:`g r + t`.

    :param index: 1-based index, the identity placement has index 1
    :param linear: orthogonal linear part :math:`g`
    :param translation: translation :math:`t`
    :param eta: sign of the image in plane-wave sums
    """

    index: int
    linear: Mat2
    translation: Vec2
    eta: int

    @property
    def orientation(self):
        return 1 if self.linear.det() > 0 else -1

    def place(self, points):
        """Float images of base points, array of shape (N, 2)."""
        g = self.linear.to_float()
        return np.atleast_2d(points) @ g.T + self.translation.to_float()

    def unplace(self, points):
        """Base points of EPP points lying in this image."""
        g = self.linear.to_float()
        return (np.atleast_2d(points) - self.translation.to_float()) @ g

    def place_exact(self, point):
        return self.linear @ point + self.translation


def reflection_group(spec):
    """
    Linear parts of all compositions of the side reflections.

    :return: list of :class:`exact.Mat2`, identity first
    """
    generators = [Mat2.reflection(q - p) for p, q in spec.sides()]
    group = [Mat2.identity()]
    seen = set(group)
    queue = deque(group)
    while queue:
        g = queue.popleft()
        for r in generators:
            h = g @ r
            if h not in seen:
                seen.add(h)
                group.append(h)
                queue.append(h)
                if len(group) > 4 * spec.C:
                    raise ConsistencyError("reflection group is larger than 2C")
    if len(group) != 2 * spec.C:
        raise ConsistencyError(f"reflection group has {len(group)} elements, expected {2 * spec.C}")
    return group


def _side_conditions(spec, boundary):
    n = len(spec.vertices)
    if isinstance(boundary, str):
        boundary = Boundary(boundary.lower())
    if isinstance(boundary, Boundary):
        return (boundary,) * n
    conditions = tuple(Boundary(b.lower()) if isinstance(b, str) else b for b in boundary)
    if len(conditions) != n:
        raise ConfigurationError(f"{n} boundary conditions expected, got {len(conditions)}")
    return conditions


def _signs(spec, group, conditions):
    # eta(g r_e) = -eta(g) on Dirichlet sides, +eta(g) on Neumann sides
    reflections = [Mat2.reflection(q - p) for p, q in spec.sides()]
    eta = {group[0]: 1}
    queue = deque([group[0]])
    while queue:
        g = queue.popleft()
        for r, bc in zip(reflections, conditions):
            h = g @ r
            sign = -eta[g] if bc is Boundary.DIRICHLET else eta[g]
            if h not in eta:
                eta[h] = sign
                queue.append(h)
            elif eta[h] != sign:
                raise UnsupportedBoundaryError(
                    "boundary conditions "
                    + ", ".join(c.value for c in conditions)
                    + " cannot be realised by EPP signs"
                )
    return eta


def build_epp(spec, boundary=Boundary.DIRICHLET):
    """
    Unfolds the billiard into its elementary polygon pattern of :math:`2C` images.

    Images fan around vertex 0 when its angle is :math:`\\pi/C`, otherwise they are placed
    breadth-first by reflections across the sides.

    :param spec: :class:`BilliardSpec`
    :param boundary: :class:`Boundary` for all sides or one per side
    :return: list of :class:`EppImage`
    """
    conditions = _side_conditions(spec, boundary)
    group = reflection_group(spec)
    eta = _signs(spec, group, conditions)
    sides = spec.sides()
    placements = {}
    if spec.angles[0] == Fraction(1, spec.C):
        first, last = Mat2.reflection(sides[0][1] - sides[0][0]), Mat2.reflection(
            sides[-1][1] - sides[-1][0]
        )
        shift = sides[0][0]
        g = Mat2.identity()
        for k in range(2 * spec.C):
            placements.setdefault(g, shift - g @ shift)
            g = g @ (first if k % 2 == 0 else last)
    if len(placements) != 2 * spec.C:
        placements = _bfs_placements(spec)
    images = []
    for index, g in enumerate(group, 1):
        images.append(EppImage(index, g, placements[g], eta[g]))
    logger.debug(f"EPP of the {spec.family.value} has {len(images)} images")
    return images


def _bfs_placements(spec):
    placements = {Mat2.identity(): Vec2(0, 0)}
    queue = deque(placements.items())
    mirrors = [(Mat2.reflection(q - p), p) for p, q in spec.sides()]
    while queue:
        g, t = queue.popleft()
        for r, p in mirrors:
            h = g @ r
            if h in placements:
                continue
            # (g, t) composed with the mirror x -> r (x - p) + p
            placements[h] = g @ (p - r @ p) + t
            queue.append((h, placements[h]))
    return placements


@dataclass(frozen=True)
class PeriodLattice:
    """
    Projected lattice of periods of the invariant surface.

    Extra periods are expanded over the generators,
    :math:`D_k = c_{k1} D_1 + c_{k2} D_2`.  :math:`D_1/C_1` and :math:`D_2/C_2` are the shortest
    lattice vectors along the generators.

    :param spec: the billiard
    :param generators: :math:`(D_1, D_2)`
    :param periods: the remaining periods :math:`D_3, \\dots`
    :param relations: coefficients :math:`(c_{k1}, c_{k2})` used for quantization, after any
        rational substitution
    :param scale_divisors: :math:`(C_1, C_2)`
    :param classification: :class:`Classification` of :code:`relations`
    :param variant: :code:`"u"` or :code:`"q"` for substituted irrational relations
    :param approximation: rational :math:`u/q` used for the substitution
    :param certificates: pairs (axis, :class:`exact.ReductionCertificate`)
    """

    spec: BilliardSpec
    generators: Tuple[Vec2, Vec2]
    periods: Tuple[Vec2, ...]
    relations: Tuple[Tuple[Fraction, Fraction], ...]
    scale_divisors: Tuple[int, int]
    classification: Classification
    variant: Optional[str] = None
    approximation: Optional[Fraction] = None
    certificates: Tuple[Tuple[int, ReductionCertificate], ...] = ()

    @property
    def C1(self):
        return self.scale_divisors[0]

    @property
    def C2(self):
        return self.scale_divisors[1]

    def all_periods(self):
        return self.generators + self.periods

    def float_generators(self):
        return np.array([g.to_float() for g in self.generators])

    def refined_generators(self):
        """:return: float array with rows :math:`D_1/C_1, D_2/C_2`"""
        D = self.float_generators()
        return D / np.array(self.scale_divisors, dtype=float)[:, None]


def _substitute(coefficient, approximation, variant):
    # a + b sqrt(s) with sqrt(s) ~ u/q ("q") or s q/u ("u")
    coefficient = as_surd(coefficient)
    if coefficient.is_rational:
        return coefficient.a
    u, q = approximation.numerator, approximation.denominator
    root = Fraction(u, q) if variant == "q" else Fraction(coefficient.s * q, u)
    return coefficient.a + coefficient.b * root


def _lattice_data(spec):
    if spec.family is Family.TRIANGLE:
        D1, D2 = Vec2(2, 0), Vec2(0, 2)
        h = SQRT2 / 2
        coefficients = [(h, h), (-h, h)]
    elif spec.family is Family.PARALLELOGRAM:
        L = spec.sizes["L"]
        D1, D2 = Vec2(Fraction(3, 2), SQRT3 / 2), Vec2(Fraction(3, 2), -SQRT3 / 2)
        coefficients = [(QuadraticSurd(0), L), (L, QuadraticSurd(0))]
    elif spec.family is Family.RECTANGLE:
        a, b = spec.sizes["a"], spec.sizes["b"]
        D1, D2 = Vec2(2 * a, 0), Vec2(0, 2 * b)
        coefficients = []
    elif spec.family is Family.LSHAPE:
        s = spec.sizes
        D1, D2 = Vec2(2 * s["a"], 0), Vec2(0, 2 * s["c"])
        zero = QuadraticSurd(0)
        coefficients = [(s["b"] / s["a"], zero), (zero, s["d"] / s["c"])]
    else:
        raise UnsupportedError(f"no period lattice for the {spec.family.value} family")
    return D1, D2, coefficients


def lattice_generators(spec):
    """:return: exact generators :math:`(D_1, D_2)` of the period lattice"""
    D1, D2, _ = _lattice_data(spec)
    return D1, D2


def _certificates(relations):
    certs = []
    pairs = list(relations)
    # single-axis combinations of two relations
    for j in range(len(relations)):
        for k in range(j + 1, len(relations)):
            (a1, a2), (b1, b2) = relations[j], relations[k]
            if a2 != 0 and a2 == b2:
                pairs.append((a1 - b1, Fraction(0)))
            if a1 != 0 and a1 == b1:
                pairs.append((Fraction(0), a2 - b2))
            if a2 != 0 and a2 == -b2:
                pairs.append((a1 + b1, Fraction(0)))
            if a1 != 0 and a1 == -b1:
                pairs.append((Fraction(0), a2 + b2))
    for c1, c2 in pairs:
        if c2 == 0 and c1 != 0:
            certs.append((1, reduce_period(c1, c1.denominator)))
        elif c1 == 0 and c2 != 0:
            certs.append((2, reduce_period(c2, c2.denominator)))
    return tuple(certs)


def classify_relations(relations):
    """
    :param relations: coefficient pairs, rational or :class:`exact.QuadraticSurd`
    :return: :class:`Classification`
    """
    coefficients = [as_surd(c) for pair in relations for c in pair]
    if not all(c.is_rational for c in coefficients):
        return Classification.IRRATIONAL
    if all(c.a.denominator == 1 for c in coefficients):
        return Classification.INTEGER
    return Classification.DRPB


def period_lattice(spec, approx=None, variant="u"):
    """
    Builds the projected period lattice of a billiard.

    Irrational relations need a rational approximation :math:`u/q` of the radical.  The
    :code:`"u"` variant substitutes :math:`\\sqrt{s} \\to sq/u`, the :code:`"q"` variant
    :math:`\\sqrt{s} \\to u/q`; for the triangle these give the divisors :math:`u` and :math:`q`.

    :param spec: :class:`BilliardSpec`
    :param approx: :class:`exact.CfApprox`, a rational :math:`u/q`, or :code:`None`
    :param string variant: :code:`"u"` or :code:`"q"`
    :return: :class:`PeriodLattice`
    """
    if variant not in ("u", "q"):
        raise ConfigurationError(f"unknown variant '{variant}'")
    D1, D2, coefficients = _lattice_data(spec)
    periods = tuple(D1 * c1 + D2 * c2 for c1, c2 in coefficients)
    approximation = None
    if classify_relations(coefficients) is Classification.IRRATIONAL:
        if approx is None:
            raise NeedsApproximationError(
                f"the {spec.family.value} has irrational period relations; supply a rational approximation"
            )
        approximation = approx.last if isinstance(approx, CfApprox) else as_ratio(approx)
        relations = tuple(
            (_substitute(c1, approximation, variant), _substitute(c2, approximation, variant))
            for c1, c2 in coefficients
        )
    else:
        relations = tuple((as_surd(c1).a, as_surd(c2).a) for c1, c2 in coefficients)
        variant = None
    classification = classify_relations(relations)
    divisors = axis_divisors(relations)
    certificates = _certificates(relations)
    for axis in (1, 2):
        certified = [c.certified.denominator for a, c in certificates if a == axis]
        if certified and lcm_list(certified) != divisors[axis - 1]:
            warnings.warn(
                f"certified divisor {lcm_list(certified)} differs from C{axis} = {divisors[axis - 1]}"
            )
    logger.info(
        f"{spec.family.value} lattice: {classification.value}, C1={divisors[0]}, C2={divisors[1]}"
    )
    return PeriodLattice(
        spec,
        (D1, D2),
        periods,
        relations,
        divisors,
        classification,
        variant,
        approximation,
        certificates,
    )


@dataclass(frozen=True)
class BilliardConfig:
    """
    Billiard read from a config file.

    :param spec: :class:`BilliardSpec`
    :param boundary: side conditions
    :param approx: :class:`exact.CfApprox` or rational :math:`u/q` for irrational relations
    :param variant: :code:`"u"` or :code:`"q"`
    :param raw: the key/value pairs as read
    """

    spec: BilliardSpec
    boundary: Tuple[Boundary, ...]
    approx: object
    variant: str
    raw: Dict[str, str]

    def lattice(self, variant=None):
        return period_lattice(self.spec, self.approx, variant or self.variant)


_KEYS = {
    "family", "angles", "L", "a", "b", "c", "d", "boundary",
    "target", "convergents", "approx", "variant", "tolerance",
}


def read_config(path):
    """
    Reads a flat :code:`key = value` file; :code:`#` starts a comment.

    :param string path: file path
    :return: dict of strings
    """
    values = {}
    try:
        with open(path) as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigurationError(f"cannot read config '{path}': {e.strerror}")
    for number, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigurationError(f"{path}:{number}: unknown key '{key}'")
        values[key] = value
    return values


def billiard_from_config(values):
    """
    Builds a :class:`BilliardConfig` from key/value pairs.

    :param dict values: as returned by :func:`read_config`
    """
    family = values.get("family")
    try:
        family = Family(family)
    except ValueError:
        raise ConfigurationError(f"unknown family '{family}'")

    def size(key):
        if key not in values:
            raise ConfigurationError(f"the {family.value} needs '{key}'")
        return parse_surd(values[key])

    if family is Family.TRIANGLE:
        spec = BilliardSpec.triangle()
    elif family is Family.PARALLELOGRAM:
        L = parse_surd(values.get("L", "4"))
        if L.s not in (1, 3):
            tolerance = float(values.get("tolerance", "1e-8"))
            L = QuadraticSurd(approximate_value(L, tolerance))
            logger.info(f"parallelogram side replaced by {L}")
        spec = BilliardSpec.parallelogram(L)
    elif family is Family.RECTANGLE:
        spec = BilliardSpec.rectangle(size("a"), size("b"))
    elif family is Family.LSHAPE:
        spec = BilliardSpec.lshape(size("a"), size("b"), size("c"), size("d"))
    else:
        if "angles" not in values:
            raise ConfigurationError("a generic polygon needs 'angles'")
        spec = BilliardSpec.polygon([a for a in values["angles"].split(",")])

    if "angles" in values and family is not Family.POLYGON:
        given = tuple(as_ratio(a) for a in values["angles"].split(","))
        if sorted(given) != sorted(spec.angles):
            raise ConfigurationError(
                f"angles {values['angles']} do not match the {family.value}"
            )

    boundary = values.get("boundary", "dirichlet")
    parts = [b.strip() for b in boundary.split(",")]
    try:
        conditions = _side_conditions(spec, parts[0] if len(parts) == 1 else parts)
    except ConfigurationError:
        raise
    except ValueError:
        raise ConfigurationError(f"unknown boundary condition '{boundary}'")

    variant = values.get("variant", "u").lower()
    if variant not in ("u", "q"):
        raise ConfigurationError(f"unknown variant '{variant}'")
    if "approx" in values:
        approx = as_ratio(values["approx"])
    else:
        try:
            count = int(values.get("convergents", "10"))
        except ValueError:
            raise ConfigurationError("'convergents' must be an integer")
        approx = convergents(values.get("target", "sqrt2"), count)
    return BilliardConfig(spec, conditions, approx, variant, dict(values))


def load_billiard(path):
    """Reads and builds the billiard of a config file."""
    return billiard_from_config(read_config(path))

