"""
Closed-form semiclassical wave functions and superscar states.

All modes are unnormalised: a wave function is defined up to a constant.  Closed
forms are evaluated either in float64 with numpy or, for residual checks on sides
where the form vanishes by construction, with mpmath at higher precision.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

import mpmath
import numpy as np
from scipy.optimize import brentq, minimize_scalar

from polyscar.errors import (
    CompatibilityError,
    DomainError,
    KindError,
    NeedsApproximationError,
    RemappingError,
    UnsupportedBoundaryError,
    UnsupportedError,
)
from polyscar.exact import CfApprox, Vec2, as_ratio, as_surd
from polyscar.geometry import (
    SQRT2,
    SQRT3,
    BilliardSpec,
    Boundary,
    Family,
    build_epp,
    period_lattice,
)
from polyscar.quantization import (
    check_compatibility,
    lattice_momentum,
    lshape_ratios,
    remap_quantum_numbers,
    winding_numbers,
)
from polyscar.skeleton import PocDescriptor, as_direction
from polyscar.utils import parallel_map, random_interior

logger = logging.getLogger(__name__)

NORMALIZATION = "defined up to a constant"
RESIDUAL_DIGITS = 30
ZERO_TOLERANCE = 1e-12
IDENTITY_TOLERANCE = 1e-10
MIN_SAMPLES_PER_WAVELENGTH = 8


class ModeKind(Enum):
    SWF_U = "swf-u"
    SWF_Q = "swf-q"
    SWF_BRANCH1 = "swf-branch1"
    SWF_BRANCH2 = "swf-branch2"
    SWF_COMPLEX = "swf-complex"
    EXACT = "exact"
    SUPERSCAR = "superscar"
    BS_FOLDED = "bs-folded"


SWF_KINDS = (
    ModeKind.SWF_U,
    ModeKind.SWF_Q,
    ModeKind.SWF_BRANCH1,
    ModeKind.SWF_BRANCH2,
    ModeKind.SWF_COMPLEX,
    ModeKind.EXACT,
)

_KINDS = {
    Family.TRIANGLE: (ModeKind.SWF_U, ModeKind.SWF_Q),
    Family.PARALLELOGRAM: (
        ModeKind.SWF_BRANCH1,
        ModeKind.SWF_BRANCH2,
        ModeKind.SWF_COMPLEX,
    ),
    Family.RECTANGLE: (ModeKind.EXACT,),
    Family.LSHAPE: (ModeKind.EXACT,),
}

_POCS = {Family.TRIANGLE: (6, 9), Family.PARALLELOGRAM: (3, 5, 8)}


@dataclass(frozen=True)
class WaveMode:
    """
    A closed-form wave function or superscar state of a billiard.

    :param spec: :class:`geometry.BilliardSpec`
    :param kind: :class:`ModeKind`
    :param quantum_numbers: :math:`(m, n)`; superscars take the longitudinal number first
    :param approximation: rational :math:`u/q` of :math:`\\sqrt{2}` for the triangle
    :param substituted: use the fully rational forms of the triangle
    :param poc: channel number of a triangle (6, 9) or parallelogram (3, 5, 8) superscar
    :param boundary: Dirichlet or Neumann component of rectangle and L-shape superscars
    :param direction: skeleton direction of rectangle and L-shape superscars
    :param variant: :code:`"u"` or :code:`"q"` substitution of triangle superscars
    :param channel: traced :class:`skeleton.PocDescriptor` of a folded state
    """

    spec: BilliardSpec
    kind: ModeKind
    quantum_numbers: Tuple[int, int]
    approximation: Optional[Fraction] = None
    substituted: bool = False
    poc: Optional[int] = None
    boundary: Boundary = Boundary.DIRICHLET
    direction: Optional[Vec2] = None
    variant: str = "u"
    channel: Optional[PocDescriptor] = field(default=None, compare=False, repr=False)
    normalization: str = field(default=NORMALIZATION, init=False, compare=False)

    def __post_init__(self):
        kind = ModeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        m, n = self.quantum_numbers
        object.__setattr__(self, "quantum_numbers", (int(m), int(n)))
        if isinstance(self.approximation, CfApprox):
            object.__setattr__(self, "approximation", self.approximation.last)
        elif self.approximation is not None:
            object.__setattr__(self, "approximation", as_ratio(self.approximation))
        if self.direction is not None:
            object.__setattr__(self, "direction", as_direction(self.direction))
        if self.variant not in ("u", "q"):
            raise KindError(f"unknown variant '{self.variant}'")
        family = self.spec.family
        if family not in _KINDS:
            raise KindError(f"no closed-form modes for the {family.value} family")

        if kind is ModeKind.BS_FOLDED:
            if self.channel is None:
                raise KindError("a folded superscar needs a traced channel")
        elif kind is ModeKind.SUPERSCAR:
            self._check_superscar()
        elif kind not in _KINDS[family]:
            raise KindError(f"{kind.value} is not a mode of the {family.value}")
        if self.boundary is Boundary.NEUMANN and kind is not ModeKind.SUPERSCAR:
            raise UnsupportedBoundaryError(
                "closed forms with Neumann conditions exist for superscar components only"
            )
        needs_approx = family is Family.TRIANGLE and (
            kind in (ModeKind.SWF_U, ModeKind.SWF_Q) or self.substituted
        )
        if needs_approx and self.approximation is None:
            raise NeedsApproximationError(
                "triangle modes need a rational approximation u/q of sqrt(2)"
            )

    def _check_superscar(self):
        family = self.spec.family
        if family in _POCS:
            if self.poc not in _POCS[family]:
                raise KindError(
                    f"the {family.value} has superscars in channels {_POCS[family]}"
                )
            if self.boundary is Boundary.NEUMANN:
                raise UnsupportedBoundaryError(
                    f"{family.value} superscars are Dirichlet states"
                )
            return
        if family is Family.RECTANGLE and self.direction is None:
            raise KindError("a rectangle superscar needs its skeleton direction")
        if family is Family.LSHAPE:
            s = self.spec.sizes
            D = Vec2(s["a"], s["d"])
            if self.direction is not None and self.direction.cross(D):
                raise UnsupportedError(
                    "L-shape superscars are built along the diagonal (a, d)"
                )

    @property
    def swf_variant(self):
        """Substitution variant, fixed by the kind for triangle wave functions."""
        if self.kind is ModeKind.SWF_U:
            return "u"
        if self.kind is ModeKind.SWF_Q:
            return "q"
        return self.variant

    @property
    def is_complex(self):
        return self.kind is ModeKind.SWF_COMPLEX

    @cached_property
    def lattice(self):
        return period_lattice(self.spec, self.approximation, self.swf_variant)

    @cached_property
    def scar_cells(self):
        """:class:`ScarCells` of a triangle superscar."""
        return scar_cells(self.spec, self.poc)

    @property
    def scale(self):
        """Divisor :math:`C_1` of the period lattice, :math:`u` or :math:`q` for the triangle."""
        return self.lattice.C1

    def describe(self):
        """Flat dict of the mode for file attributes."""
        m, n = self.quantum_numbers
        info = {
            "family": self.spec.family.value,
            "kind": self.kind.value,
            "m": m,
            "n": n,
            "boundary": self.boundary.value,
            "normalization": self.normalization,
        }
        if self.approximation is not None:
            info["approximation"] = str(self.approximation)
            info["variant"] = self.swf_variant
            info["substituted"] = int(self.substituted)
        if self.poc is not None:
            info["poc"] = self.poc
        if self.direction is not None:
            info["direction"] = f"{self.direction.x},{self.direction.y}"
        if self.channel is not None:
            info["channel"] = self.channel.index
        for key, value in self.spec.sizes.items():
            info[key] = str(value)
        return info


class _Numpy:
    pi = np.pi
    sin = staticmethod(np.sin)
    cos = staticmethod(np.cos)
    sqrt = staticmethod(np.sqrt)

    @staticmethod
    def expi(arg):
        return np.exp(1j * arg)

    @staticmethod
    def const(value):
        return float(as_surd(value)) if not isinstance(value, float) else value


class _Mpmath:
    """Element-wise mpmath functions over object arrays; use inside :code:`mpmath.workdps`."""

    sin = staticmethod(np.frompyfunc(mpmath.sin, 1, 1))
    cos = staticmethod(np.frompyfunc(mpmath.cos, 1, 1))
    sqrt = staticmethod(np.frompyfunc(mpmath.sqrt, 1, 1))
    expi = staticmethod(np.frompyfunc(mpmath.expj, 1, 1))

    def __init__(self, dps):
        self.dps = dps
        self.pi = +mpmath.pi

    def const(self, value):
        return as_surd(value).to_mpf(self.dps)


NUMPY = _Numpy()


def triangle_terms(m, n, s, k, x, y, be=NUMPY):
    """
    The two halves :math:`G_1, G_2` of the triangle wave function,

    .. math::

        G_1 = \\sin(\\pi s m x)\\sin(\\pi s n y) - \\sin(\\pi k m (x+y))\\sin(\\pi k n (x-y))

        G_2 = \\sin(\\pi k m (x-y))\\sin(\\pi k n (x+y)) - \\sin(\\pi s n x)\\sin(\\pi s m y)

    :param s: scale of the axis terms
    :param k: scale of the diagonal terms, :math:`s/\\sqrt{2}` or its rational substitute
    :return: tuple :math:`(G_1, G_2)`
    """
    pi = be.pi
    sm, sn = be.const(s * m), be.const(s * n)
    km, kn = be.const(k * m), be.const(k * n)
    g1 = be.sin(pi * sm * x) * be.sin(pi * sn * y) - be.sin(pi * km * (x + y)) * be.sin(
        pi * kn * (x - y)
    )
    g2 = be.sin(pi * km * (x - y)) * be.sin(pi * kn * (x + y)) - be.sin(pi * sn * x) * be.sin(
        pi * sm * y
    )
    return g1, g2


def superscar_constants(poc, approximation=None, variant="u"):
    """
    Coefficients of the triangle superscars.

    Channel 6 has
    :math:`\\sin(\\pi c_1 m(x-y))\\sin(\\pi c_2 n(x+y)) - \\sin(\\pi c_3 n x)\\sin(\\pi m y)`,
    channel 9 has
    :math:`\\sin(\\pi c_1 m(x-1))\\sin(\\pi c_2 n y) - \\sin(\\pi c_3 n(x-y))\\sin(\\pi m(x+y-c_4))`.

    :param int poc: 6 or 9
    :param approximation: rational :math:`u/q`, the exact irrational coefficients if omitted
    :return: tuple of exact coefficients
    """
    if approximation is None:
        if poc == 6:
            return (SQRT2 / 2, 1 / (2 + SQRT2), SQRT2 - 1)
        return (SQRT2, (2 - SQRT2) / 2, (SQRT2 - 1) / 2, SQRT2)
    approximation = as_ratio(approximation)
    u, q = approximation.numerator, approximation.denominator
    if poc == 6:
        if variant == "u":
            return (Fraction(q, u), Fraction(q, 2 * q + u), Fraction(u - q, q))
        return (Fraction(u, 2 * q), Fraction(u, 2 * (q + u)), Fraction(2 * q - u, u))
    if variant == "u":
        return (
            Fraction(u, q),
            Fraction(u, 2 * (q + u)),
            Fraction(2 * q - u, 2 * u),
            Fraction(u, q),
        )
    return (
        Fraction(2 * q, u),
        Fraction(q, 2 * q + u),
        Fraction(u - q, 2 * q),
        Fraction(2 * q, u),
    )


def poc6_state(constants, m, n, x, y, be=NUMPY):
    c1, c2, c3 = constants
    pi = be.pi
    a, b, c = be.const(c1 * m), be.const(c2 * n), be.const(c3 * n)
    return be.sin(pi * a * (x - y)) * be.sin(pi * b * (x + y)) - be.sin(pi * c * x) * be.sin(
        pi * be.const(m) * y
    )


def poc9_state(constants, m, n, x, y, be=NUMPY):
    c1, c2, c3, c4 = constants
    pi = be.pi
    a, b, c = be.const(c1 * m), be.const(c2 * n), be.const(c3 * n)
    mm, shift = be.const(m), be.const(c4 * m)
    return be.sin(pi * a * (x - 1)) * be.sin(pi * b * y) - be.sin(pi * c * (x - y)) * be.sin(
        pi * (mm * (x + y) - shift)
    )


# lines a x + b y = c folded from the bounding diagonals of the triangle channels
_SCAR_LINES = {
    6: ((1, 0, 1), (1, 1, SQRT2), (1, -1, SQRT2)),
    9: (
        (1, 0, 1),
        (1, 0, 1 + SQRT2 / 2),
        (1, 1, SQRT2),
        (1, 1, SQRT2 + 1),
        (1, -1, SQRT2),
    ),
}
# a point of the shaded cell where the closed form holds as written
_SCAR_REFERENCE = {6: (1.6, 0.45), 9: (1.45, 0.35)}


@dataclass(frozen=True, eq=False)
class ScarCells:
    """
    Cells of a triangle channel cut by its folded bounding diagonals.

    :param reference: point of the shaded cell
    :param segments: array of shape (K, 2, 2), the folded diagonals clipped to the billiard
    """

    poc: int
    reference: np.ndarray
    segments: np.ndarray

    def fold(self, points):
        """
        Maps points into the shaded cell.

        The segment from :attr:`reference` to each point is cut by the folded diagonals;
        the point is reflected across the crossed ones, the crossing nearest the point
        first.

        :param points: array of shape (N, 2)
        :return: tuple (mapped points, sign :math:`(-1)^k` for k crossings)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        a = self.segments[:, 0]
        e = self.segments[:, 1] - a
        d = points - self.reference
        w = a - self.reference
        den = np.outer(d[:, 0], e[:, 1]) - np.outer(d[:, 1], e[:, 0])
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / den
            s = (np.outer(d[:, 1], w[:, 0]) - np.outer(d[:, 0], w[:, 1])) / den
        crossed = (np.abs(den) > 1e-14) & (t > 0) & (t < 1) & (s >= 0) & (s <= 1)
        order = np.argsort(np.where(crossed, -t, np.inf), axis=1)
        unit = e / np.linalg.norm(e, axis=1)[:, None]
        mapped = points.copy()
        rows = np.arange(len(points))
        for k in range(len(self.segments)):
            j = order[:, k]
            hit = crossed[rows, j]
            rel = mapped - a[j]
            along = np.sum(rel * unit[j], axis=1)
            mirrored = a[j] + 2 * along[:, None] * unit[j] - rel
            mapped[hit] = mirrored[hit]
        sign = np.where(crossed.sum(axis=1) % 2, -1.0, 1.0)
        return mapped, sign


def _clip(spec, a, b, c):
    pts = spec.float_vertices()
    normal, c = np.array([a, b], dtype=float), float(as_surd(c))
    hits = []
    for k in range(len(pts)):
        p, q = pts[k], pts[(k + 1) % len(pts)]
        fp, fq = normal @ p - c, normal @ q - c
        if fp * fq <= 0 and fp != fq:
            hits.append(p + fp / (fp - fq) * (q - p))
    if len(hits) < 2:
        return None
    along = np.array([-b, a], dtype=float)
    proj = [h @ along for h in hits]
    lo, hi = hits[int(np.argmin(proj))], hits[int(np.argmax(proj))]
    if np.linalg.norm(hi - lo) < 1e-12:
        return None
    return np.stack([lo, hi])


def scar_cells(spec, poc):
    """
    :param spec: triangle :class:`geometry.BilliardSpec`
    :param int poc: channel 6 or 9
    :return: :class:`ScarCells`
    """
    if spec.family is not Family.TRIANGLE:
        raise KindError("scar cells are drawn on the triangle")
    if poc not in _SCAR_LINES:
        raise KindError(f"the triangle has superscars in channels {tuple(_SCAR_LINES)}")
    segments = [_clip(spec, *line) for line in _SCAR_LINES[poc]]
    segments = np.array([s for s in segments if s is not None])
    logger.debug(f"channel {poc}: {len(segments)} folded diagonals")
    return ScarCells(poc, np.array(_SCAR_REFERENCE[poc]), segments)


def parallelogram_terms(m, n, q, x, y, be=NUMPY, cosine=False):
    """
    The three products :math:`T_1, T_2, T_3` whose sum is a parallelogram wave function.

    With :math:`s = (m+n)q` and :math:`d = m-n`,
    :math:`T_1 = -\\sin(\\pi s(x+\\sqrt{3}y)/3)\\sin(\\pi q d(x - y/\\sqrt{3}))`,
    :math:`T_2 = \\sin(\\pi s(x-\\sqrt{3}y)/3)\\sin(\\pi q d(x + y/\\sqrt{3}))`,
    :math:`T_3 = \\sin(2\\pi s x/3)\\sin(2\\pi q d y/\\sqrt{3})`.  With :code:`cosine` the first
    factors become cosines and the signs :math:`(+, -, +)`.
    """
    pi = be.pi
    s3 = be.const(Fraction((m + n) * q, 3))
    qd = be.const((m - n) * q)
    root3, inv3 = be.const(SQRT3), be.const(SQRT3 / 3)
    a1, a2, a3 = pi * s3 * (x + root3 * y), pi * s3 * (x - root3 * y), 2 * pi * s3 * x
    b1 = be.sin(pi * qd * (x - inv3 * y))
    b2 = be.sin(pi * qd * (x + inv3 * y))
    b3 = be.sin(2 * pi * qd * inv3 * y)
    if cosine:
        return be.cos(a1) * b1, -be.cos(a2) * b2, be.cos(a3) * b3
    return -be.sin(a1) * b1, be.sin(a2) * b2, be.sin(a3) * b3


def _parallelogram_complex(m, n, q, x, y, be):
    pi = be.pi
    s3 = be.const(Fraction((m + n) * q, 3))
    qd = be.const((m - n) * q)
    root3, inv3 = be.const(SQRT3), be.const(SQRT3 / 3)
    return (
        be.expi(-pi * s3 * (x + root3 * y)) * be.sin(pi * qd * (x - inv3 * y))
        - be.expi(-pi * s3 * (x - root3 * y)) * be.sin(pi * qd * (x + inv3 * y))
        + be.expi(2 * pi * s3 * x) * be.sin(2 * pi * qd * inv3 * y)
    )


def parallelogram_superscar(poc, m, n, L, x, y, be=NUMPY):
    """
    Superscars of the parallelogram channels 3, 5 and 8 with longitudinal :math:`m'` and
    transverse :math:`n'`.
    """
    pi = be.pi
    L = as_surd(L)
    mm, nn = be.const(m), be.const(n)
    root3, inv3 = be.const(SQRT3), be.const(SQRT3 / 3)
    if poc == 3:
        return be.sin(pi * nn * (x + root3 * y - be.const(L))) * be.sin(
            pi * be.const(m / (L + 2)) * (x - inv3 * y + 1)
        )
    if poc == 5:
        return be.sin(pi * nn * (x - root3 * y)) * be.sin(
            pi * be.const(m / (L + 1)) * (x + inv3 * y)
        )
    half = Fraction(1, 2)
    return be.sin(pi * be.const(n / (L - half)) * (x - be.const(half))) * be.sin(
        2 * pi * mm * inv3 * y
    )


def _frame(mode, be):
    # (P, K, e_y', e_x', e_y'', e_x'') of a rectangle or L-shape superscar
    m, n = mode.quantum_numbers
    s = mode.spec.sizes
    if mode.spec.family is Family.RECTANGLE:
        winding = winding_numbers(mode.spec, mode.direction)
        if winding is None:
            raise DomainError(f"{mode.direction} is not a periodic rectangle direction")
        q, r = (abs(w) for w in winding)
        a, b = s["a"], s["b"]
        along, across = (q * a, r * b), (r * b, -q * a)
        N2 = q * q * a * a + r * r * b * b
        N = be.sqrt(be.const(N2))
        P = be.pi * be.const(m) / N
        K = be.pi * be.const(n / (a * b)) * N
    else:
        alpha, delta, zeta = lshape_ratios(mode.spec)
        a, c, d = s["a"], s["c"], s["d"]
        along, across = (a, d), (d, -a)
        N = be.sqrt(be.const(a * a + d * d))
        P = be.pi * be.const(m) / N
        K = (
            be.pi
            * be.const(n * alpha / (a * c))
            * be.sqrt(be.const(delta * delta * c * c + zeta * zeta * a * a))
        )
    unit = [tuple(be.const(v) / N for v in e) for e in (along, across)]
    (ax, ay), (cx, cy) = unit
    # images under x -> -x, the second transverse axis reversed
    return P, K, (ax, ay), (cx, cy), (-ax, ay), (cx, -cy)


def rectangle_components(mode, x, y, be=NUMPY):
    """
    Dirichlet and Neumann components of a rectangle or L-shape superscar.

    :math:`\\Psi^D = \\sin(Py')\\sin(Kx') + \\sin(Py'')\\sin(Kx'')` and
    :math:`\\Psi^N = \\cos(Py')\\cos(Kx') - \\cos(Py'')\\cos(Kx'')` where the primed
    coordinates run along and across the skeleton and the doubly primed ones along and
    across its mirror image.

    :return: tuple :math:`(\\Psi^D, \\Psi^N)`
    """
    P, K, ey1, ex1, ey2, ex2 = _frame(mode, be)
    y1, x1 = ey1[0] * x + ey1[1] * y, ex1[0] * x + ex1[1] * y
    y2, x2 = ey2[0] * x + ey2[1] * y, ex2[0] * x + ex2[1] * y
    dirichlet = be.sin(P * y1) * be.sin(K * x1) + be.sin(P * y2) * be.sin(K * x2)
    neumann = be.cos(P * y1) * be.cos(K * x1) - be.cos(P * y2) * be.cos(K * x2)
    return dirichlet, neumann


def _exact(mode, x, y, be):
    m, n = mode.quantum_numbers
    s = mode.spec.sizes
    if mode.spec.family is Family.RECTANGLE:
        kx, ky = be.const(m / s["a"]), be.const(n / s["b"])
    else:
        alpha, _, zeta = lshape_ratios(mode.spec)
        kx, ky = be.const(m * alpha / s["a"]), be.const(n * zeta / s["c"])
    return be.sin(be.pi * kx * x) * be.sin(be.pi * ky * y)


def _triangle_scales(mode):
    s = mode.scale
    if not mode.substituted:
        return s, s * SQRT2 / 2
    u, q = mode.approximation.numerator, mode.approximation.denominator
    return s, (q if mode.swf_variant == "u" else Fraction(u, 2))


def _folded(mode, x, y):
    m, n = mode.quantum_numbers
    poc = mode.channel
    points = np.column_stack([x, y])
    values = np.zeros(len(points))
    for cell in poc.folded_cells:
        xi, eta, inside = cell.local(points)
        values[inside] += cell.sign * (
            np.sin(2 * np.pi * m * xi[inside] / poc.length)
            * np.sin(np.pi * n * eta[inside] / poc.width)
        )
    return values


def _evaluate(mode, x, y, be=NUMPY):
    kind, family = mode.kind, mode.spec.family
    m, n = mode.quantum_numbers
    if kind in (ModeKind.SWF_U, ModeKind.SWF_Q):
        s, k = _triangle_scales(mode)
        g1, g2 = triangle_terms(m, n, s, k, x, y, be)
        return g1 + g2
    if kind in (ModeKind.SWF_BRANCH1, ModeKind.SWF_BRANCH2):
        t1, t2, t3 = parallelogram_terms(
            m, n, mode.scale, x, y, be, cosine=kind is ModeKind.SWF_BRANCH2
        )
        return t1 + t2 + t3
    if kind is ModeKind.SWF_COMPLEX:
        return _parallelogram_complex(m, n, mode.scale, x, y, be)
    if kind is ModeKind.EXACT:
        return _exact(mode, x, y, be)
    if kind is ModeKind.BS_FOLDED:
        if be is not NUMPY:
            raise UnsupportedError("folded states are evaluated in float64 only")
        return _folded(mode, x, y)
    if family is Family.TRIANGLE:
        constants = superscar_constants(
            mode.poc, mode.approximation if mode.substituted else None, mode.variant
        )
        if be is not NUMPY:
            raise UnsupportedError("triangle superscars are evaluated in float64 only")
        state = poc6_state if mode.poc == 6 else poc9_state
        mapped, sign = mode.scar_cells.fold(np.column_stack([x, y]))
        return sign * state(constants, m, n, mapped[:, 0], mapped[:, 1], be)
    if family is Family.PARALLELOGRAM:
        return parallelogram_superscar(mode.poc, m, n, mode.spec.sizes["L"], x, y, be)
    dirichlet, neumann = rectangle_components(mode, x, y, be)
    return dirichlet if mode.boundary is Boundary.DIRICHLET else neumann


def _points(mode, points, outside):
    scalar = np.ndim(points) == 1
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != 2:
        raise DomainError("points must have two coordinates")
    if outside == "ignore":
        inside = np.ones(len(points), dtype=bool)
    else:
        inside = mode.spec.contains(points, tol=1e-9)
        if outside == "raise" and not inside.all():
            bad = points[~inside][0]
            raise DomainError(f"point ({bad[0]:.6g}, {bad[1]:.6g}) lies outside the billiard")
        if outside not in ("raise", "nan"):
            raise DomainError(f"unknown outside policy '{outside}'")
    return points, inside, scalar


def _dispatch(mode, points, outside):
    points, inside, scalar = _points(mode, points, outside)
    dtype = complex if mode.is_complex else float
    values = np.full(len(points), np.nan, dtype=dtype)
    if inside.any():
        values[inside] = _evaluate(mode, points[inside, 0], points[inside, 1])
    return values[0] if scalar else values


def eval_swf(mode, points, outside="raise"):
    """
    Evaluates a semiclassical wave function.

    Triangle modes use the true :math:`1/\\sqrt{2}` factors unless the mode is
    :code:`substituted`, in which case every :math:`\\sqrt{2}` is replaced by its rational
    approximation.

    :param mode: :class:`WaveMode` of an SWF or exact kind
    :param points: a point :math:`(x, y)` or an array of shape (N, 2)
    :param string outside: :code:`"raise"`, :code:`"nan"` or :code:`"ignore"` for points
        outside the billiard
    :return: value or array of values, complex for :code:`SWF_COMPLEX`
    """
    if mode.kind not in SWF_KINDS:
        raise KindError(f"{mode.kind.value} is not a wave function kind")
    return _dispatch(mode, points, outside)


def eval_superscar(mode, points, outside="raise"):
    """
    Evaluates a superscar state.

    :code:`SUPERSCAR` modes are the closed forms of the shaded channel.  On the triangle
    the closed form holds on the shaded cell only; elsewhere a point is reflected back into
    it across the folded diagonals it is separated by, with a sign change per crossing, see
    :class:`ScarCells`.  The result jumps across those diagonals.
    :code:`BS_FOLDED` states are summed over the folded cells of their channel, each cell
    carrying :math:`\\pm\\sin(2\\pi m \\xi/\\Lambda)\\sin(\\pi n \\eta/w)` in its channel coordinates.
    """
    if mode.kind not in (ModeKind.SUPERSCAR, ModeKind.BS_FOLDED):
        raise KindError(f"{mode.kind.value} is not a superscar kind")
    return _dispatch(mode, points, outside)


def evaluate(mode, points, outside="raise"):
    """Evaluates any mode, see :func:`eval_swf` and :func:`eval_superscar`."""
    return _dispatch(mode, points, outside)


def wavenumber(mode):
    """:return: :math:`|p| = \\sqrt{2E}` of the mode"""
    m, n = mode.quantum_numbers
    kind, family = mode.kind, mode.spec.family
    if kind is ModeKind.BS_FOLDED:
        poc = mode.channel
        return math.hypot(2 * np.pi * m / poc.length, np.pi * n / poc.width)
    if kind is not ModeKind.SUPERSCAR:
        return np.pi * float(math.sqrt(float(lattice_momentum(mode.lattice, m, n).norm2())))
    if family is Family.TRIANGLE:
        c = superscar_constants(
            mode.poc, mode.approximation if mode.substituted else None, mode.variant
        )
        c1, c2 = float(c[0]), float(c[1])
        if mode.poc == 6:
            return np.pi * math.sqrt(2 * (c1 * m) ** 2 + 2 * (c2 * n) ** 2)
        return np.pi * math.hypot(c1 * m, c2 * n)
    if family is Family.PARALLELOGRAM:
        L = float(mode.spec.sizes["L"])
        if mode.poc == 3:
            return 2 * np.pi * math.sqrt(n * n + m * m / (3 * (L + 2) ** 2))
        if mode.poc == 5:
            return 2 * np.pi * math.sqrt(n * n + m * m / (3 * (L + 1) ** 2))
        return 2 * np.pi * math.sqrt(m * m / 3 + n * n / (2 * L - 1) ** 2)
    P, K = _frame(mode, NUMPY)[:2]
    return math.hypot(P, K)


def assemble_swf(spec, momentum, points, boundary=Boundary.DIRICHLET):
    """
    Sums signed plane waves over the images of the elementary polygon pattern,
    :math:`\\Psi(r) = \\sum_g \\eta_g e^{i (g p)\\cdot r}`.

    :param spec: :class:`geometry.BilliardSpec`
    :param momentum: float momentum :math:`p`
    :param points: array of shape (N, 2)
    :return: complex array
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    momentum = np.asarray(momentum, dtype=float)
    values = np.zeros(len(points), dtype=complex)
    for image in build_epp(spec, boundary):
        k = image.linear.to_float() @ momentum
        values += image.eta * np.exp(1j * (points @ k))
    return values


def compare_closed_form(mode, points):
    """
    Fits the closed form of a mode to the plane-wave assembly with the same momentum.

    :param mode: :class:`WaveMode` of an SWF or exact kind, triangle modes unsubstituted
    :param points: array of shape (N, 2)
    :return: tuple (complex scale, maximum residual after scaling)
    """
    if mode.kind not in SWF_KINDS:
        raise KindError("only wave functions have a plane-wave assembly")
    if mode.substituted:
        raise KindError("substituted triangle forms are not plane-wave sums")
    m, n = mode.quantum_numbers
    momentum = np.pi * lattice_momentum(mode.lattice, m, n).to_float()
    A = assemble_swf(mode.spec, momentum, points)
    B = np.asarray(evaluate(mode, points, outside="ignore"), dtype=complex)
    scale = np.vdot(A, B) / np.vdot(A, A)
    return complex(scale), float(np.max(np.abs(B - scale * A)))


@dataclass
class WaveField:
    """
    Samples of a mode on a regular grid over the bounding box.

    :param x: grid abscissae
    :param y: grid ordinates
    :param values: array of shape (len(y), len(x)), NaN outside the billiard
    :param mask: inside mask of the same shape
    :param mode: the sampled :class:`WaveMode`
    :param part: :code:`"real"` or :code:`"imag"` when taken from a complex field
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    mask: np.ndarray
    mode: WaveMode
    part: Optional[str] = None

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    @property
    def step(self):
        return max(self.x[1] - self.x[0], self.y[1] - self.y[0])

    def branch(self, part="imag"):
        """Real or imaginary part of a complex field."""
        if part not in ("real", "imag"):
            raise DomainError(f"unknown part '{part}'")
        values = self.values.real if part == "real" else self.values.imag
        return WaveField(self.x, self.y, np.array(values), self.mask, self.mode, part)

    def max_abs(self):
        if not self.mask.any():
            return 0.0
        return float(np.nanmax(np.abs(self.values[self.mask])))


def sample_field(mode, grid=512, workers=None):
    """
    Samples a mode on a :code:`grid` x :code:`grid` lattice, rows in parallel.

    :return: :class:`WaveField`
    """
    if grid < 2:
        raise DomainError("the grid needs at least two points per axis")
    (x0, y0), (x1, y1) = mode.spec.bounding_box()
    x = np.linspace(x0, x1, grid)
    y = np.linspace(y0, y1, grid)
    step = max(x[1] - x[0], y[1] - y[0])
    per_wavelength = 2 * np.pi / (wavenumber(mode) * step)
    if per_wavelength < MIN_SAMPLES_PER_WAVELENGTH:
        warnings.warn(
            f"{per_wavelength:.2g} samples per wavelength; use a grid of at least "
            f"{int(np.ceil(grid * MIN_SAMPLES_PER_WAVELENGTH / per_wavelength))}"
        )
    logger.info(f"sampling {mode.kind.value} {mode.quantum_numbers} on {grid}x{grid}")

    def row(yj):
        points = np.column_stack([x, np.full(grid, yj)])
        inside = mode.spec.contains(points)
        values = np.full(grid, np.nan, dtype=complex if mode.is_complex else float)
        if inside.any():
            values[inside] = _evaluate(mode, points[inside, 0], points[inside, 1])
        return values, inside

    rows = parallel_map(row, y, workers)
    values = np.array([r[0] for r in rows])
    mask = np.array([r[1] for r in rows])
    return WaveField(x, y, values, mask, mode)


@dataclass(frozen=True)
class ResidualReport:
    """
    Largest deviation of a checked quantity from zero.

    :param side: boundary side or name of the check
    :param max_abs: largest absolute value found
    :param bound: the accepted bound
    :param passed: :code:`max_abs < bound`
    """

    side: str
    max_abs: float
    bound: float
    passed: bool

    @classmethod
    def of(cls, side, max_abs, bound):
        max_abs, bound = float(max_abs), float(bound)
        return cls(side, max_abs, bound, max_abs < bound)

    def as_dict(self):
        return {
            "check": self.side,
            "max_abs": self.max_abs,
            "bound": self.bound,
            "pass": self.passed,
        }


def constructed_zero_sides(mode):
    """
    Indices of the sides on which a wave function vanishes identically.

    :return: tuple of side indices
    """
    family = mode.spec.family
    if family is Family.TRIANGLE:
        return (0,) if mode.substituted else (0, 2)
    if family is Family.PARALLELOGRAM:
        if mode.spec.sizes["L"].is_rational:
            return (0, 1, 2, 3)
        return (0, 2, 3)
    return tuple(range(len(mode.spec.vertices)))


def triangle_residual_bound(mode):
    """
    Bound :math:`2\\pi\\epsilon s(m+n)/(1-\\epsilon/\\sqrt{2})` on the wave function along
    the side :math:`x = 1+\\sqrt{2}`, with :math:`\\epsilon = 1/s^2`.
    """
    m, n = mode.quantum_numbers
    s = mode.scale
    eps = 1 / s ** 2
    return 2 * np.pi * eps * s * (abs(m) + abs(n)) / (1 - eps / np.sqrt(2))


def _mp_side(mode, k, samples):
    start, end = mode.spec.sides()[k]
    with mpmath.workdps(RESIDUAL_DIGITS):
        be = _Mpmath(RESIDUAL_DIGITS)
        x0, y0 = (as_surd(c).to_mpf(RESIDUAL_DIGITS) for c in start)
        x1, y1 = (as_surd(c).to_mpf(RESIDUAL_DIGITS) for c in end)
        t = np.array([mpmath.mpf(i) / (samples - 1) for i in range(samples)], dtype=object)
        values = _evaluate(mode, x0 + t * (x1 - x0), y0 + t * (y1 - y0), be)
        return float(max(abs(v) for v in values))


def _float_side(mode, p0, p1, samples):
    def f(t):
        point = p0 + np.outer(np.atleast_1d(t), p1 - p0)
        return np.abs(_evaluate(mode, point[:, 0], point[:, 1]))

    t = np.linspace(0, 1, samples)
    values = f(t)
    i = int(np.argmax(values))
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, samples - 1)]
    best = float(values[i])
    if hi > lo:
        res = minimize_scalar(lambda s: -f(s)[0], bounds=(lo, hi), method="bounded")
        best = max(best, -float(res.fun))
    return best


def boundary_residual(mode, side, samples=10000):
    """
    Largest :math:`|\\Psi|` along a side of the billiard.

    Sides where the closed form vanishes identically are sampled with mpmath and checked
    against :data:`ZERO_TOLERANCE`; the side :math:`x = 1+\\sqrt{2}` of the triangle, where the
    rational approximation leaves a residual, is sampled in float64, refined around the
    largest sample and checked against :func:`triangle_residual_bound`.

    :param mode: Dirichlet :class:`WaveMode` of an SWF or exact kind
    :param side: side name or index
    :param int samples: uniformly spaced samples, end points included
    :return: :class:`ResidualReport`
    """
    if mode.kind not in SWF_KINDS:
        raise UnsupportedError(f"no boundary residual for {mode.kind.value} states")
    if mode.boundary is not Boundary.DIRICHLET:
        raise UnsupportedError("residuals are defined for Dirichlet modes only")
    if samples < 2:
        raise DomainError("at least two samples are needed")
    k, p0, p1 = mode.spec.side(side)
    name = mode.spec.side_names()[k]
    if k in constructed_zero_sides(mode):
        report = ResidualReport.of(name, _mp_side(mode, k, samples), ZERO_TOLERANCE)
    elif mode.spec.family is Family.TRIANGLE:
        report = ResidualReport.of(
            name, _float_side(mode, p0, p1, samples), triangle_residual_bound(mode)
        )
    else:
        raise UnsupportedError(
            f"no residual bound for side {name} of the {mode.spec.family.value}"
        )
    logger.info(f"residual on {name}: {report.max_abs:.3g} (bound {report.bound:.3g})")
    return report


def _up_to_sign(a, b):
    return min(np.max(np.abs(a - b)), np.max(np.abs(a + b)))


def _grid_points(spec, grid):
    (x0, y0), (x1, y1) = spec.bounding_box()
    X, Y = np.meshgrid(np.linspace(x0, x1, grid), np.linspace(y0, y1, grid))
    points = np.column_stack([X.ravel(), Y.ravel()])
    return points[spec.contains(points)]


def _product_identity(spec, m, n, direction, grid):
    d = as_direction(direction)
    report = check_compatibility(spec, d)
    if not report.satisfied:
        raise CompatibilityError(report.constraint, report)
    k, l = report.k_l
    if spec.family is Family.RECTANGLE:
        q, r = (abs(w) for w in winding_numbers(spec, d))
    else:
        alpha, delta, _ = lshape_ratios(spec)
        q, r = alpha, delta
    step = k * q + l * r
    if m % step:
        raise RemappingError(f"m = {m} is not a multiple of {step}")
    mm, nn, _ = remap_quantum_numbers(spec.family, m // step, k, l, q, r, n)
    points = _grid_points(spec, grid)
    exact = WaveMode(spec, ModeKind.EXACT, (mm, nn))
    scar = WaveMode(spec, ModeKind.SUPERSCAR, (m, n), direction=d)
    dirichlet, neumann = rectangle_components(scar, points[:, 0], points[:, 1])
    product = _exact(exact, points[:, 0], points[:, 1], NUMPY)
    residual = np.max(np.abs(product - (dirichlet - neumann) / 2))
    check = f"{spec.family.value}-decomposition({mm},{nn})"
    return [ResidualReport.of(check, residual, IDENTITY_TOLERANCE)]


def _triangle_identities(spec, m, n, approximation, variant, points):
    approximation = as_ratio(approximation)
    u, q = approximation.numerator, approximation.denominator
    x, y = points[:, 0], points[:, 1]
    s = u if variant == "u" else q
    g1, g2 = triangle_terms(m, n, s, s * SQRT2 / 2, x, y)
    reports = []
    true6, true9 = superscar_constants(6), superscar_constants(9)
    exact = [
        ("poc6", poc6_state(true6, s * m, (1 + SQRT2) * s * n, x, y), g2),
        ("poc6-exchanged", poc6_state(true6, s * n, (1 + SQRT2) * s * m, x, y), g1),
        ("poc9", poc9_state(true9, s * m * SQRT2 / 2, (2 + SQRT2) * s * n, x, y), g1),
        ("poc9-exchanged", poc9_state(true9, s * n * SQRT2 / 2, (2 + SQRT2) * s * m, x, y), g2),
    ]
    for name, state, target in exact:
        reports.append(ResidualReport.of(name, _up_to_sign(state, target), IDENTITY_TOLERANCE))
    c6 = superscar_constants(6, approximation, variant)
    c9 = superscar_constants(9, approximation, variant)
    if variant == "u":
        six = (u, 2 * q + u)
        nine = (Fraction(q), 2 * (q + u))
    else:
        six = (q, q + u)
        nine = (Fraction(u, 2), 2 * q + u)
    rational = [
        ("poc6-rational", poc6_state(c6, six[0] * m, six[1] * n, x, y), g2),
        ("poc6-rational-exchanged", poc6_state(c6, six[0] * n, six[1] * m, x, y), g1),
        ("poc9-rational", poc9_state(c9, nine[0] * m, nine[1] * n, x, y), g1),
        ("poc9-rational-exchanged", poc9_state(c9, nine[0] * n, nine[1] * m, x, y), g2),
    ]
    bound = (
        2 * np.pi * (abs(m) + abs(n)) * (1 + np.sqrt(2)) * abs(u * u - 2 * q * q) / min(u, q)
    )
    for name, state, target in rational:
        reports.append(ResidualReport.of(name, _up_to_sign(state, target), bound))
    return reports


def _parallelogram_identities(spec, m, n, points):
    L = spec.sizes["L"]
    if not L.is_rational:
        raise NeedsApproximationError("the channel identities need a rational side L = u/q")
    if (m + n) % 3:
        raise RemappingError(f"m + n = {m + n} is not a multiple of 3")
    u, q = L.a.numerator, L.a.denominator
    m2, n2 = (m + n) // 3, m - n
    x, y = points[:, 0], points[:, 1]
    terms = parallelogram_terms(m, n, q, x, y)
    states = [
        ("poc3", parallelogram_superscar(3, (u + 2 * q) * n2, m2 * q, L, x, y)),
        ("poc5", parallelogram_superscar(5, (u + q) * n2, m2 * q, L, x, y)),
        ("poc8", parallelogram_superscar(8, n2 * q, m2 * (2 * u - q), L, x, y)),
    ]
    return [
        ResidualReport.of(name, _up_to_sign(state, term), IDENTITY_TOLERANCE)
        for (name, state), term in zip(states, terms)
    ]


def verify_decomposition(
    spec, m, n, direction=None, approximation=None, variant="u", grid=200, points=100, seed=0
):
    """
    Checks the identities between superscar states and semiclassical wave functions.

    - rectangle and L-shape: the product wave function of the remapped quantum numbers
      equals :math:`(\\Psi^D - \\Psi^N)/2` of the periodic skeleton on a grid;
    - triangle: the channel 6 and 9 superscars with the substituted quantum numbers
      reproduce the halves :math:`G_1, G_2` of the wave function, exactly for the
      irrational coefficients and within
      :math:`2\\pi(m+n)(1+\\sqrt{2})|u^2-2q^2|/\\min(u,q)` for the rational ones;
    - parallelogram: with :math:`m + n = 3m''`, :math:`m - n = n''` the channel 3, 5 and 8
      superscars reproduce the three products :math:`T_1, T_2, T_3`.

    Triangle and parallelogram identities are compared up to a global sign at random
    interior points.

    :param spec: :class:`geometry.BilliardSpec`
    :param m: longitudinal (rectangle, L-shape) or first quantum number
    :param n: transverse or second quantum number
    :param direction: skeleton direction, :math:`(1, 1)` for the rectangle and
        :math:`(a, d)` for the L-shape by default
    :param approximation: rational :math:`u/q` for the triangle
    :return: list of :class:`ResidualReport`
    """
    m, n = int(m), int(n)
    family = spec.family
    if family is Family.RECTANGLE:
        reports = _product_identity(spec, m, n, direction or (1, 1), grid)
    elif family is Family.LSHAPE:
        s = spec.sizes
        reports = _product_identity(spec, m, n, direction or Vec2(s["a"], s["d"]), grid)
    elif family is Family.TRIANGLE:
        if approximation is None:
            raise NeedsApproximationError("triangle identities need a rational u/q")
        if isinstance(approximation, CfApprox):
            approximation = approximation.last
        sample = random_interior(spec, points, seed)
        reports = _triangle_identities(spec, m, n, approximation, variant, sample)
    elif family is Family.PARALLELOGRAM:
        reports = _parallelogram_identities(spec, m, n, random_interior(spec, points, seed))
    else:
        raise UnsupportedError(f"no identities for the {family.value} family")
    for report in reports:
        logger.debug(f"{report.side}: {report.max_abs:.3g} < {report.bound:.3g}")
    return reports


def line_jump(mode, point, normal, eps=1e-12, step=1e-5):
    """
    One-sided limits of a mode across a line.

    Values are taken at :math:`r \\pm \\epsilon \\hat{n}`, normal derivatives with the
    second-order one-sided stencil :math:`(-3f_0 + 4f_1 - f_2)/(2h)` on each side.

    :param point: point on the line
    :param normal: normal of the line
    :return: tuple (value jump, normal-derivative jump)
    """
    point = np.asarray(point, dtype=float)
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    offsets = eps + step * np.arange(3)
    plus = point + offsets[:, None] * normal
    minus = point - offsets[:, None] * normal
    fp = np.real(evaluate(mode, plus, outside="ignore"))
    fm = np.real(evaluate(mode, minus, outside="ignore"))
    dp = (-3 * fp[0] + 4 * fp[1] - fp[2]) / (2 * step)
    dm = -(-3 * fm[0] + 4 * fm[1] - fm[2]) / (2 * step)
    return float(abs(fp[0] - fm[0])), float(abs(dp - dm))


def nodal_lines(field, threshold=None):
    """
    Points where a real field crosses zero.

    Every pair of horizontally or vertically adjacent inside samples with opposite signs is
    refined to a root of the mode on the segment joining them; the root is kept when the
    mode is below :code:`threshold` there.

    :param field: real :class:`WaveField`
    :param threshold: defaults to :math:`10^{-3}` times the largest :math:`|\\Psi|`
    :return: array of shape (K, 2)
    """
    if field.is_complex:
        raise DomainError("nodal lines need a real field, take field.branch() first")
    if threshold is None:
        threshold = 1e-3 * field.max_abs()
    part = {None: np.real, "real": np.real, "imag": np.imag}[field.part]

    def f(p0, p1, t):
        p = p0 + t * (p1 - p0)
        return float(part(_evaluate(field.mode, np.array([p[0]]), np.array([p[1]])))[0])

    values = np.where(field.mask, field.values, 0.0)
    found = []
    for axis in (0, 1):
        if axis == 1:
            a, b = values[:, :-1], values[:, 1:]
            ok = field.mask[:, :-1] & field.mask[:, 1:]
        else:
            a, b = values[:-1, :], values[1:, :]
            ok = field.mask[:-1, :] & field.mask[1:, :]
        for j, i in zip(*np.nonzero(ok & (a * b < 0))):
            p0 = np.array([field.x[i], field.y[j]])
            if axis == 1:
                p1 = np.array([field.x[i + 1], field.y[j]])
            else:
                p1 = np.array([field.x[i], field.y[j + 1]])
            try:
                t = brentq(lambda t: f(p0, p1, t), 0.0, 1.0)
            except ValueError:
                continue
            if abs(f(p0, p1, t)) < threshold:
                found.append(p0 + t * (p1 - p0))
    logger.debug(f"{len(found)} nodal points")
    return np.array(found).reshape(-1, 2)
