"""
Semiclassical momenta and energy levels on aperiodic and periodic skeletons.

Energies are in units :math:`\\hbar = M = 1`.  Every level carries its exact value
:math:`E/\\pi^2` when the billiard sizes are exact, so that ratios of levels can be
compared without rounding.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from polyscar.errors import (
    CompatibilityError,
    DomainError,
    KindError,
    PeriodicSkeletonRequiredError,
    RemappingError,
    UnsupportedError,
)
from polyscar.exact import QuadraticSurd, Vec2, exact_sqrt
from polyscar.geometry import Classification, Family, lattice_generators, period_lattice
from polyscar.skeleton import DirectionClass, Kind, as_direction, classify_direction
from polyscar.utils import parallel_map

logger = logging.getLogger(__name__)

VALIDITY_THRESHOLD = 0.1


@dataclass(frozen=True)
class SpectrumEntry:
    """
    One semiclassical level.

    :param family: billiard family
    :param skeleton: :class:`skeleton.Kind` of the skeleton quantized on
    :param quantum_numbers: :math:`(m, n)`
    :param momentum: momentum along the skeleton (all of it for aperiodic levels)
    :param e0: semiclassical correction :math:`E_0`, zero on aperiodic skeletons
    :param energy: :math:`E = p^2/2 + E_0`
    :param scaled: exact :math:`E/\\pi^2`, or :code:`None`
    :param direction: skeleton direction of periodic levels
    :param auxiliary: remapped quantum numbers
    :param validity: :math:`\\sqrt{2E_0}/p`, small when the level is reliable
    :param variant: :code:`"u"` or :code:`"q"` for substituted lattices
    :param branches: number of independent wave functions of the level
    """

    family: Family
    skeleton: Kind
    quantum_numbers: Tuple[int, int]
    momentum: np.ndarray = field(compare=False)
    e0: float
    energy: float
    scaled: Optional[QuadraticSurd] = None
    direction: Optional[Vec2] = None
    auxiliary: Dict[str, int] = field(default_factory=dict, compare=False)
    validity: float = 0.0
    variant: Optional[str] = None
    branches: int = 1

    def is_valid(self, threshold=VALIDITY_THRESHOLD):
        return self.validity <= threshold

    def as_row(self):
        """Flat dict for tabular output."""
        m, n = self.quantum_numbers
        return {
            "family": self.family.value,
            "skeleton": self.skeleton.value
            + ("" if self.direction is None else f"({self.direction.x};{self.direction.y})"),
            "m": m,
            "n": n,
            "auxiliary": ";".join(f"{k}={v}" for k, v in self.auxiliary.items()),
            "energy": self.energy,
            "validity": self.validity,
        }


@dataclass(frozen=True)
class CompatibilityReport:
    """
    Result of testing whether the billiard sizes allow quantization on a periodic skeleton.

    :param satisfied: whether the size condition holds exactly
    :param r_s: coprime :math:`(r, s)` with :math:`C_2 D_1 \\cos\\alpha / (C_1 D_2) = r/s`
    :param constraint: the condition in words
    :param k_l: coprime integers fixed by the condition (rectangle and L-shape)
    :param winding: winding numbers of the skeleton period
    """

    satisfied: bool
    r_s: Optional[Tuple[int, int]]
    constraint: str
    k_l: Optional[Tuple[int, int]] = None
    winding: Optional[Tuple[int, int]] = None


def _lattice(spec, lattice, variant):
    if lattice is None:
        return period_lattice(spec, variant=variant or "u")
    if (
        variant is not None
        and lattice.variant is not None
        and lattice.variant != variant
    ):
        return period_lattice(spec, lattice.approximation, variant)
    return lattice


def lattice_momentum(lattice, m, n):
    """
    Exact momentum divided by :math:`\\pi` with :math:`p\\cdot D_1 = 2\\pi C_1 m`,
    :math:`p \\cdot D_2 = 2\\pi C_2 n`.

    :return: :class:`exact.Vec2`
    """
    D1, D2 = lattice.generators
    C1, C2 = lattice.scale_divisors
    d11, d22, d12 = D1.norm2(), D2.norm2(), D1.dot(D2)
    det2 = D1.cross(D2) ** 2
    a = (d22 * (m * C1) - d12 * (n * C2)) * 2 / det2
    b = (d11 * (n * C2) - d12 * (m * C1)) * 2 / det2
    return D1 * a + D2 * b


def spectrum_aperiodic(spec, lattice, m, n, variant=None):
    """
    Level of the quantum numbers :math:`(m, n)` on the aperiodic skeleton.

    :param spec: :class:`geometry.BilliardSpec`
    :param lattice: :class:`geometry.PeriodLattice`
    :param int m: first quantum number
    :param int n: second quantum number
    :param variant: :code:`"u"` or :code:`"q"` for the triangle, defaults to the lattice's
    :return: :class:`SpectrumEntry`
    """
    m, n = int(m), int(n)
    if spec.family is Family.TRIANGLE and (m == 0 or n == 0):
        raise PeriodicSkeletonRequiredError(
            f"(m, n) = ({m}, {n}) lies on a periodic skeleton of the triangle"
        )
    if m == 0 and n == 0:
        raise DomainError("|m| + |n| must be positive")
    lattice = _lattice(spec, lattice, variant)
    P = lattice_momentum(lattice, m, n)
    scaled = P.norm2() / 2
    branches = 1
    if spec.family is Family.PARALLELOGRAM:
        branches = 1 if m + n == 0 else 2
    return SpectrumEntry(
        spec.family,
        Kind.APERIODIC,
        (m, n),
        np.pi * P.to_float(),
        0.0,
        np.pi ** 2 * float(scaled),
        scaled,
        variant=lattice.variant,
        branches=branches,
    )


def _ratio(value):
    value = QuadraticSurd(0) + value
    return value.a if value.is_rational else None


def winding_numbers(spec, d):
    """
    Winding numbers of a rectangle direction.

    :return: coprime :math:`(q, r)` with :code:`d` parallel to :math:`(qa, rb)`, or :code:`None`
    """
    a, b = spec.sizes["a"], spec.sizes["b"]
    if not d.y:
        return (1, 0)
    if not d.x:
        return (0, 1)
    ratio = _ratio(d.x * b / (d.y * a))
    if ratio is None:
        return None
    return (ratio.numerator, ratio.denominator)


def _lshape_axis(spec, d):
    s = spec.sizes
    if not d.y:
        return "x"
    if not d.x:
        return "y"
    if not d.cross(Vec2(s["a"], s["d"])):
        return "D"
    if not d.cross(Vec2(s["a"], -s["d"])):
        return "D'"
    return None


def lshape_ratios(spec):
    """
    :return: :math:`(\\alpha, \\delta, \\zeta)` with :math:`b/a = \\beta/\\alpha` and
        :math:`d/c = \\delta/\\zeta` in lowest terms
    """
    s = spec.sizes
    beta_alpha = _ratio(s["b"] / s["a"])
    delta_zeta = _ratio(s["d"] / s["c"])
    return beta_alpha.denominator, delta_zeta.numerator, delta_zeta.denominator


def _skeleton_period(generators, d):
    D1, D2 = generators
    for P in (D2, D1, D1 - D2, D1 + D2):
        if not d.cross(P):
            return P
    return None


def _r_s(generators, divisors, P):
    # C2 D1 cos(alpha) / (C1 D2) with D2 the skeleton period
    D1, D2 = generators
    second = D2 if not P.cross(D1) else D1
    C1, C2 = divisors
    ratio = _ratio(second.dot(P) * C2 / (P.norm2() * C1))
    return None if ratio is None else (ratio.numerator, ratio.denominator)


def check_compatibility(spec, direction, lattice=None):
    """
    Tests whether the billiard sizes allow quantization on the periodic skeleton along a direction.

    The triangle and the parallelogram impose no condition.  Bouncing-ball skeletons never do.
    A rectangle skeleton of winding :math:`(q, r)` needs :math:`b^2/a^2 = lq/(kr)`; the L-shape
    skeleton along :math:`D = (2a, 2d)` needs :math:`c^2/a^2 = (l/k)\\,\\zeta^2/(\\alpha\\delta)`.

    :param spec: :class:`geometry.BilliardSpec`
    :param direction: :class:`skeleton.DirectionClass` or exact direction
    :param lattice: :class:`geometry.PeriodLattice`, only its divisors are used
    :return: :class:`CompatibilityReport`
    """
    if isinstance(direction, DirectionClass):
        if direction.kind is not Kind.PERIODIC:
            raise KindError("compatibility is defined for periodic directions only")
        d = direction.direction
    else:
        d = as_direction(direction)
    family = spec.family
    generators = lattice_generators(spec)
    divisors = lattice.scale_divisors if lattice is not None else (1, 1)
    if family in (Family.TRIANGLE, Family.PARALLELOGRAM):
        P = _skeleton_period(generators, d)
        r_s = None if P is None else _r_s(generators, divisors, P)
        return CompatibilityReport(True, r_s, f"no condition on the {family.value} sizes")
    if family is Family.RECTANGLE:
        winding = winding_numbers(spec, d)
        if winding is None:
            return CompatibilityReport(False, None, f"{d} is not a periodic direction")
        q, r = abs(winding[0]), abs(winding[1])
        a, b = spec.sizes["a"], spec.sizes["b"]
        r_s = _r_s(generators, divisors, Vec2(2 * q * a, 2 * r * b))
        if r == 0 or q == 0:
            k_l = (1, 0) if r == 0 else (0, 1)
            return CompatibilityReport(True, r_s, "bouncing ball, no condition", k_l, winding)
        ratio = _ratio(b * b / (a * a))
        constraint = f"b^2/a^2 = l*{q}/(k*{r})"
        if ratio is None:
            return CompatibilityReport(
                False, None, constraint + f" fails: b^2/a^2 = {b * b / (a * a)} is irrational", None, winding
            )
        lk = ratio * Fraction(r, q)
        return CompatibilityReport(
            True,
            r_s,
            constraint + f" with (k, l) = ({lk.denominator}, {lk.numerator})",
            (lk.denominator, lk.numerator),
            winding,
        )
    if family is Family.LSHAPE:
        axis = _lshape_axis(spec, d)
        if axis in ("x", "y"):
            k_l = (1, 0) if axis == "x" else (0, 1)
            return CompatibilityReport(True, (0, 1), "bouncing ball, no condition", k_l)
        if axis is None:
            return CompatibilityReport(False, None, f"no periodic quantization rule along {d}")
        alpha, delta, zeta = lshape_ratios(spec)
        a, c = spec.sizes["a"], spec.sizes["c"]
        r_s = _r_s(generators, divisors, Vec2(2 * a, 2 * spec.sizes["d"]))
        ratio = _ratio(c * c / (a * a))
        constraint = f"c^2/a^2 = (l/k)*{zeta}^2/({alpha}*{delta})"
        if ratio is None:
            return CompatibilityReport(False, r_s, constraint + " fails: c^2/a^2 is irrational")
        lk = ratio * Fraction(alpha * delta, zeta * zeta)
        return CompatibilityReport(
            True,
            r_s,
            constraint + f" with (k, l) = ({lk.denominator}, {lk.numerator})",
            (lk.denominator, lk.numerator),
        )
    raise UnsupportedError(f"no periodic quantization for the {family.value} family")


def remap_quantum_numbers(family, c, k, l, q, r, n):
    """
    Maps periodic-skeleton quantum numbers to the aperiodic ones of the same level.

    Rectangle: :math:`m'' = ck + nr`, :math:`n'' = cl - nq`, :math:`m = c(kq + lr)`.  The
    L-shape uses the same algebra with :math:`(c, q, r, n) = (\\gamma, \\alpha, \\delta, n'')`.

    :return: tuple :math:`(m'', n'', m)`
    """
    family = Family(family) if isinstance(family, str) else family
    if family not in (Family.RECTANGLE, Family.LSHAPE):
        raise RemappingError(
            f"periodic and aperiodic quantum numbers of the {family.value} coincide"
        )
    if c < 1:
        raise RemappingError("c must be positive")
    if math.gcd(k, l) != 1:
        raise RemappingError(f"(k, l) = ({k}, {l}) are not coprime")
    return c * k + n * r, c * l - n * q, c * (k * q + l * r)


def _entry(spec, d, m, n, longitudinal, transverse, scaled, auxiliary, variant=None, branches=1):
    # longitudinal and transverse are momenta divided by pi
    unit = d.to_float() / math.sqrt(float(d.norm2()))
    p = np.pi * float(longitudinal)
    root = np.pi * abs(float(transverse))
    validity = root / abs(p) if p else math.inf
    return SpectrumEntry(
        spec.family,
        Kind.PERIODIC,
        (m, n),
        p * unit,
        root ** 2 / 2,
        np.pi ** 2 * float(scaled),
        scaled,
        d,
        auxiliary,
        validity,
        variant,
        branches,
    )


def _periodic(spec, lattice, d, m, n):
    family = spec.family
    if family is Family.TRIANGLE:
        if _skeleton_period(lattice.generators, d) is None:
            raise UnsupportedError(f"no periodic quantization rule for the triangle along {d}")
        C = lattice.C1
        scaled = QuadraticSurd(Fraction(C * C * (m * m + n * n), 2))
        return _entry(spec, d, m, n, C * m, C * n, scaled, {}, lattice.variant)
    if family is Family.PARALLELOGRAM:
        if d.x:
            raise UnsupportedError("the parallelogram is quantized on the vertical skeleton")
        q = lattice.C1
        longitudinal = 2 * (m - n) * q / exact_sqrt(3)
        scaled = QuadraticSurd(
            Fraction(2, 3) * (m - n) ** 2 * q * q + Fraction(2, 9) * (m + n) ** 2 * q * q
        )
        return _entry(
            spec, d, m, n, longitudinal, Fraction(2 * (m + n) * q, 3), scaled, {},
            branches=1 if m + n == 0 else 2,
        )
    report = check_compatibility(spec, d, lattice)
    if not report.satisfied:
        raise CompatibilityError(report.constraint, report)
    k, l = report.k_l
    if family is Family.RECTANGLE:
        q, r = (abs(w) for w in report.winding)
        step = k * q + l * r
        if m % step:
            raise RemappingError(f"m = {m} is not a multiple of k q + l r = {step}")
        c = m // step
        mm, nn, _ = remap_quantum_numbers(family, c, k, l, q, r, n) if c else (0, 0, 0)
        a, b = spec.sizes["a"], spec.sizes["b"]
        N2 = q * q * a * a + r * r * b * b
        scaled = QuadraticSurd(Fraction(m * m, 2)) / N2 + N2 * Fraction(n * n, 2) / (a * a * b * b)
        N = exact_sqrt(N2)
        longitudinal = m / N if N is not None else m / math.sqrt(float(N2))
        transverse = math.sqrt(float(N2)) * n / float(a * b)
        aux = {"c": c, "k": k, "l": l, "q": q, "r": r, "m''": mm, "n''": nn}
        return _entry(spec, d, m, n, longitudinal, transverse, scaled, aux)
    # L-shape: m is the longitudinal m'', n the transverse n''
    alpha, delta, zeta = lshape_ratios(spec)
    s = spec.sizes
    a, c, dd = s["a"], s["c"], s["d"]
    if _lshape_axis(spec, d) in ("x", "y"):
        entry = spectrum_aperiodic(spec, lattice, m, n)
        p = entry.momentum
        return SpectrumEntry(
            spec.family, Kind.PERIODIC, (m, n), p, 0.0, entry.energy, entry.scaled, d, {}
        )
    step = k * alpha + l * delta
    if m % step:
        raise RemappingError(f"m'' = {m} is not a multiple of k alpha + l delta = {step}")
    gamma = m // step
    mm, nn, _ = remap_quantum_numbers(family, gamma, k, l, alpha, delta, n) if gamma else (0, 0, 0)
    half = a * a + dd * dd
    trans2 = Fraction(n * n * alpha * alpha) * (zeta * zeta * a * a + delta * delta * c * c) / (a * a * c * c)
    scaled = QuadraticSurd(Fraction(m * m, 2)) / half + trans2 / 2
    longitudinal = m / math.sqrt(float(half))
    transverse = math.sqrt(float(trans2))
    aux = {"gamma": gamma, "k": k, "l": l, "m": mm, "n": nn}
    return _entry(spec, d, m, n, longitudinal, transverse, scaled, aux)


def _periodic_direction(lattice, direction):
    if isinstance(direction, DirectionClass):
        dc = direction
    else:
        dc = classify_direction(lattice, direction, trace=False)
    if dc.kind is not Kind.PERIODIC:
        raise KindError(f"{dc.direction} is aperiodic")
    return dc.direction


def spectrum_periodic(spec, lattice, direction, m, n, variant=None):
    """
    Level of the quantum numbers :math:`(m, n)` on the periodic skeleton along a direction.

    :math:`m \\geq 1` quantizes the momentum along the skeleton period and :math:`n` the
    transverse correction :math:`E_0`.

    :param spec: :class:`geometry.BilliardSpec`
    :param lattice: :class:`geometry.PeriodLattice`
    :param direction: :class:`skeleton.DirectionClass` or exact direction
    :param int m: longitudinal quantum number
    :param int n: transverse quantum number
    :return: :class:`SpectrumEntry`
    """
    m, n = int(m), int(n)
    if m < 1:
        raise DomainError("the longitudinal quantum number must be positive")
    lattice = _lattice(spec, lattice, variant)
    d = _periodic_direction(lattice, direction)
    entry = _periodic(spec, lattice, d, m, n)
    if not entry.is_valid():
        warnings.warn(
            f"level ({m}, {n}) has validity ratio {entry.validity:.3g} above {VALIDITY_THRESHOLD}"
        )
    return entry


def momentum_projections(entry, direction):
    """
    Components of a level's momentum across and along a skeleton direction.

    :param entry: aperiodic :class:`SpectrumEntry`
    :param direction: exact direction or :class:`skeleton.DirectionClass`
    :return: tuple :math:`(p_{x'}, p_{y'})`
    """
    d = direction.direction if isinstance(direction, DirectionClass) else as_direction(direction)
    unit = d.to_float() / math.sqrt(float(d.norm2()))
    across = np.array([unit[1], -unit[0]])
    return float(entry.momentum @ across), float(entry.momentum @ unit)


def _quantum_numbers(family, max_m):
    if family is Family.TRIANGLE:
        return [(m, n) for m in range(2, max_m + 1) for n in range(1, m)]
    if family is Family.PARALLELOGRAM:
        return [
            (m, n)
            for m in range(-max_m, max_m + 1)
            for n in range(-max_m, m)
            if m + n >= 0 and (m, n) != (0, 0)
        ]
    return [(m, n) for m in range(1, max_m + 1) for n in range(1, max_m + 1)]


def spectrum_table(spec, lattice, max_m, direction=None, variant=None, workers=None):
    """
    Levels with canonical quantum numbers up to :code:`max_m`, sorted by energy.

    Aperiodic ranges: triangle :math:`1 \\le n < m`, parallelogram :math:`m > n,\\ m + n \\ge 0`,
    rectangle and L-shape :math:`m, n \\ge 1`.  Periodic ranges: :math:`m \\ge 1`,
    :math:`0 \\le n \\le` :code:`max_m`, skipping :math:`m` the skeleton cannot carry.

    :param direction: skeleton direction, aperiodic levels when omitted
    :return: list of :class:`SpectrumEntry`
    """
    if max_m < 1:
        raise DomainError("max_m must be at least 1")
    lattice = _lattice(spec, lattice, variant)
    if direction is None:
        pairs = _quantum_numbers(spec.family, max_m)
        if not pairs:
            raise DomainError(f"no quantum numbers up to {max_m}")
        entries = parallel_map(lambda mn: spectrum_aperiodic(spec, lattice, *mn), pairs, workers)
    else:
        d = _periodic_direction(lattice, direction)
        report = None
        if spec.family in (Family.RECTANGLE, Family.LSHAPE):
            report = check_compatibility(spec, d, lattice)
            if not report.satisfied:
                raise CompatibilityError(report.constraint, report)

        def level(mn):
            try:
                return _periodic(spec, lattice, d, *mn)
            except RemappingError:
                return None

        pairs = [(m, n) for m in range(1, max_m + 1) for n in range(0, max_m + 1)]
        entries = [e for e in parallel_map(level, pairs, workers) if e is not None]
        if not entries:
            raise DomainError(f"no periodic levels with m up to {max_m}")
    entries.sort(key=lambda e: (e.energy, e.quantum_numbers))
    logger.info(f"{len(entries)} levels of the {spec.family.value}")
    return entries
