"""
Exact arithmetic used throughout polyscar.

Rationals are plain :code:`fractions.Fraction`.  Billiard coordinates live in a
real quadratic field :math:`\\mathbb{Q}(\\sqrt{s})` and are represented by
:class:`QuadraticSurd`, so that vertex hits of trajectories and cancellations of
period relations can be decided without rounding.  Irrational constants are
approximated by continued fraction convergents computed with :code:`mpmath` at
:data:`PRECISION` significant digits.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce, total_ordering
from typing import Tuple

import mpmath
import numpy as np
import sympy

from polyscar.errors import ConfigurationError, DomainError, ResourceError

logger = logging.getLogger(__name__)

PRECISION = 50
MAX_DENOMINATOR = 10 ** 18

_TARGETS = {
    "sqrt2": "sqrt(2)",
    "sqrt3": "sqrt(3)",
    "1/sqrt2": "1/sqrt(2)",
    "invsqrt2": "1/sqrt(2)",
}


def as_ratio(value):
    """
    Converts integers, fractions, decimal or :code:`p/q` strings to a normalised :code:`Fraction`.

    Floats are read through their shortest decimal representation.

    :param value: number to convert
    :return: :code:`Fraction` with positive denominator
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not ratios")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"cannot convert {value} to a ratio")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ConfigurationError(f"'{value}' is not a rational number")
    if isinstance(value, QuadraticSurd) and value.is_rational:
        return value.a
    raise TypeError(f"cannot convert {type(value).__name__} to a ratio")


@lru_cache(maxsize=None)
def _squarefree(n):
    # n = f**2 * s with s square-free
    f, s = 1, 1
    for prime, power in sympy.factorint(n).items():
        f *= prime ** (power // 2)
        if power % 2:
            s *= prime
    return f, s


@total_ordering
class QuadraticSurd:
    """
    Exact real number :math:`a + b\\sqrt{s}` with rational :math:`a, b` and square-free :math:`s`.

    Numbers with :math:`b = 0` are rational and combine with any field.
    Combining two irrational numbers of different fields raises :class:`errors.DomainError`.

    :param a: rational part
    :param b: coefficient of the root
    :param int s: radicand, need not be square-free
    """

    __slots__ = ("_a", "_b", "_s")

    def __init__(self, a=0, b=0, s=1):
        a = as_ratio(a)
        b = as_ratio(b)
        s = int(s)
        if s < 1:
            raise DomainError("radicand must be a positive integer")
        f, s = _squarefree(s)
        b = b * f
        if s == 1:
            a, b = a + b, Fraction(0)
        self._set(a, b, s)

    def _set(self, a, b, s):
        if b == 0:
            s = 1
        self._a, self._b, self._s = a, b, s

    @classmethod
    def _raw(cls, a, b, s):
        new = object.__new__(cls)
        new._set(a, b, s)
        return new

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @property
    def s(self):
        return self._s

    @property
    def is_rational(self):
        return self._b == 0

    @staticmethod
    def _coerce(other):
        if isinstance(other, QuadraticSurd):
            return other
        if isinstance(other, Fraction):
            return QuadraticSurd._raw(other, Fraction(0), 1)
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return QuadraticSurd._raw(Fraction(int(other)), Fraction(0), 1)
        return None

    def _field(self, other):
        if self._s == 1:
            return other._s
        if other._s == 1 or other._s == self._s:
            return self._s
        raise DomainError(
            f"cannot combine numbers of Q(sqrt {self._s}) and Q(sqrt {other._s})"
        )

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        s = self._field(other)
        return QuadraticSurd._raw(self._a + other._a, self._b + other._b, s)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd._raw(-self._a, -self._b, self._s)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        s = self._field(other)
        a = self._a * other._a + self._b * other._b * s
        b = self._a * other._b + self._b * other._a
        return QuadraticSurd._raw(a, b, s)

    __rmul__ = __mul__

    def conjugate(self):
        """:return: :math:`a - b\\sqrt{s}`"""
        return QuadraticSurd._raw(self._a, -self._b, self._s)

    def norm(self):
        """:return: the rational field norm :math:`a^2 - b^2 s`"""
        return self._a * self._a - self._b * self._b * self._s

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        if other.is_rational:
            return QuadraticSurd._raw(self._a / other._a, self._b / other._a, self._s)
        num = self * other.conjugate()
        return QuadraticSurd._raw(num._a / n, num._b / n, num._s)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return 1 / (self ** -exponent)
        result = QuadraticSurd._raw(Fraction(1), Fraction(0), 1)
        for _ in range(exponent):
            result = result * self
        return result

    def sign(self):
        """
        Exact sign of the number.

        :return: -1, 0 or 1
        """
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 s
        d = self._a * self._a - self._b * self._b * self._s
        return sa if d > 0 else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self._a, self._b, self._s) == (other._a, other._b, other._s)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._s))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def to_mpf(self, dps=PRECISION):
        """:return: :code:`mpmath.mpf` value computed with :code:`dps` digits"""
        with mpmath.workdps(dps):
            value = mpmath.mpf(self._a.numerator) / self._a.denominator
            if self._b:
                value += (
                    mpmath.mpf(self._b.numerator)
                    / self._b.denominator
                    * mpmath.sqrt(self._s)
                )
            return +value

    def __float__(self):
        if self._b == 0:
            return float(self._a)
        return float(self.to_mpf(30))

    def __str__(self):
        if self._b == 0:
            return str(self._a)
        coeff = abs(self._b)
        root = f"√{self._s}" if coeff == 1 else f"{coeff}√{self._s}"
        if coeff.denominator != 1 and coeff.numerator == 1:
            root = f"√{self._s}/{coeff.denominator}"
        if self._a == 0:
            return f"-{root}" if self._b < 0 else root
        return f"{self._a}{'-' if self._b < 0 else '+'}{root}"

    def __repr__(self):
        return f"QuadraticSurd({str(self._a)!r}, {str(self._b)!r}, {self._s})"


def as_surd(value):
    """
    Converts numbers and expressions to :class:`QuadraticSurd`.

    Strings are parsed by :func:`parse_surd`.
    """
    if isinstance(value, QuadraticSurd):
        return value
    if isinstance(value, str):
        return parse_surd(value)
    return QuadraticSurd(as_ratio(value))


def _radicals(text):
    return re.sub(r"√\(?(\d+)\)?", r"sqrt(\1)", text)


def parse_surd(text):
    """
    Parses a size or coordinate such as :code:`"3/2"`, :code:`"0.25"` or :code:`"1+sqrt(2)"`.

    Decimals are read exactly.  Anything sympy cannot reduce to :math:`a + b\\sqrt{s}`
    is a configuration error.

    :param string text: expression
    :return: :class:`QuadraticSurd`
    """
    text = str(text).strip()
    try:
        return QuadraticSurd(Fraction(text))
    except ValueError:
        pass
    try:
        expr = sympy.sympify(_radicals(text), rational=True)
    except (sympy.SympifyError, TypeError, SyntaxError):
        raise ConfigurationError(f"cannot parse number '{text}'")
    expr = sympy.radsimp(sympy.expand(expr))
    a, b, s = Fraction(0), Fraction(0), 1
    for term, coeff in expr.as_coefficients_dict().items():
        if not coeff.is_Rational:
            raise ConfigurationError(f"'{text}' is not of the form a + b*sqrt(s)")
        coeff = Fraction(int(coeff.p), int(coeff.q))
        if term == 1:
            a += coeff
        elif term.is_Pow and term.exp == sympy.Rational(1, 2) and term.base.is_Integer:
            radicand = int(term.base)
            if s not in (1, radicand):
                raise ConfigurationError(f"'{text}' mixes square roots")
            s = radicand
            b += coeff
        else:
            raise ConfigurationError(f"'{text}' is not of the form a + b*sqrt(s)")
    return QuadraticSurd(a, b, s)


def exact_sqrt(value):
    """
    Exact square root of a non-negative rational, which always lies in some :math:`\\mathbb{Q}(\\sqrt{s})`.

    :param value: rational or rational :class:`QuadraticSurd`
    :return: :class:`QuadraticSurd`, or :code:`None` for irrational input
    """
    if isinstance(value, QuadraticSurd):
        if not value.is_rational:
            return None
        value = value.a
    value = as_ratio(value)
    if value < 0:
        raise DomainError("square root of a negative number")
    p, q = value.numerator, value.denominator
    f, s = _squarefree(p * q)
    return QuadraticSurd(0, Fraction(f, q), s)


class Vec2:
    """
    Exact plane vector with :class:`QuadraticSurd` components.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = as_surd(x)
        self.y = as_surd(y)

    @classmethod
    def _raw(cls, x, y):
        new = object.__new__(cls)
        new.x = x
        new.y = y
        return new

    def __add__(self, other):
        return Vec2._raw(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec2._raw(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec2._raw(-self.x, -self.y)

    def __mul__(self, scalar):
        scalar = as_surd(scalar)
        return Vec2._raw(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = as_surd(scalar)
        return Vec2._raw(self.x / scalar, self.y / scalar)

    def dot(self, other):
        return self.x * other.x + self.y * other.y

    def cross(self, other):
        """:return: :math:`x_1 y_2 - y_1 x_2`"""
        return self.x * other.y - self.y * other.x

    def norm2(self):
        return self.dot(self)

    def is_zero(self):
        return not self.x and not self.y

    def to_float(self):
        return np.array([float(self.x), float(self.y)])

    def __iter__(self):
        yield self.x
        yield self.y

    def __eq__(self, other):
        if not isinstance(other, Vec2):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"Vec2({self.x}, {self.y})"


class Mat2:
    """
    Exact 2x2 matrix :math:`\\begin{pmatrix} a & b \\\\ c & d \\end{pmatrix}`.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (as_surd(v) for v in (a, b, c, d))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def reflection(cls, direction):
        """
        Linear part of the mirror reflection across a line with the given direction.

        :param direction: :class:`Vec2` along the mirror
        """
        ex, ey = direction.x, direction.y
        n = direction.norm2()
        return cls(
            (ex * ex - ey * ey) / n, 2 * ex * ey / n, 2 * ex * ey / n, (ey * ey - ex * ex) / n
        )

    def __matmul__(self, other):
        if isinstance(other, Vec2):
            return Vec2._raw(
                self.a * other.x + self.b * other.y, self.c * other.x + self.d * other.y
            )
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        return NotImplemented

    def det(self):
        return self.a * self.d - self.b * self.c

    def transpose(self):
        return Mat2(self.a, self.c, self.b, self.d)

    def to_float(self):
        return np.array(
            [[float(self.a), float(self.b)], [float(self.c), float(self.d)]]
        )

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Mat2({self.a}, {self.b}, {self.c}, {self.d})"


def target_value(target, dps=PRECISION):
    """
    Evaluates a continued fraction target to :code:`dps` digits.

    :param target: tag (:code:`sqrt2`, :code:`sqrt3`, :code:`1/sqrt2`), decimal literal,
        sympy expression string, :class:`QuadraticSurd` or mpmath number
    :return: tuple (tag, mpf value)
    """
    if isinstance(target, QuadraticSurd):
        return str(target), target.to_mpf(dps)
    if isinstance(target, mpmath.mpf):
        return mpmath.nstr(target, 20), target
    if isinstance(target, float):
        with mpmath.workdps(dps):
            return repr(target), mpmath.mpf(target)
    text = str(target).strip()
    expression = _TARGETS.get(text.lower(), text)
    try:
        expr = sympy.sympify(_radicals(expression))
        with mpmath.workdps(dps):
            value = mpmath.mpf(sympy.N(expr, dps + 10))
    except (sympy.SympifyError, TypeError, SyntaxError, ValueError):
        raise ConfigurationError(f"unsupported continued fraction target '{target}'")
    if not expr.is_real or not mpmath.isfinite(value):
        raise ConfigurationError(f"continued fraction target '{target}' is not real")
    return text, value


@dataclass(frozen=True)
class CfApprox:
    """
    Continued fraction convergents of an irrational target.

    :param target: symbolic tag of the target
    :param value: target evaluated with :data:`PRECISION` digits
    :param convergents: successive convergents, denominators strictly increasing
    :param epsilons: absolute errors :math:`|x - u/q|` of the convergents
    """

    target: str
    value: mpmath.mpf
    convergents: Tuple[Fraction, ...]
    epsilons: Tuple[mpmath.mpf, ...]

    @property
    def last(self):
        return self.convergents[-1]

    def upper_bounds(self):
        """:return: :math:`1/(2q^2)` for each convergent"""
        with mpmath.workdps(PRECISION):
            return [mpmath.mpf(1) / (2 * c.denominator ** 2) for c in self.convergents]

    def lower_bounds(self):
        """:return: :math:`1/(3\\sqrt{2}q^2)` for each convergent"""
        with mpmath.workdps(PRECISION):
            return [
                1 / (3 * mpmath.sqrt(2) * c.denominator ** 2) for c in self.convergents
            ]

    def bounds_hold(self):
        """
        Checks the error bounds of every convergent.

        For :math:`\\sqrt{2}` both :math:`1/(3\\sqrt{2}q^2) < \\epsilon < 1/(2q^2)` are tested,
        for other targets only the classical :math:`\\epsilon < 1/q^2`.

        :return: list of booleans
        """
        with mpmath.workdps(PRECISION):
            is_sqrt2 = mpmath.almosteq(self.value, mpmath.sqrt(2), 1e-40)
            if is_sqrt2:
                return [
                    lo < eps < hi
                    for lo, hi, eps in zip(
                        self.lower_bounds(), self.upper_bounds(), self.epsilons
                    )
                ]
            return [
                eps < mpmath.mpf(1) / c.denominator ** 2
                for c, eps in zip(self.convergents, self.epsilons)
            ]


def _cf_convergents(value):
    # successive convergents of an mpf value, stops on exhaustion of precision
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    x = value
    with mpmath.workdps(PRECISION):
        while True:
            a = int(mpmath.floor(x))
            h_prev, h = h, a * h + h_prev
            k_prev, k = k, a * k + k_prev
            yield Fraction(h, k)
            frac = x - a
            if frac == 0 or mpmath.mpf(k) ** 2 > mpmath.mpf(10) ** (PRECISION - 8):
                return
            x = 1 / frac


def convergents(target, count):
    """
    First :code:`count` continued fraction convergents of an irrational target.

    :param target: see :func:`target_value`
    :param int count: number of convergents
    :return: :class:`CfApprox`
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    tag, value = target_value(target)
    approx = []
    for c in _cf_convergents(value):
        approx.append(c)
        if len(approx) == count:
            break
    else:
        if mpmath.mpf(approx[-1].denominator) ** 2 > mpmath.mpf(10) ** (PRECISION - 8):
            raise ResourceError(
                f"only {len(approx)} convergents of {tag} are reliable at {PRECISION} digits",
                best=_error(value, approx[-1]),
            )
        logger.warning(f"{tag} is rational, its continued fraction has {len(approx)} terms")
    epsilons = tuple(_error(value, c) for c in approx)
    logger.debug(f"convergents of {tag}: {approx[-1]} after {len(approx)} terms")
    return CfApprox(tag, value, tuple(approx), epsilons)


def _error(value, ratio):
    with mpmath.workdps(PRECISION):
        return abs(value - mpmath.mpf(ratio.numerator) / ratio.denominator)


def approximate_value(value, tolerance, max_denominator=MAX_DENOMINATOR):
    """
    Smallest-denominator convergent of :code:`value` within :code:`tolerance`.

    Rational input (integers, fractions, rational strings) is returned unchanged.

    :param value: number or expression, see :func:`target_value`
    :param float tolerance: required absolute accuracy
    :param int max_denominator: largest denominator allowed
    :return: :code:`Fraction`
    """
    if tolerance <= 0:
        raise DomainError("tolerance must be positive")
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, QuadraticSurd) and value.is_rational:
        return value.a
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            pass
    tag, x = target_value(value)
    best = None
    for c in _cf_convergents(x):
        if c.denominator > max_denominator:
            break
        err = _error(x, c)
        best = (c, err)
        if err < tolerance:
            return c
    achieved = float(best[1]) if best else None
    raise ResourceError(
        f"cannot approximate {tag} to {tolerance} within denominator {max_denominator}",
        best=achieved,
    )


def approximate_angle(angle, tolerance, max_denominator=MAX_DENOMINATOR):
    """
    Rational approximation :math:`p/q` of an angle given as a multiple of :math:`\\pi`.

    Exact rationals come back unchanged.  Floats are treated as real values to approximate.

    :param angle: angle divided by :math:`\\pi`, in :math:`(0, 1)`
    :param float tolerance: required accuracy of :math:`p/q`
    :return: :code:`Fraction`
    """
    if tolerance <= 0:
        raise DomainError("tolerance must be positive")
    exact = None
    if isinstance(angle, (int, Fraction)) or _is_rational_text(angle):
        exact = as_ratio(angle)
    elif isinstance(angle, QuadraticSurd) and angle.is_rational:
        exact = angle.a
    if exact is not None:
        if not 0 < exact < 1:
            raise DomainError(f"angle {exact}π is not in (0, π)")
        return exact
    tag, x = target_value(angle)
    if not 0 < x < 1:
        raise DomainError(f"angle {tag}π is not in (0, π)")
    best = None
    for c in _cf_convergents(x):
        if c.denominator > max_denominator:
            break
        if not 0 < c < 1:
            continue
        err = _error(x, c)
        best = err
        if err < tolerance:
            return c
    raise ResourceError(
        f"cannot approximate {tag}π to {tolerance}; best achieved {mpmath.nstr(best, 5) if best is not None else 'none'}",
        best=float(best) if best is not None else None,
    )


def _is_rational_text(value):
    if not isinstance(value, str):
        return False
    try:
        Fraction(value.strip())
        return True
    except ValueError:
        return False


@dataclass(frozen=True)
class ReductionCertificate:
    """
    Euclidean certificate that a fraction of the generator :math:`D_1` is a period.

    :param numerator: :math:`P`, numerator of the relation coefficient
    :param divisor: :math:`Q`, the divisor :math:`q_{1j}`
    :param remainders: remainder chain :math:`b_1 > b_2 > \\dots`
    :param bezout: integers :math:`(x, y)` with :math:`xP + yQ = \\gcd(P, Q)`
    :param certified: :math:`\\gcd(P, Q)/Q`, so that certified times :math:`D_1` is a lattice vector
    """

    numerator: int
    divisor: int
    remainders: Tuple[int, ...]
    bezout: Tuple[int, int]
    certified: Fraction

    def verify(self):
        """:return: :code:`True` if the Bezout witness reproduces the certified fraction"""
        x, y = self.bezout
        return Fraction(x * self.numerator, self.divisor) + y == self.certified


def _extended_gcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def reduce_period(coefficient, divisor):
    """
    Certifies that :math:`D_1/q_{1j}` belongs to the period lattice.

    A relation gives the period :math:`(P/Q) D_1` with :math:`Q = q_{1j}`.  Together with
    :math:`D_1` itself, repeated Euclidean division of :math:`P` by :math:`Q` produces
    periods :math:`(b_i/Q) D_1` with decreasing remainders until :math:`b = 1`.
    When :math:`P < Q` the division starts with the roles swapped.

    :param coefficient: the relation coefficient :math:`P/Q`
    :param int divisor: :math:`Q`
    :return: :class:`ReductionCertificate`
    """
    divisor = int(divisor)
    if divisor == 0:
        raise DomainError("divisor must be nonzero")
    if divisor < 0:
        raise DomainError("divisor must be positive")
    numerator = as_ratio(coefficient) * divisor
    if numerator.denominator != 1:
        raise DomainError(f"{coefficient} is not of the form P/{divisor}")
    P = int(numerator)
    g, x, y = _extended_gcd(abs(P), divisor)
    if P < 0:
        x = -x
    if divisor == 1:
        chain = ()
    elif P % divisor == 0:
        chain = (0,)
    else:
        chain = []
        a, b = abs(P), divisor
        while b:
            a, b = b, a % b
            if b:
                chain.append(b)
        chain = tuple(chain)
    if g != 1:
        logger.debug(f"{P} and {divisor} share the factor {g}")
    return ReductionCertificate(P, divisor, chain, (x, y), Fraction(g, divisor))


def lcm_list(values):
    """
    Least common multiple of a list of positive integers.

    :param values: nonempty list
    """
    values = list(values)
    if not values:
        raise DomainError("lcm of an empty list")
    if any(int(v) != v or v < 1 for v in values):
        raise DomainError("lcm needs positive integers")
    return reduce(lambda a, b: a * b // math.gcd(a, b), (int(v) for v in values))


def integer_kernel(rows):
    """
    Basis of the integer vectors :math:`n` with :math:`\\sum_k n_k r_k = 0` for every row.

    :param rows: list of rows of rationals
    :return: list of primitive integer tuples
    """
    matrix = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(as_ratio, row)] for row in rows])
    basis = []
    for vec in matrix.nullspace():
        denom = reduce(lambda a, b: a * b // math.gcd(a, b), (int(v.q) for v in vec), 1)
        ints = [int(v * denom) for v in vec]
        g = reduce(math.gcd, (abs(v) for v in ints), 0) or 1
        basis.append(tuple(v // g for v in ints))
    return basis


def axis_divisors(coefficients):
    """
    Refinement divisors :math:`(C_1, C_2)` of a rank-2 lattice.

    The lattice is spanned by :math:`D_1, D_2` and the vectors :math:`c_1 D_1 + c_2 D_2` of
    :code:`coefficients`.  :math:`D_1/C_1` and :math:`D_2/C_2` are its shortest vectors along
    the two generators.

    :param coefficients: list of rational pairs :math:`(c_1, c_2)`
    :return: tuple of positive integers
    """
    pairs = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    pairs += [(as_ratio(c1), as_ratio(c2)) for c1, c2 in coefficients]
    scale = lcm_list([c.denominator for pair in pairs for c in pair])
    vectors = [(int(c1 * scale), int(c2 * scale)) for c1, c2 in pairs]
    # combination w with the gcd of the second components
    gy, wx = 0, 0
    for x, y in vectors:
        g, a, b = _extended_gcd(gy, abs(y))
        if y < 0:
            b = -b
        wx, gy = a * wx + b * x, g
    h11 = 0
    for x, y in vectors:
        h11 = math.gcd(h11, abs(x - (y // gy) * wx))
    C1 = scale // h11
    C2 = scale // (gy * (h11 // math.gcd(h11, abs(wx))))
    return C1, C2
