from fractions import Fraction
from itertools import product

import mpmath
import numpy as np
import pytest

from polyscar import exact
from polyscar.errors import ConfigurationError, DomainError, ResourceError
from polyscar.exact import Mat2, QuadraticSurd, Vec2


ROOT2 = QuadraticSurd(0, 1, 2)


def test_surd_arithmetic():
    one_plus = 1 + ROOT2
    assert one_plus * (1 - ROOT2) == -1
    assert 1 / one_plus == ROOT2 - 1
    assert ROOT2 * ROOT2 == 2
    assert (ROOT2 * ROOT2).is_rational
    assert QuadraticSurd(0, 1, 8) == 2 * ROOT2
    assert QuadraticSurd(0, 1, 4) == 2


@pytest.mark.parametrize(
    "value,sign",
    [
        (3 - 2 * QuadraticSurd(0, 1, 2), 1),
        (1 - QuadraticSurd(0, 1, 2), -1),
        (QuadraticSurd(Fraction(7, 5)) - QuadraticSurd(0, 1, 2), -1),
        (QuadraticSurd(0), 0),
    ],
)
def test_surd_sign(value, sign):
    assert value.sign() == sign


def test_surd_ordering_and_hash():
    assert QuadraticSurd(Fraction(3, 2)) > ROOT2 > QuadraticSurd(Fraction(7, 5))
    assert hash(QuadraticSurd(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert QuadraticSurd(Fraction(1, 2)) == Fraction(1, 2)
    assert len({QuadraticSurd(1), Fraction(1), 1}) == 1


def test_surd_fields_do_not_mix():
    with pytest.raises(DomainError):
        QuadraticSurd(0, 1, 2) + QuadraticSurd(0, 1, 3)


def test_surd_float():
    assert np.isclose(float(1 + ROOT2), 1 + np.sqrt(2))
    with mpmath.workdps(40):
        assert mpmath.almosteq(ROOT2.to_mpf(40), mpmath.sqrt(2), 1e-38)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("3/2", QuadraticSurd(Fraction(3, 2))),
        ("0.25", QuadraticSurd(Fraction(1, 4))),
        ("1+sqrt(2)", QuadraticSurd(1, 1, 2)),
        ("sqrt(8)", QuadraticSurd(0, 2, 2)),
        ("1/sqrt(2)", QuadraticSurd(0, Fraction(1, 2), 2)),
        ("(3+√3)/2", QuadraticSurd(Fraction(3, 2), Fraction(1, 2), 3)),
    ],
)
def test_parse_surd(text, expected):
    assert exact.parse_surd(text) == expected


@pytest.mark.parametrize("text", ["sqrt(2)+sqrt(3)", "pi", "2**(1/3)", "1+"])
def test_parse_surd_rejects(text):
    with pytest.raises(ConfigurationError):
        exact.parse_surd(text)


@pytest.mark.parametrize(
    "value,expected",
    [
        (Fraction(9, 4), QuadraticSurd(Fraction(3, 2))),
        (2, ROOT2),
        (Fraction(1, 2), QuadraticSurd(0, Fraction(1, 2), 2)),
    ],
)
def test_exact_sqrt(value, expected):
    root = exact.exact_sqrt(value)
    assert root == expected
    assert root * root == value


def test_exact_sqrt_domain():
    with pytest.raises(DomainError):
        exact.exact_sqrt(-1)
    assert exact.exact_sqrt(1 + ROOT2) is None


def test_sqrt2_convergents(sqrt2_cf):
    assert sqrt2_cf.last == Fraction(3363, 2378)
    assert sqrt2_cf.convergents[:4] == (
        Fraction(1),
        Fraction(3, 2),
        Fraction(7, 5),
        Fraction(17, 12),
    )
    assert sqrt2_cf.epsilons[-1] < mpmath.mpf(1) / 3363 ** 2
    assert all(sqrt2_cf.bounds_hold())


def test_first_convergent():
    cf = exact.convergents("sqrt2", 1)
    assert cf.last == 1
    assert cf.epsilons[0] < 0.5


@pytest.mark.parametrize("target", ["sqrt3", "1/sqrt2", "(1+sqrt(5))/2", "1.4142"])
def test_convergent_targets(target):
    cf = exact.convergents(target, 5)
    assert len(cf.convergents) <= 5
    denominators = [c.denominator for c in cf.convergents]
    assert denominators == sorted(denominators)


def test_convergent_errors():
    with pytest.raises(DomainError):
        exact.convergents("sqrt2", 0)
    with pytest.raises(ConfigurationError):
        exact.convergents("not_a_constant", 3)


@pytest.mark.parametrize(
    "angle,tolerance,expected",
    [
        ("1/2", 1e-3, Fraction(1, 2)),
        (Fraction(3, 8), 1e-3, Fraction(3, 8)),
        ("1/sqrt(2)", 1e-7, Fraction(2378, 3363)),
    ],
)
def test_approximate_angle(angle, tolerance, expected):
    assert exact.approximate_angle(angle, tolerance) == expected


def test_approximate_angle_domain():
    with pytest.raises(DomainError):
        exact.approximate_angle("1/2", 0)
    with pytest.raises(DomainError):
        exact.approximate_angle("3/2", 1e-3)


def test_approximate_value_resource():
    with pytest.raises(ResourceError) as info:
        exact.approximate_value("sqrt(2)", 1e-40, max_denominator=1000)
    assert info.value.best is not None and info.value.best > 1e-40


def test_approximate_value():
    value = exact.approximate_value("sqrt(3)", 1e-8)
    assert abs(float(value) - np.sqrt(3)) < 1e-8
    assert exact.approximate_value("7/3", 1e-8) == Fraction(7, 3)


def test_reduce_period_chain():
    cert = exact.reduce_period(Fraction(7, 5), 5)
    assert cert.remainders == (2, 1)
    assert cert.certified == Fraction(1, 5)
    assert cert.verify()
    reachable = {Fraction(7, 5) * a + b for a, b in product(range(-10, 11), repeat=2)}
    assert Fraction(1, 5) in reachable


def _smallest_period(P, Q):
    # search a P + b Q over a window wide enough to meet every residue of Q
    reachable = {a * P + b * Q for a in range(Q) for b in range(-P, 1)}
    return Fraction(min(r for r in reachable if r > 0), Q)


def test_reduce_period_random_relations():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        Q = int(rng.integers(2, 51))
        P = int(rng.integers(1, 3 * Q + 1))
        cert = exact.reduce_period(Fraction(P, Q), Q)
        assert cert.verify()
        assert cert.certified == _smallest_period(P, Q)
        assert list(cert.remainders) == sorted(set(cert.remainders), reverse=True)
        if P % Q:
            assert cert.remainders[-1] == cert.certified * Q


@pytest.mark.parametrize(
    "coefficient,divisor,chain,certified",
    [(3, 1, (), Fraction(1)), (2, 5, (0,), Fraction(1)), (Fraction(3, 7), 7, (3, 1), Fraction(1, 7))],
)
def test_reduce_period_trivial(coefficient, divisor, chain, certified):
    cert = exact.reduce_period(coefficient, divisor)
    assert cert.remainders == chain
    assert cert.certified == certified
    assert cert.verify()


def test_reduce_period_errors():
    with pytest.raises(DomainError):
        exact.reduce_period(1, 0)
    with pytest.raises(DomainError):
        exact.reduce_period(Fraction(1, 3), 2)


@pytest.mark.parametrize("values,expected", [([8, 8, 2], 8), ([2, 2, 2, 2], 2), ([1], 1), ([4, 6], 12)])
def test_lcm_list(values, expected):
    assert exact.lcm_list(values) == expected


def test_lcm_list_empty():
    with pytest.raises(DomainError):
        exact.lcm_list([])


def test_integer_kernel():
    (kernel,) = exact.integer_kernel([[1, 1]])
    assert kernel[0] + kernel[1] == 0
    assert abs(kernel[0]) == 1
    basis = exact.integer_kernel([[Fraction(1, 2), 1, 0], [0, 0, 1]])
    assert len(basis) == 1
    assert basis[0][0] + 2 * basis[0][1] == 0 and basis[0][2] == 0


@pytest.mark.parametrize(
    "coefficients,expected",
    [
        ([], (1, 1)),
        ([(Fraction(1, 3), 0)], (3, 1)),
        ([(Fraction(2, 3), Fraction(2, 3)), (Fraction(-2, 3), Fraction(2, 3))], (3, 3)),
    ],
)
def test_axis_divisors(coefficients, expected):
    assert exact.axis_divisors(coefficients) == expected


def test_reflection_matrices():
    r = Mat2.reflection(Vec2(1, 0))
    assert r == Mat2(1, 0, 0, -1)
    assert r.det() == -1
    diagonal = Mat2.reflection(Vec2(1, 1))
    assert diagonal @ Vec2(1, 0) == Vec2(0, 1)
    assert diagonal @ diagonal == Mat2.identity()


def test_vectors():
    v = Vec2(1, ROOT2)
    assert v.norm2() == 3
    assert v.cross(Vec2(1, 0)) == -ROOT2
    assert np.allclose(v.to_float(), [1, np.sqrt(2)])
