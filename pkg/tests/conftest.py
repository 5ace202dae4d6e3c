from fractions import Fraction

import pytest
from pytest_cases import fixture, parametrize_with_cases

from polyscar.exact import convergents
from polyscar.geometry import BilliardSpec, period_lattice


@pytest.fixture
def triangle():
    return BilliardSpec.triangle()


@pytest.fixture
def parallelogram():
    return BilliardSpec.parallelogram(4)


@pytest.fixture
def square():
    return BilliardSpec.rectangle(1, 1)


@pytest.fixture
def lshape():
    return BilliardSpec.lshape(1, 1, 1, 1)


@pytest.fixture
def sqrt2_cf():
    return convergents("sqrt2", 10)


@pytest.fixture
def uq():
    return Fraction(3363, 2378)


@pytest.fixture
def small_uq():
    return Fraction(3, 2)


@pytest.fixture(params=["u", "q"])
def variant(request):
    return request.param


@pytest.fixture
def triangle_lattice(triangle, uq):
    return period_lattice(triangle, uq, "u")


def case_triangle(triangle):
    return triangle


def case_parallelogram(parallelogram):
    return parallelogram


def case_square(square):
    return square


def case_lshape(lshape):
    return lshape


@fixture
@parametrize_with_cases(
    "spec", cases=[case_triangle, case_parallelogram, case_square, case_lshape]
)
def family_spec(spec):
    return spec


@pytest.fixture
def write_config(tmp_path):
    def write(text, name="billiard.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
