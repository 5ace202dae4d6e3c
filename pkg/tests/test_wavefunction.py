import math
import warnings
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from pytest_cases import THIS_MODULE, parametrize_with_cases

from polyscar import wavefunction as wf
from polyscar.errors import (
    DomainError,
    KindError,
    NeedsApproximationError,
    RemappingError,
    UnsupportedBoundaryError,
    UnsupportedError,
)
from polyscar.geometry import BilliardSpec
from polyscar.skeleton import periodic_skeleton
from polyscar.utils import random_interior
from polyscar.wavefunction import ModeKind, WaveMode

# make the shared fixtures visible to pytest-cases so generated case fixtures do not shadow them
from .conftest import lshape, square  # noqa: F401


@pytest.fixture
def swf_u(triangle, uq):
    return WaveMode(triangle, ModeKind.SWF_U, (121, 1), approximation=uq)


def test_triangle_zero_sides(swf_u):
    for side in ("OF", "HO"):
        report = wf.boundary_residual(swf_u, side, samples=400)
        assert report.passed
        assert report.bound == wf.ZERO_TOLERANCE


def test_triangle_residual_bound(swf_u):
    report = wf.boundary_residual(swf_u, "FH", samples=2000)
    assert np.isclose(report.bound, 0.2280, rtol=1e-3)
    assert report.passed
    assert report.as_dict()["check"] == "FH"


@pytest.mark.parametrize("m", [121, 191, 266])
def test_triangle_residuals_full_sampling(triangle, uq, m):
    mode = WaveMode(triangle, ModeKind.SWF_U, (m, 1), approximation=uq)
    hypotenuse = wf.boundary_residual(mode, "FH", samples=10 ** 4)
    assert hypotenuse.passed
    assert hypotenuse.max_abs < 0.5
    for side in ("OF", "HO"):
        assert wf.boundary_residual(mode, side, samples=10 ** 4).max_abs < 1e-12


@pytest.mark.parametrize("kind,substituted", [(ModeKind.SWF_Q, False), (ModeKind.SWF_U, True)])
def test_triangle_legs_vanish(triangle, uq, kind, substituted):
    mode = WaveMode(triangle, kind, (121, 1), approximation=uq, substituted=substituted)
    for side in wf.constructed_zero_sides(mode):
        assert wf.boundary_residual(mode, side, samples=10 ** 4).max_abs < 1e-12


def test_substituted_triangle_zero_sides(triangle, uq):
    mode = WaveMode(triangle, ModeKind.SWF_Q, (5, 2), approximation=uq, substituted=True)
    assert wf.constructed_zero_sides(mode) == (0,)
    assert wf.boundary_residual(mode, 0, samples=200).passed


def test_parallelogram_zero_sides(parallelogram):
    mode = WaveMode(parallelogram, ModeKind.SWF_BRANCH1, (2, 1))
    assert wf.constructed_zero_sides(mode) == (0, 1, 2, 3)
    for side in range(4):
        assert wf.boundary_residual(mode, side, samples=200).passed


def test_residual_errors(square, parallelogram):
    scar = WaveMode(square, ModeKind.SUPERSCAR, (2, 1), direction=(1, 1))
    with pytest.raises(UnsupportedError):
        wf.boundary_residual(scar, 0)
    with pytest.raises(DomainError):
        wf.boundary_residual(WaveMode(square, ModeKind.EXACT, (1, 1)), 0, samples=1)


def test_exact_values(square):
    mode = WaveMode(square, ModeKind.EXACT, (2, 1))
    assert np.isclose(wf.evaluate(mode, (0.25, 0.5)), 1)
    assert np.isclose(wf.eval_swf(mode, [[0.75, 0.5]])[0], -1)
    assert np.isclose(wf.wavenumber(mode), np.pi * np.sqrt(5))


def test_outside_points(square):
    mode = WaveMode(square, ModeKind.EXACT, (1, 1))
    with pytest.raises(DomainError):
        wf.evaluate(mode, (2, 0.5))
    values = wf.evaluate(mode, [[2, 0.5], [0.5, 0.5]], outside="nan")
    assert np.isnan(values[0]) and np.isclose(values[1], 1)
    with pytest.raises(DomainError):
        wf.evaluate(mode, (0.5, 0.5), outside="clip")


def test_eval_kinds(square):
    mode = WaveMode(square, ModeKind.EXACT, (1, 1))
    with pytest.raises(KindError):
        wf.eval_superscar(mode, (0.5, 0.5))
    scar = WaveMode(square, ModeKind.SUPERSCAR, (2, 1), direction=(1, 1))
    with pytest.raises(KindError):
        wf.eval_swf(scar, (0.5, 0.5))


@pytest.mark.parametrize(
    "kwargs,error",
    [
        (dict(family="triangle", kind=ModeKind.SWF_U), NeedsApproximationError),
        (dict(family="square", kind=ModeKind.SWF_U), KindError),
        (dict(family="square", kind=ModeKind.EXACT, boundary="neumann"), UnsupportedBoundaryError),
        (dict(family="triangle", kind=ModeKind.SUPERSCAR, poc=5), KindError),
        (dict(family="square", kind=ModeKind.SUPERSCAR), KindError),
        (dict(family="square", kind=ModeKind.BS_FOLDED), KindError),
        (dict(family="square", kind=ModeKind.EXACT, variant="x"), KindError),
        (dict(family="lshape", kind=ModeKind.SUPERSCAR, direction=(1, 2)), UnsupportedError),
        (dict(family="parallelogram", kind=ModeKind.SUPERSCAR, poc=3, boundary="neumann"),
         UnsupportedBoundaryError),
    ],
)
def test_mode_validation(request, kwargs, error):
    kwargs = dict(kwargs)
    spec = request.getfixturevalue(kwargs.pop("family"))
    kind = kwargs.pop("kind")
    with pytest.raises(error):
        WaveMode(spec, kind, (2, 1), **kwargs)


def test_describe(triangle, small_uq):
    mode = WaveMode(triangle, "swf-q", (3, 1), approximation=small_uq)
    info = mode.describe()
    assert info["kind"] == "swf-q"
    assert info["approximation"] == "3/2"
    assert info["variant"] == "q"
    assert info["normalization"] == wf.NORMALIZATION
    assert mode.scale == 2


def test_superscar_field_is_zero_without_transverse_number(square):
    mode = WaveMode(square, ModeKind.SUPERSCAR, (2, 0), direction=(1, 1))
    field = wf.sample_field(mode, grid=50)
    assert field.max_abs() == 0
    assert wf.nodal_lines(field).shape == (0, 2)


def test_nodal_lines(square):
    field = wf.sample_field(WaveMode(square, ModeKind.EXACT, (2, 1)), grid=100)
    nodes = wf.nodal_lines(field)
    assert len(nodes) > 0
    assert np.allclose(nodes[:, 0], 0.5, atol=1e-6)


def test_complex_field(parallelogram):
    mode = WaveMode(parallelogram, ModeKind.SWF_COMPLEX, (2, 1))
    field = wf.sample_field(mode, grid=60, workers=2)
    assert field.is_complex
    assert field.values.shape == (60, 60)
    assert np.all(np.isnan(field.values[~field.mask]))
    with pytest.raises(DomainError):
        wf.nodal_lines(field)
    imag = field.branch()
    assert imag.part == "imag" and not imag.is_complex
    assert len(wf.nodal_lines(imag)) > 0
    with pytest.raises(DomainError):
        field.branch("abs")


def test_coarse_grid_warns(square):
    with pytest.warns(UserWarning):
        wf.sample_field(WaveMode(square, ModeKind.EXACT, (40, 40)), grid=10)
    with pytest.raises(DomainError):
        wf.sample_field(WaveMode(square, ModeKind.EXACT, (1, 1)), grid=1)


def case_rectangle_product(square):
    return WaveMode(square, ModeKind.EXACT, (2, 1))


def case_triangle_swf(triangle, small_uq):
    return WaveMode(triangle, ModeKind.SWF_U, (3, 1), approximation=small_uq)


def case_parallelogram_complex(parallelogram):
    return WaveMode(parallelogram, ModeKind.SWF_COMPLEX, (2, 1))


def case_parallelogram_sine(parallelogram):
    return WaveMode(parallelogram, ModeKind.SWF_BRANCH1, (2, 1))


@parametrize_with_cases("mode", cases=THIS_MODULE)
def test_plane_wave_assembly(mode):
    points = random_interior(mode.spec, 200, seed=1)
    scale, residual = wf.compare_closed_form(mode, points)
    assert abs(scale) > 1e-6
    assert residual < 1e-8


def test_assembly_needs_unsubstituted(triangle, small_uq):
    mode = WaveMode(triangle, ModeKind.SWF_U, (3, 1), approximation=small_uq, substituted=True)
    with pytest.raises(KindError):
        wf.compare_closed_form(mode, np.array([[1.0, 0.1]]))


def test_rectangle_decomposition(square):
    (report,) = wf.verify_decomposition(square, 4, 1)
    assert report.passed
    assert report.side == "rectangle-decomposition(3,1)"
    with pytest.raises(RemappingError):
        wf.verify_decomposition(square, 1, 1)


def test_lshape_decomposition(lshape):
    reports = wf.verify_decomposition(lshape, 4, 1)
    assert all(r.passed for r in reports)


def test_triangle_decomposition(triangle, small_uq):
    reports = wf.verify_decomposition(triangle, 2, 1, approximation=small_uq)
    assert len(reports) == 8
    assert all(r.passed for r in reports)
    exact = [r for r in reports if "rational" not in r.side]
    assert all(r.max_abs < 1e-10 for r in exact)
    with pytest.raises(NeedsApproximationError):
        wf.verify_decomposition(triangle, 2, 1)


def test_parallelogram_decomposition(parallelogram):
    reports = wf.verify_decomposition(parallelogram, 2, 1)
    assert [r.side for r in reports] == ["poc3", "poc5", "poc8"]
    assert all(r.passed for r in reports)
    with pytest.raises(RemappingError):
        wf.verify_decomposition(parallelogram, 2, 2)


def decomposition_square(square):
    windings = [(q, r) for q, r in product(range(1, 6), repeat=2) if math.gcd(q, r) == 1]
    # (k, l) = (q, r) on the square
    return square, [((q, r), c * (q * q + r * r), n) for q, r in windings for c in range(1, 6) for n in range(6)]


def decomposition_lshape(lshape):
    return lshape, [((1, 1), 2 * gamma, n) for gamma in range(1, 6) for n in range(6)]


def decomposition_wide_lshape():
    # alpha = 2, (k, l) = (2, 1)
    spec = BilliardSpec.lshape(2, 1, 1, 1)
    return spec, [((2, 1), 5 * gamma, n) for gamma in range(1, 6) for n in range(6)]


@parametrize_with_cases("spec,levels", cases=THIS_MODULE, prefix="decomposition_")
def test_product_decompositions(spec, levels):
    for direction, m, n in levels:
        (report,) = wf.verify_decomposition(spec, m, n, direction=direction, grid=200)
        assert report.max_abs < 1e-10, (direction, m, n)


def branch_sine():
    return ModeKind.SWF_BRANCH1


def branch_cosine():
    return ModeKind.SWF_BRANCH2


@parametrize_with_cases("kind", cases=THIS_MODULE, prefix="branch_")
@pytest.mark.parametrize("m,n", [(2, 1), (4, 1), (6, 3)])
def test_parallelogram_branch_symmetry(parallelogram, kind, m, n):
    mode = WaveMode(parallelogram, kind, (m, n))
    points = random_interior(parallelogram, 100, seed=3)
    mirrored = points * [1, -1]
    values = wf.evaluate(mode, points)
    assert np.allclose(wf.evaluate(mode, mirrored, outside="ignore"), -values, rtol=0, atol=1e-12)
    x = np.linspace(0.5, 1, 100)
    for y in (np.zeros(100), -np.sqrt(3) * (x - 1)):
        line = wf.evaluate(mode, np.column_stack([x, y]), outside="ignore")
        assert np.max(np.abs(line)) < 1e-9


def test_triangle_superscar_constants(uq, variant):
    exact6 = [float(c) for c in wf.superscar_constants(6)]
    rational6 = [float(c) for c in wf.superscar_constants(6, uq, variant)]
    assert np.allclose(exact6, rational6, rtol=1e-6)
    exact9 = [float(c) for c in wf.superscar_constants(9)]
    rational9 = [float(c) for c in wf.superscar_constants(9, uq, variant)]
    assert np.allclose(exact9, rational9, rtol=1e-6)


def test_folded_state_has_derivative_jump(triangle, small_uq):
    # x = 1 carries the singular diagonal ending at H
    point, normal = (1.0, 0.2), (1.0, 0.0)
    jumps = []
    for channel in periodic_skeleton(triangle, (0, 1)):
        mode = WaveMode(triangle, ModeKind.BS_FOLDED, (3, 2), channel=channel)
        jumps.append(wf.line_jump(mode, point, normal)[1])
    assert max(jumps) > 1e-3
    smooth = WaveMode(triangle, ModeKind.SWF_U, (3, 2), approximation=small_uq)
    value_jump, derivative_jump = wf.line_jump(smooth, point, normal)
    assert value_jump < 1e-8
    assert derivative_jump < 1e-5


def test_folded_state_inside_channel(triangle):
    channel = periodic_skeleton(triangle, (0, 1))[0]
    mode = WaveMode(triangle, ModeKind.BS_FOLDED, (1, 1), channel=channel)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        field = wf.sample_field(mode, grid=80)
    assert field.max_abs() > 0
    assert np.isclose(wf.wavenumber(mode), np.hypot(2 * np.pi / channel.length, np.pi / channel.width))


def test_rectangle_components(square):
    mode = WaveMode(square, ModeKind.SUPERSCAR, (2, 1), direction=(1, 1))
    x, y = np.array([0.0, 0.3]), np.array([0.4, 0.0])
    dirichlet, _ = wf.rectangle_components(mode, x, y)
    assert np.allclose(dirichlet, 0, atol=1e-12)
    neumann_mode = WaveMode(square, ModeKind.SUPERSCAR, (2, 1), direction=(1, 1), boundary="neumann")
    assert np.isfinite(wf.evaluate(neumann_mode, (0.3, 0.4)))


@pytest.mark.parametrize("poc", [3, 5, 8])
def test_parallelogram_superscars(parallelogram, poc):
    mode = WaveMode(parallelogram, ModeKind.SUPERSCAR, (2, 1), poc=poc)
    assert wf.wavenumber(mode) > 0
    values = wf.eval_superscar(mode, random_interior(parallelogram, 20))
    assert values.shape == (20,)


@pytest.mark.parametrize("poc", [6, 9])
def test_triangle_superscars(triangle, poc):
    mode = WaveMode(triangle, ModeKind.SUPERSCAR, (3, 1), poc=poc, approximation=Fraction(3, 2))
    assert np.all(np.isfinite(wf.eval_superscar(mode, random_interior(triangle, 20))))


def shaded_poc6():
    return 6, np.array([[1.6, 0.45], [1.5, 0.3]])


def shaded_poc9():
    return 9, np.array([[1.45, 0.35], [1.3, 0.2]])


@parametrize_with_cases("poc,points", cases=THIS_MODULE, prefix="shaded_")
def test_triangle_superscar_shaded_cell(triangle, poc, points):
    mode = WaveMode(triangle, ModeKind.SUPERSCAR, (3, 2), poc=poc)
    state = wf.poc6_state if poc == 6 else wf.poc9_state
    expected = state(wf.superscar_constants(poc), 3, 2, points[:, 0], points[:, 1])
    assert np.allclose(wf.eval_superscar(mode, points), expected, atol=1e-12)
    mapped, sign = mode.scar_cells.fold(points)
    assert np.allclose(mapped, points)
    assert np.all(sign == 1)


@pytest.mark.parametrize("poc,count", [(6, 3), (9, 5)])
def test_scar_cells_segments(triangle, poc, count):
    cells = wf.scar_cells(triangle, poc)
    assert cells.segments.shape == (count, 2, 2)
    ends = cells.segments.reshape(-1, 2)
    assert np.all(triangle.boundary_distance(ends) < 1e-9)


def test_poc6_cells_lie_on_diagonals(triangle):
    root2 = np.sqrt(2)
    for a, b in wf.scar_cells(triangle, 6).segments:
        on_lines = [
            np.isclose(a[0], 1) and np.isclose(b[0], 1),
            np.isclose(a.sum(), root2) and np.isclose(b.sum(), root2),
            np.isclose(a[0] - a[1], root2) and np.isclose(b[0] - b[1], root2),
        ]
        assert sum(on_lines) == 1


def test_triangle_superscar_value_jump(triangle):
    # x = 1 is a folded diagonal of channel 6
    mode = WaveMode(triangle, ModeKind.SUPERSCAR, (3, 2), poc=6)
    y = np.linspace(0.05, 0.35, 7)
    right = wf.eval_superscar(mode, np.column_stack([np.full(7, 1 + 1e-6), y]))
    left = wf.eval_superscar(mode, np.column_stack([np.full(7, 1 - 1e-6), y]))
    assert np.max(np.abs(right - left)) > 1e-3
    # one side is the other reflected across x + y = sqrt(2), with opposite sign
    root2 = np.sqrt(2)
    mirrored = wf.poc6_state(wf.superscar_constants(6), 3, 2, root2 - y, np.full(7, root2 - 1))
    assert np.allclose(right, -mirrored, atol=1e-4)
    assert np.allclose(left, mirrored, atol=1e-4)
    assert wf.line_jump(mode, (1.0, 0.2), (1.0, 0.0))[0] > 1e-3


def test_scar_cells_need_triangle(square):
    with pytest.raises(KindError):
        wf.scar_cells(square, 6)
