import warnings
from fractions import Fraction

import numpy as np
import pytest
from pytest_cases import THIS_MODULE, parametrize_with_cases

from polyscar import quantization
from polyscar.errors import (
    CompatibilityError,
    DomainError,
    PeriodicSkeletonRequiredError,
    RemappingError,
    UnsupportedError,
)
from polyscar.exact import Vec2
from polyscar.geometry import BilliardSpec, Family, period_lattice
from polyscar.skeleton import Kind, classify_direction

# make the shared fixtures visible to pytest-cases so generated case fixtures do not shadow them
from .conftest import lshape, parallelogram, square, triangle  # noqa: F401


@pytest.mark.parametrize(
    "upper,lower,reference", [((191, 1), (121, 1), 2.4937), ((266, 1), (191, 1), 1.9380)]
)
def test_triangle_level_ratios(triangle, triangle_lattice, upper, lower, reference):
    high = quantization.spectrum_aperiodic(triangle, triangle_lattice, *upper)
    low = quantization.spectrum_aperiodic(triangle, triangle_lattice, *lower)
    ratio = high.scaled / low.scaled
    assert ratio == Fraction(upper[0] ** 2 + upper[1] ** 2, lower[0] ** 2 + lower[1] ** 2)
    assert abs(float(ratio) - reference) / reference < 1e-3


def test_triangle_energy(triangle, triangle_lattice):
    entry = quantization.spectrum_aperiodic(triangle, triangle_lattice, 121, 1)
    assert entry.scaled == Fraction(3363 ** 2 * (121 ** 2 + 1), 2)
    assert np.isclose(entry.energy, np.pi ** 2 * 3363 ** 2 * (121 ** 2 + 1) / 2)
    assert entry.skeleton is Kind.APERIODIC
    assert entry.variant == "u"
    assert entry.e0 == 0 and entry.is_valid()


def test_triangle_variants(triangle, uq):
    lattice = period_lattice(triangle, uq, "u")
    u_entry = quantization.spectrum_aperiodic(triangle, lattice, 3, 1)
    q_entry = quantization.spectrum_aperiodic(triangle, lattice, 3, 1, variant="q")
    assert q_entry.variant == "q"
    assert u_entry.scaled / q_entry.scaled == Fraction(3363, 2378) ** 2


@pytest.mark.parametrize("m,n", [(0, 1), (3, 0)])
def test_triangle_axis_numbers(triangle, triangle_lattice, m, n):
    with pytest.raises(PeriodicSkeletonRequiredError):
        quantization.spectrum_aperiodic(triangle, triangle_lattice, m, n)


def test_zero_quantum_numbers(square):
    with pytest.raises(DomainError):
        quantization.spectrum_aperiodic(square, None, 0, 0)


def test_square_ground_level(square):
    entry = quantization.spectrum_aperiodic(square, None, 1, 1)
    assert entry.scaled == 1
    assert np.isclose(entry.energy, np.pi ** 2)
    assert np.allclose(entry.momentum, [np.pi, np.pi])


def test_parallelogram_level(parallelogram):
    entry = quantization.spectrum_aperiodic(parallelogram, None, 1, 1)
    assert entry.scaled == Fraction(8, 9)
    assert np.isclose(entry.energy, 8 * np.pi ** 2 / 9)
    assert entry.branches == 2
    assert quantization.spectrum_aperiodic(parallelogram, None, 1, -1).branches == 1


def test_lattice_momentum(square):
    P = quantization.lattice_momentum(period_lattice(square), 2, 3)
    assert P == Vec2(2, 3)


def test_remap():
    assert quantization.remap_quantum_numbers(Family.RECTANGLE, 1, 1, 1, 1, 1, 1) == (2, 0, 2)
    assert quantization.remap_quantum_numbers("lshape", 2, 1, 0, 1, 1, 1) == (3, -1, 2)


@pytest.mark.parametrize(
    "family,c,k,l",
    [(Family.TRIANGLE, 1, 1, 1), (Family.RECTANGLE, 0, 1, 1), (Family.RECTANGLE, 1, 2, 4)],
)
def test_remap_errors(family, c, k, l):
    with pytest.raises(RemappingError):
        quantization.remap_quantum_numbers(family, c, k, l, 1, 1, 1)


def test_square_compatibility(square):
    report = quantization.check_compatibility(square, (1, 1))
    assert report.satisfied
    assert report.k_l == (1, 1)
    assert report.winding == (1, 1)
    bouncing = quantization.check_compatibility(square, (0, 1))
    assert bouncing.satisfied and bouncing.k_l == (0, 1)


def test_irrational_rectangle_incompatible():
    spec = BilliardSpec.rectangle(1, "1+sqrt(2)")
    report = quantization.check_compatibility(spec, (1, "1+sqrt(2)"))
    assert not report.satisfied
    assert report.winding == (1, 1)
    assert "irrational" in report.constraint
    with pytest.raises(CompatibilityError) as info:
        quantization.spectrum_table(spec, None, 3, direction=(1, "1+sqrt(2)"))
    assert info.value.report == report
    assert info.value.exit_code == 3


def test_rectangle_winding():
    spec = BilliardSpec.rectangle(1, 2)
    assert quantization.winding_numbers(spec, Vec2(3, 4)) == (3, 2)
    assert quantization.winding_numbers(spec, Vec2(1, 0)) == (1, 0)
    assert quantization.check_compatibility(spec, (3, 4)).k_l == (3, 8)


def test_lshape_compatibility(lshape):
    report = quantization.check_compatibility(lshape, (1, 1))
    assert report.satisfied
    assert report.k_l == (1, 1)
    assert quantization.lshape_ratios(lshape) == (1, 1, 1)
    assert not quantization.check_compatibility(lshape, (1, 2)).satisfied


def test_triangle_always_compatible(triangle):
    assert quantization.check_compatibility(triangle, (0, 1)).satisfied


def test_square_periodic_level(square):
    with pytest.warns(UserWarning):
        entry = quantization.spectrum_periodic(square, None, (1, 1), 2, 1)
    assert entry.scaled == 2
    assert np.isclose(entry.energy, 2 * np.pi ** 2)
    assert entry.auxiliary["m''"] == 2 and entry.auxiliary["n''"] == 0
    aperiodic = quantization.spectrum_aperiodic(square, None, 2, 0)
    assert aperiodic.scaled == entry.scaled
    with pytest.raises(RemappingError):
        quantization.spectrum_periodic(square, None, (1, 1), 1, 1)


def test_square_periodic_momentum(square):
    entry = quantization.spectrum_periodic(square, None, (1, 1), 2, 0)
    assert np.allclose(entry.momentum, [np.pi, np.pi])
    assert entry.e0 == 0
    assert entry.scaled == 1


def test_triangle_periodic_level(triangle, triangle_lattice):
    entry = quantization.spectrum_periodic(triangle, triangle_lattice, (0, 1), 121, 1)
    assert entry.scaled == Fraction(3363 ** 2 * (121 ** 2 + 1), 2)
    assert np.isclose(entry.validity, 1 / 121)
    assert entry.direction == Vec2(0, 1)


def test_parallelogram_periodic_level(parallelogram):
    with pytest.warns(UserWarning):
        entry = quantization.spectrum_periodic(parallelogram, None, (0, 1), 2, 1)
    assert entry.scaled == Fraction(8, 3)
    assert entry.scaled == quantization.spectrum_aperiodic(parallelogram, None, 2, 1).scaled
    with pytest.raises(UnsupportedError):
        quantization.spectrum_periodic(parallelogram, None, (1, 0), 2, 1)


def test_periodic_needs_positive_m(square):
    with pytest.raises(DomainError):
        quantization.spectrum_periodic(square, None, (1, 1), 0, 1)


def test_momentum_projections(square):
    entry = quantization.spectrum_aperiodic(square, None, 1, 1)
    across, along = quantization.momentum_projections(entry, (1, 1))
    assert np.isclose(across, 0)
    assert np.isclose(along, np.pi * np.sqrt(2))


def test_spectrum_table_sorted(square):
    entries = quantization.spectrum_table(square, None, 3, workers=2)
    assert len(entries) == 9
    assert entries[0].quantum_numbers == (1, 1)
    energies = [e.energy for e in entries]
    assert energies == sorted(energies)


def test_spectrum_table_ranges(triangle, triangle_lattice, parallelogram):
    pairs = [e.quantum_numbers for e in quantization.spectrum_table(triangle, triangle_lattice, 4)]
    assert sorted(pairs) == [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]
    for entry in quantization.spectrum_table(parallelogram, None, 2):
        m, n = entry.quantum_numbers
        assert m > n and m + n >= 0


def test_periodic_table(square):
    entries = quantization.spectrum_table(square, None, 4, direction=(1, 1))
    assert all(e.quantum_numbers[0] % 2 == 0 for e in entries)
    assert all(e.skeleton is Kind.PERIODIC for e in entries)


def test_spectrum_table_domain(square):
    with pytest.raises(DomainError):
        quantization.spectrum_table(square, None, 0)


def test_entry_row(square):
    row = quantization.spectrum_aperiodic(square, None, 1, 2).as_row()
    assert row["family"] == "rectangle"
    assert row["skeleton"] == "aperiodic"
    assert (row["m"], row["n"]) == (1, 2)


MAX_QUANTUM = 50


def coincidence_square(square):
    pairs = [(m, n) for m in range(2, MAX_QUANTUM + 1, 2) for n in range(MAX_QUANTUM + 1)]
    return square, period_lattice(square), (1, 1), pairs, lambda e: (e.auxiliary["m''"], e.auxiliary["n''"])


def coincidence_rectangle():
    spec = BilliardSpec.rectangle(1, 2)
    # k q + l r = 25 along (3, 4)
    pairs = [(m, n) for m in (25, 50) for n in range(MAX_QUANTUM + 1)]
    return spec, period_lattice(spec), (3, 4), pairs, lambda e: (e.auxiliary["m''"], e.auxiliary["n''"])


def coincidence_lshape(lshape):
    pairs = [(m, n) for m in range(2, MAX_QUANTUM + 1, 2) for n in range(MAX_QUANTUM + 1)]
    return lshape, period_lattice(lshape), (1, 1), pairs, lambda e: (e.auxiliary["m"], e.auxiliary["n"])


def coincidence_triangle(triangle, triangle_lattice):
    # n = 0 is the skeleton itself
    pairs = [(m, n) for m in range(1, MAX_QUANTUM + 1) for n in range(1, MAX_QUANTUM + 1)]
    return triangle, triangle_lattice, (0, 1), pairs, lambda e: e.quantum_numbers


def coincidence_parallelogram(parallelogram):
    pairs = [(m, n) for m in range(1, MAX_QUANTUM + 1) for n in range(-MAX_QUANTUM, MAX_QUANTUM + 1)]
    return parallelogram, period_lattice(parallelogram), (0, 1), pairs, lambda e: e.quantum_numbers


@parametrize_with_cases("spec,lattice,direction,pairs,aperiodic", cases=THIS_MODULE, prefix="coincidence_")
def test_periodic_levels_in_aperiodic_spectrum(spec, lattice, direction, pairs, aperiodic):
    dc = classify_direction(lattice, direction, trace=False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for m, n in pairs:
            entry = quantization.spectrum_periodic(spec, lattice, dc, m, n)
            level = quantization.spectrum_aperiodic(spec, lattice, *aperiodic(entry))
            assert level.scaled == entry.scaled, (m, n)
