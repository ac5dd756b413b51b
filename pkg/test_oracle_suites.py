from lattice_math import corner_border_coords, corner_counts, perimeter_walk
from oracle_suites import (
    close_middles,
    dihedral_closure_suite,
    middle_closure_suite,
    perimeter_suite,
    radius_sweep_suite,
)


def test_perimeter_suite():
    result = perimeter_suite(max_side=15)
    assert result.passed, result.details
    assert result.details == f"{13 * 13} решёток"


def test_middle_closure_suite():
    result = middle_closure_suite(lattices=15, seed=3, max_cols=12, max_rows=10)
    assert result.passed, result.details


def test_close_middles_from_counted_border():
    width, height = 7, 5
    c1, c2, c3 = corner_counts(width, height)
    border = {}
    for count, (x, y) in enumerate(perimeter_walk(width, height), 1):
        border[(x - 1, y - 1)] = corner_border_coords(count, c1, c2, c3)
    assigned = close_middles(width, height, border)
    assert all(coord == (col + 1, row + 1) for (col, row), coord in assigned.items())


def test_radius_sweep_suite():
    result = radius_sweep_suite(extra_eps=(0.1, 0.35))
    assert result.passed, result.details
    assert "eps=0.1: в допустимом диапазоне" in result.details
    assert "eps=0.35: EPS_OUT_OF_RANGE" in result.details


def test_dihedral_closure_suite():
    result = dihedral_closure_suite(sizes=((3, 3), (4, 6)))
    assert result.passed, result.details
