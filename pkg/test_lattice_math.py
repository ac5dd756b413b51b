import math

import pytest

from lattice_math import (
    BORDER,
    CORNER,
    FAULT,
    MIDDLE,
    classify_position,
    corner_border_coords,
    corner_counts,
    infer_middle_coord,
    neighborhood_radius,
    perimeter_walk,
    radius_anisotropy_limit,
    spacing_bound,
    spacing_feasible,
    swarm_dimensions,
)
from swarm_errors import CountInconsistentError, EpsOutOfRangeError


def test_neighborhood_radius():
    assert neighborhood_radius(35) == pytest.approx(62.5)
    # диагональ квадратной решётки внутри, второй ряд снаружи
    assert math.hypot(35, 35) < neighborhood_radius(35) < 70


def test_hexagonal_radius_rule():
    r = neighborhood_radius(35, eps=0.3)
    assert r == pytest.approx(45.5)
    # у гексагональной решётки с шагом 35 мм второй круг на sqrt(3)*35
    assert 35 < r < math.sqrt(3) * 35
    assert neighborhood_radius(35, eps=0.0) == pytest.approx(35)
    for eps in (0.5, -0.1):
        with pytest.raises(EpsOutOfRangeError):
            neighborhood_radius(35, eps=eps)


def test_spacing_bound_without_jitter_is_sqrt3():
    assert spacing_bound(35, 0.0) == pytest.approx(35 * math.sqrt(3))
    assert spacing_bound(35, 0.1) < spacing_bound(35, 0.0)


def test_spacing_bound_eps_out_of_range():
    # 3*0.35^2 - 10*0.35 + 3 < 0
    with pytest.raises(EpsOutOfRangeError):
        spacing_bound(35, 0.35)
    with pytest.raises(EpsOutOfRangeError):
        spacing_bound(35, -0.01)


def test_spacing_feasible():
    assert spacing_feasible(35, 35)
    assert spacing_feasible(35, 50)
    assert not spacing_feasible(35, 70)
    # порядок шагов не важен
    assert spacing_feasible(50, 35) == spacing_feasible(35, 50)
    with pytest.raises(ValueError):
        spacing_feasible(0, 35)


def test_radius_anisotropy_limit():
    limit = radius_anisotropy_limit(35)
    assert math.hypot(35, limit) == pytest.approx(neighborhood_radius(35))


def test_classify_position_rectangular():
    assert classify_position(3, [5, 5, 8]) == CORNER
    assert classify_position(5, [3, 5, 8, 8, 5]) == BORDER
    assert classify_position(8, [5, 8, 8, 8, 8, 8, 8, 5]) == MIDDLE
    assert classify_position(0, []) == FAULT


def test_corner_border_coords_25x8():
    c1, c2, c3 = corner_counts(25, 8)
    assert (c1, c2, c3) == (25, 32, 56)
    assert corner_border_coords(1, c1, c2, c3) == (1, 1)
    assert corner_border_coords(25, c1, c2, c3) == (25, 1)
    assert corner_border_coords(26, c1, c2, c3) == (25, 2)
    assert corner_border_coords(32, c1, c2, c3) == (25, 8)
    assert corner_border_coords(56, c1, c2, c3) == (1, 8)
    assert corner_border_coords(62, c1, c2, c3) == (1, 2)


def test_corner_border_coords_inconsistent():
    with pytest.raises(CountInconsistentError):
        corner_border_coords(64, 25, 32, 56)
    with pytest.raises(CountInconsistentError):
        corner_border_coords(3, 25, 25, 56)
    with pytest.raises(CountInconsistentError):
        corner_border_coords(0, 25, 32, 56)


def test_infer_middle_coord():
    neighbors = [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (0, 0)]
    assert infer_middle_coord(neighbors) == (2, 2)


def test_infer_middle_coord_partial():
    # только ось x имеет три подряд идущих значения
    assert infer_middle_coord([(4, 0), (5, 0), (6, 0), (0, 9)]) == (5, 0)
    assert infer_middle_coord([(0, 0)] * 8) == (0, 0)


def test_swarm_dimensions():
    assert swarm_dimensions(25, 32, 56, 62) == (25, 8, 200)
    assert swarm_dimensions(3, 5, 7, 8) == (3, 3, 9)
    with pytest.raises(CountInconsistentError):
        swarm_dimensions(25, 32, 56, 61)
    with pytest.raises(CountInconsistentError):
        swarm_dimensions(25, 32, 57, 62)


def test_perimeter_walk_matches_counts():
    walk = perimeter_walk(5, 4)
    assert len(walk) == 2 * (5 + 4) - 4
    assert walk[0] == (1, 1)
    assert walk[-1] == (1, 2)
    c1, c2, c3 = corner_counts(5, 4)
    for count, expected in enumerate(walk, 1):
        assert corner_border_coords(count, c1, c2, c3) == expected
