import numpy as np
import pytest

from lattice_math import BORDER, CORNER, MIDDLE
from lattice_world import (
    SYMMETRIES,
    LatticeSpec,
    Topology,
    check_comm_range,
    corner_name,
    dihedral_transform,
    expected_group_counts,
    expected_groups,
    generate,
    pairwise_distances,
    symmetry_dims,
    verify_coords,
)
from swarm_errors import InvalidSpecError

HEX_434 = LatticeSpec(topology=Topology.HEXAGONAL, row_lengths=(4, 3, 4), dx=50.0, dy=43.30)


def test_rectangular_layout_rows_bottom_up():
    truth = generate(LatticeSpec(cols=5, rows=4), np.random.default_rng(0))
    assert truth.n_agents == 20
    assert truth.true_coord[0] == (1, 1)
    assert truth.true_coord[4] == (5, 1)
    assert truth.true_coord[5] == (1, 2)
    assert tuple(truth.positions[6]) == (35.0, 35.0)


def test_rectangular_degrees():
    truth = generate(LatticeSpec(cols=5, rows=4), np.random.default_rng(0))
    degrees = truth.degrees()
    assert degrees[0] == 3
    assert degrees[2] == 5
    assert degrees[7] == 8
    assert sorted(set(degrees)) == [3, 5, 8]


def test_expected_groups_25x8():
    spec = LatticeSpec(cols=25, rows=8)
    assert expected_group_counts(spec) == (4, 58, 138)
    groups = expected_groups(generate(spec, np.random.default_rng(0)))
    assert (groups.count(CORNER), groups.count(BORDER), groups.count(MIDDLE)) == (4, 58, 138)


def test_hexagonal_434_groups():
    truth = generate(HEX_434, np.random.default_rng(0))
    assert truth.true_coord is None
    assert sorted(set(truth.degrees())) == [2, 4, 5, 6]
    groups = expected_groups(truth)
    assert (groups.count(CORNER), groups.count(BORDER), groups.count(MIDDLE)) == (4, 6, 1)
    with pytest.raises(InvalidSpecError):
        expected_group_counts(HEX_434)


def test_hexagonal_second_ring_outside_radius():
    truth = generate(HEX_434, np.random.default_rng(0))
    distances = pairwise_distances(truth.positions)
    radius = 1.5 * 50 + 10
    for i, neighbors in enumerate(truth.adjacency):
        within = {k for k in range(truth.n_agents) if k != i and distances[i, k] < radius}
        assert within == set(neighbors), f"агент {i}"


def test_jitter_stays_inside_disc():
    spec = LatticeSpec(cols=10, rows=10, jitter_eps=0.1)
    truth = generate(spec, np.random.default_rng(5))
    shift = np.linalg.norm(truth.positions - truth.ideal_positions, axis=1)
    assert shift.max() <= 0.1 * 35 + 1e-9
    assert shift.max() > 0


def test_generate_is_deterministic():
    spec = LatticeSpec(cols=6, rows=4, jitter_eps=0.1)
    a = generate(spec, np.random.default_rng(9))
    b = generate(spec, np.random.default_rng(9))
    assert np.array_equal(a.positions, b.positions)


@pytest.mark.parametrize("spec", [
    LatticeSpec(cols=2, rows=5),
    LatticeSpec(dx=35, dy=70),
    LatticeSpec(jitter_eps=0.35),
    LatticeSpec(dx=0),
    LatticeSpec(topology=Topology.HEXAGONAL, row_lengths=(3, 2)),
])
def test_invalid_specs(spec):
    with pytest.raises(InvalidSpecError):
        spec.validate()


def test_comm_range_check():
    assert check_comm_range(LatticeSpec(), 100.0) == pytest.approx(62.5)
    with pytest.raises(InvalidSpecError):
        check_comm_range(LatticeSpec(dx=70, dy=70), 100.0)


def test_verify_accepts_every_symmetry():
    truth = generate(LatticeSpec(cols=4, rows=3), np.random.default_rng(0))
    for name in SYMMETRIES:
        tau = dihedral_transform(name, 4, 3)
        result = verify_coords([tau(c) for c in truth.true_coord], truth)
        assert result.passed
        assert result.symmetry == name


def test_symmetry_dims_swap_axes():
    spec = LatticeSpec(cols=25, rows=8)
    assert symmetry_dims(spec, "mirror_y") == (25, 8)
    assert symmetry_dims(spec, "rot90") == (8, 25)


def test_verify_reports_first_mismatch():
    truth = generate(LatticeSpec(cols=5, rows=5), np.random.default_rng(0))
    assigned = list(truth.true_coord)
    assigned[7], assigned[8] = assigned[8], assigned[7]
    result = verify_coords(assigned, truth)
    assert not result.passed
    assert result.symmetry == "identity"
    assert result.mismatch_agent == 7


def test_corner_names():
    truth = generate(LatticeSpec(cols=5, rows=4), np.random.default_rng(0))
    assert corner_name(truth, 0) == "bottom_left"
    assert corner_name(truth, 4) == "bottom_right"
    assert corner_name(truth, 19) == "top_right"
    assert corner_name(truth, 7) == "none"
