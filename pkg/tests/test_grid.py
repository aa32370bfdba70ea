import itertools

import numpy as np
import pytest

from cadrift.grid import (
    UNASSIGNED,
    DimensionLimits,
    Grid,
    GridConfig,
    majority_vote,
    manhattan_offsets,
    modal_label,
)


def make_grid(d=2, bins=10, low=0.0, high=1.0, radius=1):
    limits = DimensionLimits.from_bounds([low] * d, [high] * d)
    return Grid(GridConfig(d=d, bins_per_dim=bins, radius=radius), limits)


def oracle_step(grid, radius):
    before = grid.states.copy()
    after = before.copy()
    for coords in np.ndindex(*grid.shape):
        if before[coords] != UNASSIGNED:
            continue
        label = majority_vote(
            [int(before[n]) for n in grid.neighbors(coords, radius)],
            alphabet=grid.config.state_alphabet,
        )
        if label is not None:
            after[coords] = label
    return after


def brute_force_neighbors(coords, radius, bins):
    found = []
    for candidate in itertools.product(range(bins), repeat=len(coords)):
        distance = sum(abs(a - b) for a, b in zip(candidate, coords))
        if 0 < distance <= radius:
            found.append(candidate)
    return sorted(found)


def test_grid_config_rejects_bad_values():
    with pytest.raises(ValueError):
        GridConfig(d=0, bins_per_dim=10)
    with pytest.raises(ValueError):
        GridConfig(d=2, bins_per_dim=1)
    with pytest.raises(ValueError):
        GridConfig(d=2, bins_per_dim=10, state_alphabet=(1,))
    assert GridConfig(d=3, bins_per_dim=4).n_cells == 64


# locate_cell: halves of the unit square, upper boundary clamps into the last bin
def test_locate_cell_unit_square():
    grid = make_grid(bins=2)
    assert grid.locate_cell([0.1, 0.9]) == (0, 1)
    assert grid.locate_cell([1.0, 1.0]) == (1, 1)
    assert grid.locate_cell([-5.0, 7.0]) == (0, 1)


def test_locate_cell_lower_corner_of_asymmetric_limits():
    limits = DimensionLimits.from_bounds([3.0, -3.0], [7.0, 3.0])
    grid = Grid(GridConfig(d=2, bins_per_dim=10), limits)
    assert grid.locate_cell([3.0, -3.0]) == (0, 0)
    # bin midpoints map onto their own bin
    for i in range(10):
        middle = 3.0 + 0.4 * (i + 0.5)
        assert grid.locate_cell([middle, 0.0])[0] == i


def test_locate_cell_rejects_bad_vectors():
    grid = make_grid()
    with pytest.raises(ValueError):
        grid.locate_cell([0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        grid.locate_cell([np.nan, 0.2])
    with pytest.raises(ValueError):
        Grid(GridConfig(d=2, bins_per_dim=4)).locate_cell([0.1, 0.2])


def test_expand_limits():
    grid = make_grid(d=1)
    grid.expand_limits([1.5])
    assert grid.limits.high.tolist() == [1.5]
    grid.expand_limits([0.5])
    assert grid.limits.low.tolist() == [0.0]
    assert grid.limits.high.tolist() == [1.5]

    grid = Grid(GridConfig(d=2, bins_per_dim=10), DimensionLimits.from_bounds([3, -3], [7, 3]))
    grid.expand_limits([8, -4])
    assert grid.limits.low.tolist() == [3, -4]
    assert grid.limits.high.tolist() == [8, 3]


def test_degenerate_limits_open_by_epsilon():
    limits = DimensionLimits(2)
    limits.expand(np.array([0.5, 1.0]))
    limits.expand(np.array([0.5, 2.0]))
    limits.open_degenerate()
    assert limits.low[0] < 0.5 < limits.high[0]
    assert limits.high[0] - limits.low[0] == pytest.approx(2e-9)
    assert limits.low[1] == 1.0 and limits.high[1] == 2.0


def test_von_neumann_neighbors():
    grid = make_grid()
    assert sorted(grid.neighbors((5, 5), 1)) == [(4, 5), (5, 4), (5, 6), (6, 5)]
    assert sorted(grid.neighbors((0, 0), 1)) == [(0, 1), (1, 0)]
    assert len(grid.neighbors((5, 5), 2)) == 12
    # lexicographic order of offsets
    assert grid.neighbors((5, 5), 1) == sorted(grid.neighbors((5, 5), 1))


def test_interior_cells_have_two_d_neighbors():
    for d in (1, 2, 3, 4):
        assert len(manhattan_offsets(d, 1)) == 2 * d


def test_majority_vote():
    assert majority_vote([0, 1, 1, 0, 1]) == 1
    assert majority_vote([0, 1], current=0) == 0
    assert majority_vote([0, 1], current=1) == 1
    assert majority_vote([]) is None
    assert majority_vote([UNASSIGNED, None]) is None
    # tie without a tied current state: first label of the alphabet
    assert majority_vote([0, 1]) == 0
    assert majority_vote([0, 1], alphabet=(1, 0)) == 1
    assert majority_vote([0, 1, 2, 2], current=0, alphabet=(0, 1, 2)) == 2


# every ordering of a two-label tie resolves to the most recent hit
def test_modal_label_ties_go_to_most_recent():
    assert modal_label([1, 1, 0]) == 1
    assert modal_label([]) is None
    for history in set(itertools.permutations([0, 0, 1, 1])):
        assert modal_label(list(history)) == history[-1]


def test_record_hit_and_resolve_states():
    grid = make_grid(bins=3)
    grid.record_hit((0, 0), 1)
    assert grid.hit_history((0, 0)) == [1]
    grid.record_hit((1, 1), 0).record_hit((1, 1), 1).record_hit((1, 1), 1)
    assert grid.hit_history((1, 1)) == [0, 1, 1]
    grid.record_hit((2, 2), 0).record_hit((2, 2), 1)
    grid.resolve_states()
    assert grid.state((1, 1)) == 1
    assert grid.state((2, 2)) == 1
    assert grid.state((0, 1)) is None


def test_record_mutation_must_move_forward():
    grid = make_grid()
    grid.record_mutation((1, 1), 10)
    grid.record_mutation((1, 1), 12)
    assert grid.mutation_times((1, 1)) == [10, 12]
    with pytest.raises(ValueError):
        grid.record_mutation((1, 1), 12)


def test_evolve_single_seed_floods_in_two_generations():
    grid = make_grid(bins=3)
    grid.set_state((1, 1), 1)
    assert grid.evolve_until_full(1) == 2
    assert (grid.states == 1).all()


def test_evolve_one_dimensional_in_one_generation():
    grid = make_grid(d=1, bins=4)
    grid.set_state((1,), 0)
    grid.set_state((2,), 1)
    assert grid.evolve_until_full(1) == 1
    assert grid.states.tolist() == [0, 0, 1, 1]


def test_evolve_full_grid_is_a_fixed_point():
    grid = make_grid(bins=3)
    grid.states[...] = 1
    before = grid.states.copy()
    assert grid.evolve_until_full(1) == 0
    assert (grid.states == before).all()


def test_evolve_rejects_empty_grid():
    with pytest.raises(ValueError):
        make_grid(bins=3).evolve_until_full(1)


def test_assigned_cells_never_change_during_fill():
    grid = make_grid(bins=5)
    grid.set_state((0, 0), 0)
    grid.set_state((0, 1), 1)
    grid.set_state((1, 0), 1)
    grid.evolve_until_full(1)
    assert grid.state((0, 0)) == 0


def test_rule_at_matches_step():
    grid = make_grid(bins=5)
    grid.set_state((2, 1), 1)
    grid.set_state((2, 3), 1)
    grid.set_state((1, 2), 0)
    expected = grid.rule_at((2, 2), 1)
    grid.step(1)
    assert grid.state((2, 2)) == expected == 1


# A perturbation outside the radius ball never changes a cell's update
def test_step_is_local(rng):
    for _ in range(50):
        grid = make_grid(bins=7)
        grid.states[...] = rng.choice([UNASSIGNED, 0, 1], size=grid.shape)
        grid.states[3, 3] = UNASSIGNED
        twin = make_grid(bins=7)
        twin.states = grid.states.copy()
        far = [c for c in np.ndindex(7, 7) if abs(c[0] - 3) + abs(c[1] - 3) > 1]
        for coords in far:
            twin.states[coords] = rng.choice([UNASSIGNED, 0, 1])
        grid.step(1)
        twin.step(1)
        assert grid.state((3, 3)) == twin.state((3, 3))


def test_step_is_translation_invariant():
    grid = make_grid(bins=9)
    grid.set_state((2, 2), 1)
    grid.set_state((2, 3), 0)
    moved = make_grid(bins=9)
    moved.set_state((5, 4), 1)
    moved.set_state((5, 5), 0)
    grid.step(1)
    moved.step(1)
    assert (grid.states[1:4, 1:5] == moved.states[4:7, 3:7]).all()


# Synchronous generation equals the copy-then-update oracle on random small grids
def test_step_matches_copy_then_update_oracle(rng):
    for _ in range(200):
        d = int(rng.integers(1, 4))
        bins = int(rng.integers(2, 6))
        radius = int(rng.integers(1, 3))
        grid = make_grid(d=d, bins=bins)
        grid.states[...] = rng.choice(
            [UNASSIGNED, 0, 1], size=grid.shape, p=[0.6, 0.2, 0.2]
        )
        if grid.is_full or grid.unassigned_count == grid.config.n_cells:
            grid.states[(0,) * d] = 1
            grid.states[(bins - 1,) * d] = UNASSIGNED
        expected = oracle_step(grid, radius)
        grid.step(radius)
        assert (grid.states == expected).all()

        grid.evolve_until_full(radius)
        assert grid.unassigned_count == 0

        coords = tuple(int(c) for c in rng.integers(0, bins, size=d))
        assert sorted(grid.neighbors(coords, radius)) == brute_force_neighbors(coords, radius, bins)


def test_cells_cover_the_whole_grid():
    grid = make_grid(d=3, bins=3)
    cells = list(grid.cells())
    assert len(cells) == 27
    assert len({cell.coords for cell in cells}) == 27


def mixed_grid(levels=(2, None, 3), bins=10):
    limits = DimensionLimits.from_bounds([0.0, 0.0, 0.0], [1.0, 1.0, 2.0])
    return Grid(GridConfig(d=3, bins_per_dim=bins, levels=levels, radius=1), limits)


def test_categorical_axes_get_one_bin_per_level():
    grid = mixed_grid()
    assert grid.shape == (2, 10, 3)
    assert grid.config.n_cells == 60
    assert grid.config.categorical == (True, False, True)
    with pytest.raises(ValueError):
        GridConfig(d=2, bins_per_dim=10, levels=(3,))
    with pytest.raises(ValueError):
        GridConfig(d=2, bins_per_dim=10, levels=(1, None))


# every level of a categorical axis lands in its own, adjacent bin
def test_categorical_levels_snap_to_adjacent_bins():
    grid = mixed_grid()
    assert [grid.locate_cell([0.0, 0.5, level])[2] for level in (0.0, 1.0, 2.0)] == [0, 1, 2]
    assert grid.locate_cell([1.0, 0.05, 1.0]) == (1, 0, 1)
    assert grid.locate_cell([0.0, 1.0, 2.0]) == (0, 9, 2)
    # three levels spread over ten numeric bins are three bins apart or more
    numeric = Grid(GridConfig(d=1, bins_per_dim=10), DimensionLimits.from_bounds([0.0], [2.0]))
    assert [numeric.locate_cell([level])[0] for level in (0.0, 1.0, 2.0)] == [0, 5, 9]


def test_neighbors_respect_per_axis_bounds():
    grid = mixed_grid()
    assert set(grid.neighbors((1, 9, 2), 1)) == {(0, 9, 2), (1, 8, 2), (1, 9, 1)}
    assert all(grid.in_bounds(n) for n in grid.neighbors((0, 5, 1), 2))
    assert not grid.in_bounds((2, 0, 0))
    assert grid.in_bounds((1, 9, 2))


def test_step_on_categorical_grid_matches_the_oracle():
    grid = mixed_grid()
    grid.set_state((0, 0, 0), 0)
    grid.set_state((1, 9, 2), 1)
    expected = oracle_step(grid, 1)
    grid.step(1)
    assert (grid.states == expected).all()
    grid.evolve_until_full(1)
    assert grid.is_full
