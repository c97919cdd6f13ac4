"""Metric validation, covers, multiplicity, bump partitions."""

import itertools

import numpy as np
import pytest

from coarseqm.exceptions import EmptyBox, MetricValidationError, NotACover
from coarseqm.metric import (
    bump_partition,
    find_violations,
    grid_cover,
    grid_space,
    lipschitz_const,
    r_multiplicity,
    validate_metric,
)
from conftest import line013


def test_validate_line_ok():
    space = validate_metric([[0.0, 1, 3], [1, 0, 2], [3, 2, 0]])
    assert space.n == 3
    assert space.scale == 3.0


def test_validate_asymmetry():
    with pytest.raises(MetricValidationError) as exc:
        validate_metric([[0.0, 1.0], [2.0, 0.0]])
    kinds = {v.kind for v in exc.value.violations}
    assert "asymmetry" in kinds


def test_validate_triangle_violation():
    vs = find_violations([[0.0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert any(v.kind == "triangle" and v.points == (0, 1, 2) for v in vs)


def test_validate_collects_everything():
    vs = find_violations([[0.0, -1.0], [-1.0, 0.0]])
    assert any(v.kind == "negative" for v in vs)
    vs = find_violations([[0.0, 0.0], [0.0, 0.0]])
    assert any(v.kind == "duplicate" for v in vs)
    vs = find_violations([[1.0, 1.0], [1.0, 0.0]])
    assert any(v.kind == "nonzero_diagonal" for v in vs)


def test_lipschitz_const_examples():
    space = line013()
    assert lipschitz_const([0.0, 1.0, 3.0], space) == pytest.approx(1.0)
    assert lipschitz_const([5.0, 5.0, 5.0], space) == 0.0
    two = validate_metric([[0.0, 1.0], [1.0, 0.0]])
    assert lipschitz_const([0.0, 2.0], two) == pytest.approx(2.0)


# ------------------------------------------------------------------ covers


def test_multiplicity_single_set():
    space = line013()
    cover = grid_cover([(0, 5)], 10.0)
    sp = grid_space([(0, 5)])
    assert r_multiplicity(cover, sp, 2.0) == 1


def test_multiplicity_blocks_enumeration_oracle():
    bounds = [(0, 29)]
    space = grid_space(bounds)
    sets = (tuple(range(0, 10)), tuple(range(10, 20)), tuple(range(20, 30)))
    from coarseqm.metric import Cover

    cover = Cover(sets, (0, 1, 0), diam_bound=9.0, separation=2.0)
    got = r_multiplicity(cover, space, 2.0)
    # oracle: direct enumeration of ball intersections
    oracle = 0
    for x in range(space.n):
        ball = {y for y in range(space.n) if space.dist[x, y] <= 2.0}
        oracle = max(oracle, sum(1 for s in sets if ball & set(s)))
    assert got == oracle == 2


def test_multiplicity_far_sets():
    dist = np.array([[0.0, 1, 100, 101], [1, 0, 99, 100],
                     [100, 99, 0, 1], [101, 100, 1, 0]])
    space = validate_metric(dist)
    from coarseqm.metric import Cover

    cover = Cover(((0, 1), (2, 3)), (0, 1), diam_bound=1.0, separation=1.0)
    assert r_multiplicity(cover, space, 1.0) == 1


def test_grid_cover_properties_1d():
    bounds = [(0, 99)]
    space = grid_space(bounds)
    cover = grid_cover(bounds, 5.0)
    cover.check(space)  # includes exhaustive same-color separation
    # same-color classes more than R apart
    for color in range(cover.n_colors):
        members = cover.color_class(color)
        for a, b in itertools.combinations(members, 2):
            assert space.set_distance(a, b) > 5.0
    assert r_multiplicity(cover, space, 5.0) <= 2


def test_grid_cover_single_block_when_radius_huge():
    cover = grid_cover([(0, 9)], 50.0)
    assert len(cover.sets) == 1
    assert r_multiplicity(cover, grid_space([(0, 9)]), 50.0) == 1


def test_grid_cover_2d_multiplicity_oracle():
    bounds = [(0, 19), (0, 19)]
    space = grid_space(bounds)
    cover = grid_cover(bounds, 3.0)
    assert r_multiplicity(cover, space, 3.0) <= 4


def test_grid_cover_empty_box():
    with pytest.raises(EmptyBox):
        grid_space([(3, 2)])


# ------------------------------------------------------------------ bumps


def test_bump_partition_single_set():
    bounds = [(0, 9)]
    space = grid_space(bounds)
    cover = grid_cover(bounds, 50.0)
    fam = bump_partition(space, cover, 50.0)
    np.testing.assert_allclose(fam.normalized[0], 1.0)


def test_bump_partition_sums_to_one():
    bounds = [(0, 49)]
    space = grid_space(bounds)
    cover = grid_cover(bounds, 6.0)
    fam = bump_partition(space, cover, 6.0)
    total = fam.normalized.sum(axis=0)
    assert np.max(np.abs(total - 1.0)) <= 1e-12
    assert np.min(fam.normalized) >= 0.0
    assert np.max(fam.normalized) <= 1.0


def test_bump_lipschitz_bound_via_oracle():
    bounds = [(0, 39)]
    space = grid_space(bounds)
    cover = grid_cover(bounds, 4.0)
    fam = bump_partition(space, cover, 4.0)
    for j in range(fam.raw.shape[0]):
        assert lipschitz_const(fam.raw[j], space) <= 4.0 / 4.0 + 1e-12
        # each raw bump is 1 on its set and vanishes off the R/4 hull
        for x in cover.sets[j]:
            assert fam.raw[j][x] == 1.0
    assert fam.raw_lipschitz == tuple(lipschitz_const(fam.raw[j], space)
                                      for j in range(fam.raw.shape[0]))


def test_bump_supports_disjoint_when_gap_large():
    # two singleton blocks far apart: raw supports must not meet
    dist = np.abs(np.subtract.outer([0.0, 1, 20, 21], [0.0, 1, 20, 21]))
    space = validate_metric(dist)
    from coarseqm.metric import Cover

    cover = Cover(((0, 1), (2, 3)), (0, 1), diam_bound=1.0, separation=4.0)
    fam = bump_partition(space, cover, 4.0)
    s0, s1 = set(fam.supports[0]), set(fam.supports[1])
    assert not (s0 & s1)


def test_bump_partition_requires_cover():
    bounds = [(0, 9)]
    space = grid_space(bounds)
    from coarseqm.metric import Cover

    with pytest.raises(NotACover):
        partial = Cover(((0, 1, 2),), (0,), diam_bound=2.0, separation=1.0)
        bump_partition(space, partial, 2.0)
