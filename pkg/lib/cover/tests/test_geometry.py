from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from lib.cover.errors import CoincidentLines, CoincidentPoints, PointOffLine
from lib.cover.geometry import (
    HomogeneousPoint,
    ProjectiveLine,
    chart_of,
    chart_scale,
    derive_seed,
    intersect,
    is_infinite,
    line_through,
    param_of_point,
)

if TYPE_CHECKING:
    from lib.cover.geometry import LineChart


@pytest.fixture
def chart(general_line: ProjectiveLine) -> LineChart:
    """A seeded chart on the general line."""
    return chart_of(general_line, seed=11)


class TestHomogeneousPoint:
    """Tests for normalized projective points."""

    def test_normalizes_largest_coordinate_to_one(self):
        """(2 : 4 : 1) is stored as (0.5 : 1 : 0.25)."""
        point = HomogeneousPoint.of(2, 4, 1)
        assert point.coords == (0.5, 1.0, 0.25)

    def test_scaled_representatives_are_equal(self):
        """Nonzero complex multiples describe the same point."""
        p = HomogeneousPoint.of(1, 2j, 3)
        q = HomogeneousPoint.of(-2j, 4, -6j)
        assert p.same_as(q)

    def test_zero_triple_is_rejected(self):
        """(0 : 0 : 0) is not a point."""
        with pytest.raises(ValueError, match="nonzero"):
            HomogeneousPoint.of(0, 0, 0)

    def test_accepts_pairs_from_json(self):
        """Coordinates may arrive as [re, im] pairs."""
        point = HomogeneousPoint.model_validate({"coords": [[1, 0], [0, 1], [0.5, 0]]})
        assert point.coords == (1.0, 1j, 0.5)


class TestIncidence:
    """Tests for joins and intersections."""

    def test_line_through_two_points(self):
        """The points (1:0:0) and (0:1:0) span z = 0."""
        line = line_through(HomogeneousPoint.of(1, 0, 0), HomogeneousPoint.of(0, 1, 0))
        assert line.same_as(ProjectiveLine.of(0, 0, 1))

    def test_line_through_coincident_points_raises(self):
        """A repeated point does not determine a line."""
        p = HomogeneousPoint.of(1, 1, 1)
        with pytest.raises(CoincidentPoints, match="coincide"):
            line_through(p, HomogeneousPoint.of(2, 2, 2))

    def test_intersection_lies_on_both_lines(self, general_line: ProjectiveLine):
        """intersect returns a common point."""
        other = ProjectiveLine.of(0.3, -1.0, 2.0j)
        point = intersect(general_line, other)
        assert general_line.contains(point)
        assert other.contains(point)

    def test_intersect_coincident_lines_raises(self):
        """A line does not meet itself in a single point."""
        line = ProjectiveLine.of(1, 2, 3)
        with pytest.raises(CoincidentLines):
            intersect(line, ProjectiveLine.of(2, 4, 6))


class TestLineChart:
    """Tests for seeded line charts."""

    def test_same_seed_gives_same_chart(self, general_line: ProjectiveLine, chart: LineChart):
        """Charts are reproducible."""
        assert chart_of(general_line, seed=11) == chart

    def test_different_seeds_give_different_charts(self, general_line: ProjectiveLine, chart: LineChart):
        """A new seed redraws the chart."""
        assert chart_of(general_line, seed=12) != chart

    def test_chart_points_lie_on_line(self, general_line: ProjectiveLine, chart: LineChart):
        """Every parameter maps onto the line."""
        for t in (0.0, 1.0, -2.5 + 0.3j, 100.0j):
            assert general_line.contains(chart(t), 1e-9)

    def test_param_of_point_inverts_chart(self, chart: LineChart):
        """param_of_point(chart(t)) recovers t."""
        for t in (0.0, 0.7 - 0.2j, 5.0 + 3.0j):
            assert param_of_point(chart, chart(t)) == pytest.approx(t, abs=1e-9)

    def test_direction_is_at_infinity(self, chart: LineChart):
        """The chart direction has parameter infinity."""
        assert is_infinite(param_of_point(chart, chart.direction))

    def test_point_off_line_raises(self, chart: LineChart, origin: HomogeneousPoint):
        """Parameters exist only for points of the line."""
        with pytest.raises(PointOffLine, match="not on line"):
            param_of_point(chart, origin)

    def test_chart_scale_relates_representatives(self, chart: LineChart):
        """chart.vector_at(t) equals the scale times the normalized point."""
        t = 0.4 + 1.1j
        point = chart(t)
        scale = chart_scale(chart, t, point)
        np.testing.assert_allclose(chart.vector_at(t), scale * point.vector, atol=1e-12)


class TestDeriveSeed:
    """Tests for seed derivation."""

    def test_is_deterministic(self):
        """The same keys give the same seed."""
        assert derive_seed(5, 1, 2) == derive_seed(5, 1, 2)

    def test_keys_separate_streams(self):
        """Different keys give different seeds."""
        assert len({derive_seed(5), derive_seed(5, 0), derive_seed(5, 1), derive_seed(6, 0)}) == 4

    def test_trailing_zero_keys_are_significant(self):
        """Appending zero keys changes the seed."""
        assert derive_seed(5) != derive_seed(5, 0)
        assert derive_seed(5, 0) != derive_seed(5, 0, 0)
        assert derive_seed(0) != derive_seed(0, 0)

    def test_fits_in_63_bits(self):
        """Derived seeds are nonnegative Python ints below 2^63."""
        seed = derive_seed(2**40, 7)
        assert 0 <= seed < 2**63
