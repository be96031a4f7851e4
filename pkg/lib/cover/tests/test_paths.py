from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import pytest

from lib.cover.errors import DegenerateGeometry
from lib.cover.monodromy import phase_ordered
from lib.cover.paths import ArcSegment, LineSegment, circle_plan, fiber_roots, plan_path, track


@dataclass(frozen=True)
class MonomialBranch:
    """The cover s^m = t^power with a single branch point at 0 (none for power 0)."""

    m: int
    power: int
    base_param: complex = 1.0 + 0j
    clearance: float = 0.2

    @property
    def base_fiber(self) -> np.ndarray:
        return phase_ordered(fiber_roots(self.value(self.base_param), self.m))

    @property
    def branch_params(self) -> np.ndarray:
        return np.array([0j] if self.power else [], dtype=complex)

    def value(self, t: complex) -> complex:
        return complex(t) ** self.power

    def log_derivative(self, t: complex) -> complex:
        return self.power / t if self.power else 0j

    def distance_to_branch(self, t: complex) -> float:
        return abs(t) if self.power else math.inf


def loop_shift(data: MonomialBranch) -> np.ndarray:
    """Ratio of the sheet values after one loop around 0 to those before."""
    after = track(data, circle_plan(0j, abs(data.base_param), cmath.phase(data.base_param))).values
    return after / data.base_fiber


class TestPlanPath:
    """Tests for path planning around branch points."""

    def test_straight_segment_when_nothing_blocks(self):
        """A path away from every branch point is one segment."""
        data = MonomialBranch(m=2, power=1, base_param=1.0 + 1.0j)
        plan = plan_path(data, 3.0 + 1.0j)
        assert plan.segments == (LineSegment(1.0 + 1.0j, 3.0 + 1.0j),)

    def test_detour_passes_on_the_left(self):
        """A branch point on the segment is bypassed by an arc to the left."""
        data = MonomialBranch(m=2, power=1, base_param=-1.0 + 0j)
        plan = plan_path(data, 1.0 + 0j)
        kinds = [type(segment) for segment in plan.segments]
        assert kinds == [LineSegment, ArcSegment, LineSegment]
        arc = plan.segments[1]
        assert arc.radius == pytest.approx(0.18)
        assert arc.point(0.5).imag > 0
        assert plan.segments[0].end == pytest.approx(arc.start)
        assert plan.segments[2].start == pytest.approx(arc.end)

    def test_target_at_base_gives_empty_plan(self):
        """No segments are needed to stay put."""
        data = MonomialBranch(m=2, power=1)
        assert plan_path(data, data.base_param).segments == ()

    def test_endpoint_on_branch_point_raises(self):
        """Paths cannot end on a branch point."""
        data = MonomialBranch(m=2, power=1)
        with pytest.raises(DegenerateGeometry, match="clearance"):
            plan_path(data, 1e-12 + 0j)


class TestTrack:
    """Tests for sheet continuation."""

    def test_fiber_roots_are_mth_roots(self):
        """Every fiber value raised to m gives q."""
        roots = fiber_roots(2.0 - 1.0j, 5)
        np.testing.assert_allclose(roots**5, np.full(5, 2.0 - 1.0j), rtol=1e-12)

    def test_constant_cover_transports_trivially(self):
        """Without branch points a loop returns every sheet to itself."""
        np.testing.assert_allclose(loop_shift(MonomialBranch(m=3, power=0)), np.ones(3), atol=1e-9)

    def test_square_root_swaps_sheets(self):
        """s^2 = t: a loop around 0 multiplies each sheet by -1."""
        np.testing.assert_allclose(loop_shift(MonomialBranch(m=2, power=1)), -np.ones(2), atol=1e-9)

    def test_double_point_shifts_by_two(self):
        """s^4 = t^2: a loop around 0 multiplies each sheet by i^2."""
        np.testing.assert_allclose(loop_shift(MonomialBranch(m=4, power=2)), -np.ones(4), atol=1e-9)

    def test_transport_lands_on_target_fiber(self):
        """Tracked values solve s^m = q at the end of the path."""
        data = MonomialBranch(m=3, power=1)
        transport = track(data, plan_path(data, -2.0 + 0.5j))
        np.testing.assert_allclose(transport.values**3, np.full(3, -2.0 + 0.5j), rtol=1e-9)
        assert transport.steps > 0
        assert transport.max_residual <= 1e-9


class TestPathIndependence:
    """Transport depends only on the homotopy class of the path."""

    @staticmethod
    def via(data: MonomialBranch, waypoint: complex, target: complex) -> np.ndarray:
        first = track(data, plan_path(data, waypoint))
        return track(data, plan_path(data, target, start=waypoint), start_values=first.values).values

    def test_homotopic_paths_agree(self):
        """Going straight or via 1 + i, both on the same side of 0, gives the same sheets."""
        data = MonomialBranch(m=3, power=1)
        target = -1.0 + 1.0j
        direct = track(data, plan_path(data, target)).values
        np.testing.assert_allclose(self.via(data, 1.0 + 1.0j, target), direct, atol=1e-9)

    def test_paths_around_the_branch_point_differ_by_a_root_of_unity(self):
        """Passing below 0 instead of above relabels every sheet by the same cube root of unity."""
        data = MonomialBranch(m=3, power=1)
        target = -1.0 + 1.0j
        direct = track(data, plan_path(data, target)).values
        ratio = self.via(data, -1.0 - 1.0j, target) / direct
        np.testing.assert_allclose(ratio, np.full(3, ratio[0]), atol=1e-9)
        assert ratio[0] ** 3 == pytest.approx(1.0, abs=1e-9)
        assert abs(ratio[0] - 1.0) > 0.5
