from __future__ import annotations

import pytest

from lib.cover.errors import ConfigInvalid, IntersectionOnBranchLocus, LineInsideBranchDivisor, MonodromyMismatch
from lib.cover.fermat import ArtalFamilyConfig, FermatTangentIndex, artal_cover, fermat_form, tangent_line
from lib.cover.geometry import HomogeneousPoint, ProjectiveLine, intersect
from lib.cover.monodromy import (
    WeightedBranchDivisor,
    component_data,
    local_monodromy,
    monodromy_at_infinity,
    offset_at,
    orbit_count,
    splitting_count,
)
from lib.cover.polynomials import TrivariateForm
from schemas.tolerances import Tolerances


@pytest.fixture
def quartic_cover() -> WeightedBranchDivisor:
    """The 4-fold cover branched along B_{4,2}."""
    return artal_cover(ArtalFamilyConfig.with_j(4, 2, seed=7))


@pytest.fixture
def squared_conic_cover(conic: TrivariateForm) -> WeightedBranchDivisor:
    """The 4-fold cover branched along a conic with weight 2."""
    return WeightedBranchDivisor(m=4, parts=((conic, 2),))


@pytest.fixture
def fermat_cubic_cover() -> WeightedBranchDivisor:
    """The 3-fold cover branched along the Fermat cubic."""
    return WeightedBranchDivisor.single(fermat_form(3))


class TestWeightedBranchDivisor:
    """Tests for cover validation."""

    def test_cover_degree_at_least_two(self, conic: TrivariateForm):
        """m = 1 is not a cover."""
        with pytest.raises(ConfigInvalid, match="at least 2"):
            WeightedBranchDivisor(m=1, parts=((conic, 1),))

    def test_weights_below_m(self, conic: TrivariateForm):
        """A weight equal to m is rejected."""
        with pytest.raises(ConfigInvalid) as excinfo:
            WeightedBranchDivisor(m=2, parts=((conic, 2),))
        assert excinfo.value.reason == ConfigInvalid.BAD_WEIGHT

    def test_weighted_degree_divisible_by_m(self, conic: TrivariateForm):
        """A conic cannot be the branch curve of a triple cover."""
        with pytest.raises(ConfigInvalid, match="divisible"):
            WeightedBranchDivisor.single(conic, m=3)

    def test_product_form(self, squared_conic_cover: WeightedBranchDivisor):
        """F is the weighted product and n its degree over m."""
        assert squared_conic_cover.F.degree == 4
        assert squared_conic_cover.n == 1


class TestComponentData:
    """Tests for branch data over a line."""

    def test_tangent_line_has_one_total_branch_point(self, quartic_cover: WeightedBranchDivisor):
        """A total tangent of B_{4,2} meets it in one point of multiplicity 4."""
        data = component_data(quartic_cover, tangent_line(FermatTangentIndex(mu=2, family=1, j=1)), seed=0)
        assert data.weights == (4,)
        assert data.infinity_weight == 0
        assert splitting_count(data) == 4
        assert local_monodromy(data, 0) == (0, 1, 2, 3)

    def test_generic_line_has_simple_branch_points(self, quartic_cover: WeightedBranchDivisor, general_line: ProjectiveLine):
        """A generic line meets the quartic in four simple points, each a 4-cycle."""
        data = component_data(quartic_cover, general_line, seed=3)
        assert data.weights == (1, 1, 1, 1)
        assert splitting_count(data) == 1
        assert all(local_monodromy(data, index) == (1, 2, 3, 0) for index in range(4))
        assert monodromy_at_infinity(data) == (0, 1, 2, 3)

    def test_weight_two_part_doubles_multiplicities(self, squared_conic_cover: WeightedBranchDivisor, general_line: ProjectiveLine):
        """A conic of weight 2 gives two branch points with I_P = 2."""
        data = component_data(squared_conic_cover, general_line, seed=5)
        assert data.weights == (2, 2)
        assert splitting_count(data) == 2
        assert local_monodromy(data, 0) == (2, 3, 0, 1)

    def test_base_fiber_solves_the_cover_equation(self, quartic_cover: WeightedBranchDivisor, general_line: ProjectiveLine):
        """Base fiber values are m-th roots of q at the base parameter."""
        data = component_data(quartic_cover, general_line, seed=3)
        assert data.base_fiber.size == 4
        for value in data.base_fiber:
            assert value**4 == pytest.approx(data.value(data.base_param), rel=1e-9)

    def test_loop_check_uses_match_tol(self, quartic_cover: WeightedBranchDivisor, general_line: ProjectiveLine):
        """A match tolerance below rounding level rejects every tracked loop."""
        data = component_data(quartic_cover, general_line, seed=3)
        assert local_monodromy(data, 0, Tolerances(match_tol=1e-6)) == (1, 2, 3, 0)
        with pytest.raises(MonodromyMismatch, match="cyclic shift"):
            local_monodromy(data, 0, Tolerances(match_tol=1e-30))

    def test_same_seed_same_data(self, quartic_cover: WeightedBranchDivisor, general_line: ProjectiveLine):
        """Component data is deterministic in the seed."""
        first = component_data(quartic_cover, general_line, seed=9)
        second = component_data(quartic_cover, general_line, seed=9)
        assert first.chart == second.chart
        assert first.base_param == second.base_param
        assert first.branch_points == second.branch_points

    def test_line_inside_branch_curve_raises(self):
        """The line x = 0 lies in x y = 0."""
        cover = WeightedBranchDivisor.single(TrivariateForm.from_monomials(2, {(1, 1, 0): 1.0}))
        with pytest.raises(LineInsideBranchDivisor, match="component"):
            component_data(cover, ProjectiveLine.of(1, 0, 0), seed=0)


class TestOrbits:
    """Tests for orbit and splitting counts."""

    @pytest.mark.parametrize(
        ("m", "permutations", "expected"),
        [
            (4, [(1, 2, 3, 0)], 1),
            (4, [(2, 3, 0, 1)], 2),
            (4, [(2, 3, 0, 1), (1, 2, 3, 0)], 1),
            (3, [], 3),
        ],
    )
    def test_orbit_count(self, m: int, permutations: list[tuple[int, ...]], expected: int):
        """Orbits of cyclic shifts."""
        assert orbit_count(m, permutations) == expected

    def test_tracked_orbits_must_match_gcd(self, quartic_cover: WeightedBranchDivisor, general_line: ProjectiveLine):
        """An identity monodromy contradicts simple branch points."""
        data = component_data(quartic_cover, general_line, seed=3)
        with pytest.raises(MonodromyMismatch, match="differs"):
            splitting_count(data, [(0, 1, 2, 3)])


class TestOffsets:
    """Tests for sheet offsets over intersection points."""

    @pytest.mark.parametrize("cover_fixture", ["quartic_cover", "fermat_cubic_cover"])
    def test_offsets_are_antisymmetric(self, cover_fixture: str, general_line: ProjectiveLine, request: pytest.FixtureRequest):
        """Swapping the two lines negates the offset and inverts the matching (m = 3, 4)."""
        cover = request.getfixturevalue(cover_fixture)
        other = ProjectiveLine.of(0.4, -1.0, 0.3 + 0.2j)
        point = intersect(general_line, other)
        data_a = component_data(cover, general_line, seed=1, avoid=[point])
        data_b = component_data(cover, other, seed=2, avoid=[point])
        forward = offset_at(data_a, data_b, cover, point)
        backward = offset_at(data_b, data_a, cover, point)
        assert cover.m >= 3
        assert (forward.offset + backward.offset) % cover.m == 0
        assert [backward.matching[forward.matching[r]] for r in range(cover.m)] == list(range(cover.m))
        assert forward.point == point

    def test_point_on_branch_curve_raises(self, double_conic_cover: WeightedBranchDivisor):
        """Fibers over the branch curve collapse and cannot be matched."""
        first, second = ProjectiveLine.of(0, 1, 0), ProjectiveLine.of(1, 0, -1)
        point = intersect(first, second)
        assert point.same_as(HomogeneousPoint.of(1, 0, 1))
        data_a = component_data(double_conic_cover, first, seed=1)
        data_b = component_data(double_conic_cover, second, seed=2)
        with pytest.raises(IntersectionOnBranchLocus, match="branch curve"):
            offset_at(data_a, data_b, double_conic_cover, point)
