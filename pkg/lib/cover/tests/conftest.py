"""Shared pytest fixtures for the covercount library tests."""

from __future__ import annotations

import pytest

from lib.cover.fermat import ArtalFamilyConfig
from lib.cover.geometry import HomogeneousPoint, ProjectiveLine
from lib.cover.monodromy import WeightedBranchDivisor
from lib.cover.polynomials import TrivariateForm
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances


@pytest.fixture
def tolerances() -> Tolerances:
    """Default tolerances."""
    return DEFAULT_TOLERANCES


@pytest.fixture
def conic() -> TrivariateForm:
    """The smooth conic x^2 + y^2 - z^2."""
    return TrivariateForm.from_monomials(2, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): -1.0})


@pytest.fixture
def general_line() -> ProjectiveLine:
    """A line in general position with respect to the coordinate axes and the conic."""
    return ProjectiveLine.of(1.0, 2.0 + 0.5j, -0.7)


@pytest.fixture
def origin() -> HomogeneousPoint:
    """The point (0 : 0 : 1)."""
    return HomogeneousPoint.of(0, 0, 1)


@pytest.fixture
def double_conic_cover(conic: TrivariateForm) -> WeightedBranchDivisor:
    """The double cover branched along the conic."""
    return WeightedBranchDivisor.single(conic, m=2)


@pytest.fixture
def artal_cubic() -> ArtalFamilyConfig:
    """The Fermat cubic with tangents L_{1,1}, L_{2,1}, L_{3,3}."""
    return ArtalFamilyConfig.with_j(3, 3, seed=0)


@pytest.fixture
def artal_quartic_pair() -> tuple[ArtalFamilyConfig, ArtalFamilyConfig]:
    """The two Artal quartics B_{4,2} and B_{4,4}."""
    return ArtalFamilyConfig.with_j(4, 2, seed=1), ArtalFamilyConfig.with_j(4, 4, seed=1)
