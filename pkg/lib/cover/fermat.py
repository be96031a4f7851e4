"""Fermat curves, their total inflection tangents and Artal branch curves.

For h = x^mu + y^mu + z^mu and w = zeta^(2j-1) with zeta = exp(pi i / mu),
the points (1 : w : 0), (0 : 1 : w), (w : 0 : 1) are total inflection points
of h = 0 with tangents wx - y, wy - z and wz - x (families 1, 2, 3). The
branch curve of degree b = mu * nu is F = f_1 f_2 f_3 g + h^nu, where f_i
are three tangents from distinct families and g is a seeded form of
degree b - 3.
"""

from __future__ import annotations

import cmath
import logging
import math
from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lib.cover.connectivity import Arrangement
from lib.cover.disjoint_set import DisjointSet
from lib.cover.errors import CoincidentLines, ConfigInvalid
from lib.cover.geometry import (
    HomogeneousPoint,
    ProjectiveLine,
    chart_of,
    derive_seed,
    intersect,
    is_infinite,
    line_through,
    param_of_point,
)
from lib.cover.monodromy import WeightedBranchDivisor
from lib.cover.polynomials import (
    TrivariateForm,
    gradient,
    multiply,
    power,
    restrict_to_line,
    roots_with_multiplicity,
)
from schemas.reports import ArtalValidityReport
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

FAMILIES = (1, 2, 3)
# Spot-check samples lie on lines through points this far from a tangency.
SAMPLE_RADIUS = 0.05
CONCURRENCY_EPS = 1e-9


def zeta_power(mu: int, k: int) -> complex:
    """exp(pi i k / mu), a 2mu-th root of unity, with k reduced mod 2mu first."""
    return cmath.exp(1j * math.pi * (k % (2 * mu)) / mu)


class FermatTangentIndex(BaseModel):
    """The tangent L_{family, j} at the j-th total inflection point of family ``family``."""

    model_config = ConfigDict(frozen=True)

    mu: int = Field(..., ge=2)
    family: int = Field(..., ge=1, le=3)
    j: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check_j(self) -> FermatTangentIndex:
        if self.j > self.mu:
            msg = f"j must lie in 1..{self.mu}, got {self.j}"
            raise ValueError(msg)
        return self

    @property
    def root(self) -> complex:
        """zeta_{2mu}^(2j - 1)."""
        return zeta_power(self.mu, 2 * self.j - 1)


class ArtalFamilyConfig(BaseModel):
    """Degree, Fermat exponent, seed and tangent triple of one Artal branch curve."""

    model_config = ConfigDict(frozen=True)

    b: int = Field(..., ge=3)
    mu: int = Field(..., ge=2)
    seed: int = Field(default=0, ge=0)
    line_triple: tuple[FermatTangentIndex, FermatTangentIndex, FermatTangentIndex] | None = None
    perturbed: bool = Field(default=True, description="Include the f_1 f_2 f_3 g term; False gives h^nu alone")

    @classmethod
    def with_j(
        cls, b: int, mu: int, j_triple: Sequence[int] | None = None, seed: int = 0, *, perturbed: bool = True
    ) -> ArtalFamilyConfig:
        """Configuration with tangents L_{1,j1}, L_{2,j2}, L_{3,j3} (default j = (1, 1, mu))."""
        triple = None
        if j_triple is not None:
            triple = tuple(FermatTangentIndex(mu=mu, family=family, j=j) for family, j in zip(FAMILIES, j_triple, strict=True))
        return cls(b=b, mu=mu, seed=seed, line_triple=triple, perturbed=perturbed)

    @property
    def nu(self) -> int:
        return self.b // self.mu

    @property
    def indices(self) -> tuple[FermatTangentIndex, FermatTangentIndex, FermatTangentIndex]:
        """The configured tangent triple, defaulting to (1, 1), (2, 1), (3, mu)."""
        if self.line_triple is not None:
            return self.line_triple
        return (
            FermatTangentIndex(mu=self.mu, family=1, j=1),
            FermatTangentIndex(mu=self.mu, family=2, j=1),
            FermatTangentIndex(mu=self.mu, family=3, j=self.mu),
        )

    @property
    def j_triple(self) -> tuple[int, int, int]:
        first, second, third = self.indices
        return (first.j, second.j, third.j)

    def ensure_valid(self) -> None:
        """Check the cross-field constraints.

        Raises:
            ConfigInvalid: If mu does not divide b, the families repeat or an index uses another mu.
        """
        if self.b % self.mu:
            raise ConfigInvalid(ConfigInvalid.NOT_A_MULTIPLE, f"b={self.b}, mu={self.mu}")
        if len({index.family for index in self.indices}) != len(FAMILIES):
            raise ConfigInvalid(ConfigInvalid.REPEATED_FAMILY)
        if any(index.mu != self.mu for index in self.indices):
            raise ConfigInvalid(ConfigInvalid.INDEX_ORDER)


def fermat_form(mu: int) -> TrivariateForm:
    """x^mu + y^mu + z^mu."""
    if mu < 2:  # noqa: PLR2004
        msg = f"Fermat exponent must be at least 2, got {mu}"
        raise ValueError(msg)
    return TrivariateForm.from_monomials(mu, {(mu, 0, 0): 1.0, (0, mu, 0): 1.0, (0, 0, mu): 1.0})


def inflection_point(index: FermatTangentIndex) -> HomogeneousPoint:
    """The j-th total inflection point of the family, e.g. (1 : zeta^(2j-1) : 0) for family 1."""
    w = index.root
    coords = {1: (1.0, w, 0.0), 2: (0.0, 1.0, w), 3: (w, 0.0, 1.0)}[index.family]
    return HomogeneousPoint.of(*coords)


def _tangent_coefficients(index: FermatTangentIndex) -> tuple[complex, complex, complex]:
    w = index.root
    return {1: (w, -1.0, 0.0), 2: (0.0, w, -1.0), 3: (-1.0, 0.0, w)}[index.family]


def tangent_line(index: FermatTangentIndex) -> ProjectiveLine:
    """The tangent at ``inflection_point(index)``; it meets the Fermat curve only there."""
    return ProjectiveLine.of(*_tangent_coefficients(index))


def tangent_form(index: FermatTangentIndex) -> TrivariateForm:
    """The linear form of ``tangent_line(index)``, unnormalized."""
    return TrivariateForm.linear(*_tangent_coefficients(index))


def artal_lines(cfg: ArtalFamilyConfig) -> tuple[ProjectiveLine, ProjectiveLine, ProjectiveLine]:
    """The three tangent lines of the configuration, in family order of ``cfg.indices``."""
    cfg.ensure_valid()
    first, second, third = (tangent_line(index) for index in cfg.indices)
    return (first, second, third)


def random_form(degree: int, seed: int) -> TrivariateForm:
    """A form with coefficients uniform on the complex unit disk.

    Coefficients are drawn from a PCG64 generator in lexicographic monomial
    order (x-exponent descending, then y-exponent descending).
    """
    rng = np.random.default_rng(seed)
    monomials = {}
    for a in range(degree, -1, -1):
        for b in range(degree - a, -1, -1):
            radius, angle = math.sqrt(rng.random()), 2 * math.pi * rng.random()
            monomials[(a, b, degree - a - b)] = cmath.rect(radius, angle)
    return TrivariateForm.from_monomials(degree, monomials)


def artal_branch_curve(cfg: ArtalFamilyConfig) -> TrivariateForm:
    """F = f_1 f_2 f_3 g + h^nu of degree b.

    ``g`` is ``random_form(b - 3, seed)``, or 1 when b = 3.

    Raises:
        ConfigInvalid: If the configuration is inconsistent.
    """
    cfg.ensure_valid()
    fermat_power = power(fermat_form(cfg.mu), cfg.nu)
    if not cfg.perturbed:
        return fermat_power
    tangents = [tangent_form(index) for index in cfg.indices]
    general = TrivariateForm.constant(1.0) if cfg.b == 3 else random_form(cfg.b - 3, cfg.seed)  # noqa: PLR2004
    product = multiply(multiply(multiply(tangents[0], tangents[1]), tangents[2]), general)
    return product.add(fermat_power)


def artal_cover(cfg: ArtalFamilyConfig) -> WeightedBranchDivisor:
    """The b-fold cyclic cover branched along the Artal curve with weight 1."""
    return WeightedBranchDivisor.single(artal_branch_curve(cfg), m=cfg.b)


def artal_arrangement(cfg: ArtalFamilyConfig) -> Arrangement:
    """The three configured tangents inside the cover ``artal_cover(cfg)``."""
    labels = tuple(f"L{index.family},{index.j}" for index in cfg.indices)
    return Arrangement(cover=artal_cover(cfg), components=artal_lines(cfg), labels=labels)


def _tangency(F: TrivariateForm, line: ProjectiveLine, seed: int, tolerances: Tolerances) -> tuple[list[int], HomogeneousPoint | None]:
    """Multiplicities of F on ``line`` (a root at infinity last) and the point of highest contact."""
    chart = chart_of(line, seed)
    q = restrict_to_line(F, chart)
    if q.is_zero:
        return [], None
    clusters = roots_with_multiplicity(
        q, cluster_eps=tolerances.cluster_eps, taylor_noise=tolerances.taylor_noise, max_iter=tolerances.root_max_iter, tol=tolerances.root_tol
    )
    multiplicities = [cluster.multiplicity for cluster in clusters]
    if q.deficiency:
        multiplicities.append(q.deficiency)
    if not clusters or q.deficiency > max(multiplicities[:-1], default=0):
        return multiplicities, chart.direction
    top = max(clusters, key=lambda cluster: cluster.multiplicity)
    return multiplicities, chart(top.center)


def smoothness_spot_check(
    F: TrivariateForm,
    lines: Sequence[ProjectiveLine],
    seed: int,
    samples: int = 20,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[bool, float]:
    """Sample curve points near each tangency and check the gradient there.

    Each sample is a root of F on a random line through a point near the
    tangency. Returns whether every relative gradient size reached
    ``branch_tol`` and the smallest one seen.
    """
    rng = np.random.default_rng(seed)
    scale = max(F.degree, 1) * F.norm()
    smallest = math.inf
    for index, line in enumerate(lines):
        _, touch = _tangency(F, line, derive_seed(seed, index), tolerances)
        if touch is None:
            continue
        for sample in range(samples):
            near = HomogeneousPoint.from_vector(touch.vector + SAMPLE_RADIUS * (rng.standard_normal(3) + 1j * rng.standard_normal(3)))
            far = HomogeneousPoint.from_vector(rng.standard_normal(3) + 1j * rng.standard_normal(3))
            secant = line_through(near, far)
            chart = chart_of(secant, derive_seed(seed, index, sample))
            clusters = roots_with_multiplicity(restrict_to_line(F, chart), tolerances.cluster_eps, tolerances.taylor_noise)
            anchor = param_of_point(chart, near)
            if not clusters or is_infinite(anchor):
                continue
            closest = min(clusters, key=lambda cluster: abs(cluster.center - anchor))
            size = max(abs(g) for g in gradient(F, chart(closest.center))) / scale
            smallest = min(smallest, size)
    passed = smallest >= tolerances.branch_tol
    if not passed:
        logger.warning("[Fermat] Gradient spot check found relative gradient %.3e near a tangency", smallest)
    return passed, smallest


def validate_k_artal(
    B: TrivariateForm,
    lines: Sequence[ProjectiveLine],
    m: int,
    seed: int = 0,
    samples: int = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ArtalValidityReport:
    """Check that ``lines`` are totally tangent to B = 0 in general position.

    Failures are reported, never raised. The gradient spot check runs when
    ``samples`` is positive.
    """
    tangency = [_tangency(B, line, derive_seed(seed, index), tolerances)[0] for index, line in enumerate(lines)]
    totally_tangent = all(entry == [B.degree] for entry in tangency)

    coincident: list[tuple[int, int]] = []
    on_branch: list[tuple[int, int]] = []
    points: dict[tuple[int, int], HomogeneousPoint] = {}
    forest: DisjointSet[int] = DisjointSet(range(len(lines)))
    for i, j in combinations(range(len(lines)), 2):
        try:
            point = intersect(lines[i], lines[j], tolerances.projective_eps)
        except CoincidentLines:
            coincident.append((i, j))
            continue
        points[(i, j)] = point
        if abs(B.evaluate_vector(point.vector)) < tolerances.branch_tol * B.norm():
            on_branch.append((i, j))
        else:
            forest.merge(i, j)
    concurrent = [
        (i, j, k)
        for i, j, k in combinations(range(len(lines)), 3)
        if (i, j) in points and lines[k].contains(points[(i, j)], CONCURRENCY_EPS)
    ]

    smooth, smallest = None, None
    if samples > 0:
        smooth, smallest = smoothness_spot_check(B, lines, seed, samples, tolerances)

    report = ArtalValidityReport(
        degree=B.degree,
        m=m,
        tangency=tangency,
        totally_tangent=totally_tangent,
        coincident_pairs=coincident,
        concurrent_triples=concurrent,
        on_branch_intersections=on_branch,
        complement_connected=forest.class_count == 1,
        degree_divisible=B.degree % m == 0,
        smooth_near_tangency=smooth,
        min_gradient=smallest,
    )
    logger.debug("[Fermat] Validity of %s lines against degree %s: %s", len(lines), B.degree, report.is_valid)
    return report


def validate_artal_family(cfg: ArtalFamilyConfig, samples: int = 20, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ArtalValidityReport:
    """``validate_k_artal`` for a configured Artal curve and its tangent triple."""
    return validate_k_artal(artal_branch_curve(cfg), artal_lines(cfg), cfg.b, seed=cfg.seed, samples=samples, tolerances=tolerances)
