"""Cyclic covers over a line and their sheets.

Over a line chart t -> base + t * direction the m-fold cover branched along
F = prod F_i^(w_i) is the curve s^m = q(t) with q = F restricted to the
chart. Its sheets over a point are the m-th roots of q there; a sheet
label r means the base-fiber value s_0 * zeta_m^r in phase order.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property, reduce
from typing import TYPE_CHECKING

import numpy as np

from lib.cover.disjoint_set import DisjointSet
from lib.cover.errors import (
    ConfigInvalid,
    DegenerateGeometry,
    IntersectionOnBranchLocus,
    LineInsideBranchDivisor,
    MatchingAmbiguous,
    MonodromyMismatch,
)
from lib.cover.geometry import chart_of, chart_scale, derive_seed, is_infinite, param_of_point
from lib.cover.paths import circle_plan, fiber_roots, plan_path, track
from lib.cover.polynomials import (
    TrivariateForm,
    UnivariatePoly,
    evaluate,
    multiply,
    power,
    restrict_to_line,
    roots_with_multiplicity,
)
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from lib.cover.geometry import HomogeneousPoint, LineChart, ProjectiveLine

logger = logging.getLogger(__name__)

CHART_ATTEMPTS = 8
BASE_ATTEMPTS = 100
_BASE_KEY = 7919
# A matched root must beat the runner-up by this factor.
MATCH_MARGIN = 10.0
# Largest relative correction applied when snapping a fiber onto the exact F value.
SNAP_LIMIT = 1e-3


@dataclass(frozen=True)
class WeightedBranchDivisor:
    """The branch data of an m-fold cyclic cover: forms F_i with weights w_i.

    The cover is s^m = F with F = prod F_i^(w_i); ``n`` is deg F / m.
    """

    m: int
    parts: tuple[tuple[TrivariateForm, int], ...]

    def __post_init__(self) -> None:
        if self.m < 2:  # noqa: PLR2004
            raise ConfigInvalid(ConfigInvalid.BAD_COVER_DEGREE, f"m={self.m}")
        if not self.parts:
            raise ConfigInvalid(ConfigInvalid.EMPTY_COVER)
        for _, weight in self.parts:
            if not 1 <= weight <= self.m - 1:
                raise ConfigInvalid(ConfigInvalid.BAD_WEIGHT, f"weight {weight} with m={self.m}")
        if self.weighted_degree % self.m:
            raise ConfigInvalid(
                ConfigInvalid.DEGREE_NOT_DIVISIBLE, f"weighted degree {self.weighted_degree}, m={self.m}"
            )

    @classmethod
    def single(cls, form: TrivariateForm, m: int | None = None, weight: int = 1) -> WeightedBranchDivisor:
        """The cover of degree ``m`` (default: deg form) branched along one form."""
        return cls(m=form.degree if m is None else m, parts=((form, weight),))

    @property
    def weighted_degree(self) -> int:
        return sum(form.degree * weight for form, weight in self.parts)

    @property
    def n(self) -> int:
        return self.weighted_degree // self.m

    @cached_property
    def F(self) -> TrivariateForm:  # noqa: N802
        """The product of the parts raised to their weights."""
        return reduce(lambda acc, part: multiply(acc, power(*part)), self.parts, TrivariateForm.constant(1.0))

    def value_at(self, p: HomogeneousPoint) -> complex:
        """F at the normalized representative of ``p``."""
        return evaluate(self.F, p)

    def on_branch_locus(self, p: HomogeneousPoint, branch_tol: float) -> bool:
        """True when |F(p)| is below ``branch_tol`` relative to the size of F."""
        return abs(self.value_at(p)) < branch_tol * self.F.norm()


@dataclass(frozen=True)
class BranchPoint:
    """A finite branch parameter with weighted intersection multiplicity I_P."""

    param: complex
    weight: int


@dataclass(frozen=True)
class ComponentCoverData:
    """The cover restricted to one line, in a fixed chart.

    q is kept in factored form, leading * prod (t - t_P)^I_P, so that values
    near high-multiplicity branch points stay accurate.
    """

    m: int
    n: int
    chart: LineChart
    leading: complex
    branch_points: tuple[BranchPoint, ...]
    infinity_weight: int
    base_param: complex
    base_fiber: np.ndarray = field(repr=False)
    clearance: float
    seed: int

    @property
    def branch_params(self) -> np.ndarray:
        return np.array([point.param for point in self.branch_points], dtype=complex)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(point.weight for point in self.branch_points)

    def value(self, t: complex) -> complex:
        result = complex(self.leading)
        for point in self.branch_points:
            result *= (t - point.param) ** point.weight
        return result

    def log_derivative(self, t: complex) -> complex:
        return complex(sum(point.weight / (t - point.param) for point in self.branch_points))

    def distance_to_branch(self, t: complex) -> float:
        if not self.branch_points:
            return math.inf
        return float(np.abs(self.branch_params - t).min())


@dataclass(frozen=True)
class Offset:
    """Sheet r of the first component meets sheet r + offset of the second at ``point``."""

    offset: int
    matching: tuple[int, ...]
    point: HomogeneousPoint
    params: tuple[complex, complex]
    max_residual: float


def _merge_clusters(found: list[tuple[complex, int]], eps: float) -> list[BranchPoint]:
    """Combine branch parameters of different parts that coincide within ``eps``."""
    forest: DisjointSet[int] = DisjointSet(range(len(found)))
    for i, (ti, _) in enumerate(found):
        for j in range(i + 1, len(found)):
            if abs(ti - found[j][0]) <= eps:
                forest.merge(i, j)
    merged = []
    for group in forest.classes():
        weight = sum(found[i][1] for i in group)
        center = complex(np.mean([found[i][0] for i in group]))
        merged.append(BranchPoint(param=center, weight=weight))
    merged.sort(key=lambda point: (point.param.real, point.param.imag))
    return merged


def _clearance(params: np.ndarray) -> float:
    if params.size < 2:  # noqa: PLR2004
        return 0.1
    gaps = np.abs(params[:, np.newaxis] - params[np.newaxis, :])
    diameter = float(gaps.max())
    np.fill_diagonal(gaps, np.inf)
    return min(0.5 * float(gaps.min()), 0.1 * max(diameter, 1.0))


def _avoid_params(chart: LineChart, avoid: Iterable[HomogeneousPoint]) -> list[complex]:
    return [param_of_point(chart, point) for point in avoid]


def _base_param(params: np.ndarray, clearance: float, seed: int) -> complex:
    rng = np.random.default_rng(derive_seed(seed, _BASE_KEY))
    center = complex(params.mean()) if params.size else 0j
    spread = max(float(np.abs(params - center).max()) if params.size else 0.0, 1.0)
    for _ in range(BASE_ATTEMPTS):
        candidate = center + spread * complex(*rng.standard_normal(2))
        if not params.size or float(np.abs(params - candidate).min()) >= 2 * clearance:
            return candidate
    msg = f"No base parameter found at distance {2 * clearance:.3e} from the branch points"
    raise DegenerateGeometry(msg)


def phase_ordered(values: np.ndarray) -> np.ndarray:
    """Values sorted by argument in [0, 2 pi)."""
    return values[np.argsort(np.mod(np.angle(values), 2 * np.pi), kind="stable")]


def component_data(
    cover: WeightedBranchDivisor,
    line: ProjectiveLine,
    seed: int,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    avoid: Sequence[HomogeneousPoint] = (),
) -> ComponentCoverData:
    """Branch points, base point and base fiber of the cover over ``line``.

    The chart is redrawn (with derived seeds) while some part has a root at
    the chart's infinity or an ``avoid`` point has no finite parameter of
    modulus at most ``max_param``.

    Raises:
        LineInsideBranchDivisor: If the line is a component of some part.
        RootFindingDiverged: If a restriction's roots cannot be found.
        DegenerateGeometry: If the ``avoid`` points cannot be given finite parameters.
    """
    chart = None
    restrictions: list[tuple[UnivariatePoly, int]] = []
    for attempt in range(CHART_ATTEMPTS):
        chart = chart_of(line, derive_seed(seed, attempt))
        restrictions = []
        for form, weight in cover.parts:
            q = restrict_to_line(form, chart)
            if q.is_zero:
                msg = f"Line {line.coeffs} is a component of a degree-{form.degree} branch part"
                raise LineInsideBranchDivisor(msg)
            restrictions.append((q, weight))
        params = _avoid_params(chart, avoid)
        finite = all(not is_infinite(t) and abs(t) <= tolerances.max_param for t in params)
        deficient = any(q.deficiency for q, _ in restrictions)
        if finite and not deficient:
            break
        logger.debug("[Monodromy] Redrawing chart on %s (attempt %s)", line.coeffs, attempt)
    else:
        if not finite:
            msg = f"Intersection points on {line.coeffs} stay at infinity after {CHART_ATTEMPTS} charts"
            raise DegenerateGeometry(msg)
        logger.warning("[Monodromy] Accepting roots at infinity on %s after %s charts", line.coeffs, CHART_ATTEMPTS)

    found: list[tuple[complex, int]] = []
    leading = 1.0 + 0j
    infinity_weight = 0
    for q, weight in restrictions:
        clusters = roots_with_multiplicity(
            q,
            cluster_eps=tolerances.cluster_eps,
            taylor_noise=tolerances.taylor_noise,
            max_iter=tolerances.root_max_iter,
            tol=tolerances.root_tol,
        )
        found.extend((cluster.center, weight * cluster.multiplicity) for cluster in clusters)
        leading *= complex(q.coefficients[-1]) ** weight
        infinity_weight += weight * q.deficiency
    branch_points = _merge_clusters(found, tolerances.cluster_eps)
    params = np.array([point.param for point in branch_points], dtype=complex)
    clearance = _clearance(params)
    base = _base_param(params, clearance, seed)

    data = ComponentCoverData(
        m=cover.m,
        n=cover.n,
        chart=chart,
        leading=leading,
        branch_points=tuple(branch_points),
        infinity_weight=infinity_weight,
        base_param=base,
        base_fiber=np.empty(0, dtype=complex),
        clearance=clearance,
        seed=seed,
    )
    fiber = phase_ordered(fiber_roots(data.value(base), cover.m))
    data = replace(data, base_fiber=fiber)
    logger.debug(
        "[Monodromy] Line %s: branch weights %s, infinity %s, clearance %.3e",
        line.coeffs,
        data.weights,
        infinity_weight,
        clearance,
    )
    return data


def _shift_of(before: np.ndarray, after: np.ndarray, m: int, match_tol: float) -> int:
    """The k with after = before * zeta_m^k, or -1 when no single shift fits."""
    k = round(m * (cmath.phase(after[0] / before[0]) / (2 * math.pi))) % m
    expected = before * cmath.exp(2j * math.pi * k / m)
    if np.all(np.abs(after - expected) <= match_tol * np.abs(before)):
        return k
    return -1


def _loop_shift(data: ComponentCoverData, center: complex, radius: float, angle: float, tolerances: Tolerances) -> int:
    """Shift of the sheet labels after one counterclockwise loop around ``center``."""
    start = center + radius * cmath.exp(1j * angle)
    approach = track(data, plan_path(data, start), tolerances)
    around = track(data, circle_plan(center, radius, angle), tolerances, start_values=approach.values)
    k = _shift_of(approach.values, around.values, data.m, tolerances.match_tol)
    if k < 0:
        msg = f"Loop around t={center} does not act as a cyclic shift"
        raise MonodromyMismatch(msg)
    return k


def local_monodromy(
    data: ComponentCoverData, branch_index: int, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> tuple[int, ...]:
    """Permutation r -> r + I_P of the sheet labels, confirmed by tracking a small loop.

    Raises:
        MonodromyMismatch: If the tracked shift is not I_P mod m.
    """
    point = data.branch_points[branch_index]
    angle = cmath.phase(data.base_param - point.param)
    k = _loop_shift(data, point.param, data.clearance / 2, angle, tolerances)
    if k != point.weight % data.m:
        msg = f"Tracked shift {k} at t={point.param} disagrees with I_P={point.weight} (m={data.m})"
        raise MonodromyMismatch(msg)
    return tuple((r + k) % data.m for r in range(data.m))


def monodromy_at_infinity(data: ComponentCoverData, tolerances: Tolerances = DEFAULT_TOLERANCES) -> tuple[int, ...]:
    """Permutation of a loop around the chart's infinity.

    Tracked as the inverse of a large loop enclosing every finite branch
    point; composed with all local monodromies it is the identity.

    Raises:
        MonodromyMismatch: If the loop is not a shift by the infinity weight.
    """
    m = data.m
    if data.branch_points:
        radius = float(np.abs(data.branch_params - data.base_param).max()) + data.clearance
        k = _loop_shift(data, data.base_param, radius, 0.0, tolerances)
    else:
        k = 0
    inverse = (-k) % m
    if inverse != data.infinity_weight % m:
        msg = f"Loop at infinity shifts by {inverse}, expected {data.infinity_weight % m}"
        raise MonodromyMismatch(msg)
    return tuple((r + inverse) % m for r in range(m))


def orbit_count(m: int, permutations: Iterable[Sequence[int]]) -> int:
    """Orbits on {0..m-1} of the group generated by ``permutations``."""
    forest: DisjointSet[int] = DisjointSet(range(m))
    for permutation in permutations:
        for r, image in enumerate(permutation):
            forest.merge(r, image)
    return forest.class_count


def splitting_count(data: ComponentCoverData, permutations: Iterable[Sequence[int]] | None = None) -> int:
    """gcd(m, I_P over all branch points): the number of sheets orbits over the line.

    When tracked ``permutations`` are given their orbit count must agree.

    Raises:
        MonodromyMismatch: If the tracked orbit count differs.
    """
    count = math.gcd(data.m, *data.weights)
    if permutations is not None:
        tracked = orbit_count(data.m, permutations)
        if tracked != count:
            msg = f"Tracked orbit count {tracked} differs from gcd {count}"
            raise MonodromyMismatch(msg)
    return count


def _normalized_fiber(
    data: ComponentCoverData, param: complex, p: HomogeneousPoint, exact_value: complex, tolerances: Tolerances
) -> tuple[np.ndarray, float]:
    """Sheet values over ``p`` rescaled to the normalized representative of ``p``.

    The rescaled values are snapped onto the m-th roots of ``exact_value``,
    F evaluated at that representative, by the principal root of the small
    correction factor; sheet labels are unchanged.
    """
    transport = track(data, plan_path(data, param), tolerances)
    scale = chart_scale(data.chart, param, p)
    values = transport.values / scale**data.n
    correction = exact_value / values**data.m
    if np.any(np.abs(correction - 1.0) > SNAP_LIMIT):
        msg = f"Tracked fiber at {p.coords} is off the cover by a factor up to {float(np.abs(correction).max()):.3e}"
        raise MatchingAmbiguous(msg)
    return values * np.power(correction, 1.0 / data.m), transport.max_residual


def _match(first: np.ndarray, second: np.ndarray, match_tol: float) -> tuple[int, ...]:
    distances = np.abs(first[:, np.newaxis] - second[np.newaxis, :])
    order = np.argsort(distances, axis=1)
    matching = order[:, 0]
    rows = np.arange(first.size)
    nearest = distances[rows, matching]
    tolerance = match_tol * np.abs(first)
    if first.size > 1:
        runner_up = distances[rows, order[:, 1]]
        if np.any(runner_up <= MATCH_MARGIN * nearest):
            msg = "Two fiber values are too close to match sheets"
            raise MatchingAmbiguous(msg)
    if np.any(nearest > tolerance) or len(set(matching.tolist())) != first.size:
        msg = f"Fibers do not coincide (worst gap {float(nearest.max()):.3e})"
        raise MatchingAmbiguous(msg)
    return tuple(int(j) for j in matching)


def offset_at(
    data_i: ComponentCoverData,
    data_j: ComponentCoverData,
    cover: WeightedBranchDivisor,
    p: HomogeneousPoint,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Offset:
    """Offset a_P of the sheet labels of two components over their intersection ``p``.

    Both base fibers are transported to ``p``, rescaled to its normalized
    representative and matched; sheet r of the first component lands on
    sheet r + a_P of the second.

    Raises:
        IntersectionOnBranchLocus: If ``p`` lies on the branch curve.
        MatchingAmbiguous: If the two fibers cannot be matched one-to-one.
    """
    if cover.on_branch_locus(p, tolerances.branch_tol):
        msg = f"Intersection point {p.coords} lies on the branch curve"
        raise IntersectionOnBranchLocus(msg)
    t_i = param_of_point(data_i.chart, p)
    t_j = param_of_point(data_j.chart, p)
    exact_value = cover.value_at(p)
    values_i, residual_i = _normalized_fiber(data_i, t_i, p, exact_value, tolerances)
    values_j, residual_j = _normalized_fiber(data_j, t_j, p, exact_value, tolerances)
    matching = _match(values_i, values_j, tolerances.match_tol)
    m = data_i.m
    k = matching[0] % m
    if any(matching[r] != (r + k) % m for r in range(m)):
        msg = f"Matching {matching} at {p.coords} is not a cyclic shift"
        raise MatchingAmbiguous(msg)
    return Offset(
        offset=k,
        matching=matching,
        point=p,
        params=(t_i, t_j),
        max_residual=max(residual_i, residual_j),
    )
