"""Paths in a chart's parameter plane and sheet transport along them.

A path is a chain of straight segments and circular arcs that keeps a
fixed clearance from every branch parameter. Sheets of the cover
s^m = q(t) are continued along it with an Euler predictor and a Newton
corrector, all m sheets at once.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol

import numpy as np

from lib.cover.errors import DegenerateGeometry, SheetCollision, StepUnderflow
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

# Paths never come closer to a branch parameter than this.
MIN_CLEARANCE = 1e-9
# Newton stops once every correction is below this fraction of its sheet.
NEWTON_RELATIVE_STEP = 1e-12
# Final values must sit this close (relative) to a fiber root.
SNAP_RELATIVE = 1e-6
ACCEPTS_BEFORE_GROWTH = 4


class CoverBranchData(Protocol):
    """What planning and tracking need from a component's cover data."""

    m: int
    base_param: complex
    base_fiber: np.ndarray
    clearance: float

    @property
    def branch_params(self) -> np.ndarray: ...

    def value(self, t: complex) -> complex: ...

    def log_derivative(self, t: complex) -> complex: ...

    def distance_to_branch(self, t: complex) -> float: ...


@dataclass(frozen=True)
class LineSegment:
    start: complex
    end: complex

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def point(self, tau: float) -> complex:
        return self.start + tau * (self.end - self.start)


@dataclass(frozen=True)
class ArcSegment:
    """Arc of a circle; ``sweep`` is signed (positive is counterclockwise)."""

    center: complex
    radius: float
    start_angle: float
    sweep: float

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def point(self, tau: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * (self.start_angle + tau * self.sweep))

    @property
    def start(self) -> complex:
        return self.point(0.0)

    @property
    def end(self) -> complex:
        return self.point(1.0)


Segment = LineSegment | ArcSegment


@dataclass(frozen=True)
class PathPlan:
    start: complex
    end: complex
    clearance: float
    segments: tuple[Segment, ...] = ()


@dataclass(frozen=True)
class SheetTransport:
    """Values of the m sheets at ``target_param``, index-aligned with the start values."""

    target_param: complex
    values: np.ndarray = field(repr=False)
    max_residual: float = 0.0
    steps: int = 0


def circle_plan(center: complex, radius: float, start_angle: float, turns: int = 1) -> PathPlan:
    """A full counterclockwise loop (clockwise for negative ``turns``)."""
    arc = ArcSegment(center=center, radius=radius, start_angle=start_angle, sweep=2 * math.pi * turns)
    return PathPlan(start=arc.start, end=arc.end, clearance=radius, segments=(arc,))


def plan_path(data: CoverBranchData, target: complex, start: complex | None = None) -> PathPlan:
    """A path from ``start`` (default: the base parameter) to ``target``.

    The straight segment is kept, except that every branch parameter closer
    to it than the effective clearance is bypassed on the left along a
    circle of that radius.

    Raises:
        DegenerateGeometry: If an endpoint is too close to a branch parameter.
    """
    origin = data.base_param if start is None else start
    if abs(target - origin) <= MIN_CLEARANCE:
        return PathPlan(start=origin, end=target, clearance=data.clearance)

    branch = data.branch_params
    effective = 0.9 * data.clearance
    if branch.size:
        effective = min(effective, 0.5 * data.distance_to_branch(origin), 0.5 * data.distance_to_branch(target))
    if effective < MIN_CLEARANCE:
        msg = f"Path endpoints {origin} -> {target} leave clearance {effective:.3e} from the branch points"
        raise DegenerateGeometry(msg)

    span = target - origin
    length = abs(span)
    heading = span / length
    blocking: list[tuple[float, complex, float]] = []
    for c in branch:
        along = ((c - origin) * heading.conjugate()).real
        offset = abs((c - origin) * heading.conjugate() - along)
        if 0.0 < along < length and offset < effective:
            half_chord = math.sqrt(effective**2 - offset**2)
            blocking.append((along, complex(c), half_chord))
    blocking.sort(key=lambda item: item[0])

    segments: list[Segment] = []
    cursor = origin
    for along, c, half_chord in blocking:
        entry = origin + (along - half_chord) * heading
        exit_ = origin + (along + half_chord) * heading
        if abs(entry - cursor) > 0:
            segments.append(LineSegment(cursor, entry))
        entry_angle = cmath.phase(entry - c)
        exit_angle = cmath.phase(exit_ - c)
        sweep = -((entry_angle - exit_angle) % (2 * math.pi))
        segments.append(ArcSegment(center=c, radius=effective, start_angle=entry_angle, sweep=sweep))
        cursor = exit_
    if abs(target - cursor) > 0:
        segments.append(LineSegment(cursor, target))
    logger.debug("[Paths] Planned %s segments with %s detours (clearance %.3e)", len(segments), len(blocking), effective)
    return PathPlan(start=origin, end=target, clearance=effective, segments=tuple(segments))


def _correct(
    predicted: np.ndarray, q_value: complex, m: int, tolerances: Tolerances
) -> tuple[np.ndarray, float] | None:
    """Newton on s^m - q; None when it does not settle within the iteration cap."""
    s = predicted.copy()
    for _ in range(tolerances.corrector_max_iter):
        with np.errstate(divide="ignore", invalid="ignore"):
            delta = (s**m - q_value) / (m * s ** (m - 1))
        if not np.all(np.isfinite(delta)):
            return None
        s = s - delta
        if np.all(np.abs(delta) <= NEWTON_RELATIVE_STEP * np.abs(s)):
            residual = float(np.max(np.abs(s**m - q_value)) / (1.0 + abs(q_value)))
            if residual <= tolerances.track_residual:
                return s, residual
            return None
    return None


def _separated(corrected: np.ndarray, predicted: np.ndarray, factor: float) -> bool:
    """Every sheet lands nearer its own prediction than any other, by ``factor``."""
    if corrected.size < 2:  # noqa: PLR2004
        return True
    distances = np.abs(corrected[:, np.newaxis] - predicted[np.newaxis, :])
    own = np.diag(distances).copy()
    np.fill_diagonal(distances, np.inf)
    return bool(np.all(factor * own <= distances.min(axis=1)))


def _track_segment(
    data: CoverBranchData,
    segment: Segment,
    values: np.ndarray,
    tolerances: Tolerances,
) -> tuple[np.ndarray, float, int]:
    length = segment.length
    if length == 0.0:
        return values, 0.0, 0
    m = data.m
    tau = 0.0
    here = segment.point(0.0)
    step = data.clearance / 4
    streak = 0
    worst = 0.0
    accepted = 0
    while tau < 1.0:
        step = min(step, 0.5 * data.distance_to_branch(here))
        remaining = (1.0 - tau) * length
        trial = min(step, remaining)
        tau_next = 1.0 if trial >= remaining else tau + trial / length
        there = segment.point(tau_next)
        predicted = values + values / m * data.log_derivative(here) * (there - here)
        outcome = _correct(predicted, data.value(there), m, tolerances)
        collided = outcome is not None and not _separated(outcome[0], predicted, tolerances.separation_factor)
        if outcome is None or collided:
            step = trial / 2
            streak = 0
            if step < tolerances.step_floor:
                if collided:
                    msg = f"Sheets collided near t={there} (step {trial:.3e})"
                    raise SheetCollision(msg)
                msg = f"Corrector failed near t={there} with step {trial:.3e}"
                raise StepUnderflow(msg)
            logger.debug("[Paths] Rejected step %.3e at t=%s (%s)", trial, here, "collision" if collided else "corrector")
            continue
        values, residual = outcome
        worst = max(worst, residual)
        accepted += 1
        tau, here = tau_next, there
        streak += 1
        if streak >= ACCEPTS_BEFORE_GROWTH:
            step *= 2
            streak = 0
    return values, worst, accepted


def fiber_roots(q_value: complex, m: int) -> np.ndarray:
    """The m-th roots of ``q_value``, principal root first, then by powers of exp(2 pi i / m)."""
    principal = complex(q_value) ** (1.0 / m)
    return principal * np.exp(2j * np.pi * np.arange(m) / m)


def _snap_to_fiber(data: CoverBranchData, target: complex, values: np.ndarray) -> np.ndarray:
    """Replace tracked values by the exact fiber roots they approximate."""
    roots = fiber_roots(data.value(target), data.m)
    distances = np.abs(values[:, np.newaxis] - roots[np.newaxis, :])
    assignment = distances.argmin(axis=1)
    nearest = distances[np.arange(values.size), assignment]
    if len(set(assignment.tolist())) != values.size or np.any(nearest > SNAP_RELATIVE * np.abs(roots[assignment])):
        msg = f"Tracked values at t={target} do not match the fiber one-to-one"
        raise SheetCollision(msg)
    return roots[assignment]


def track(
    data: CoverBranchData,
    plan: PathPlan,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    start_values: Sequence[complex] | np.ndarray | None = None,
) -> SheetTransport:
    """Continue the sheets along ``plan``.

    Starts from the base fiber unless ``start_values`` are given. The
    returned values are the fiber roots over ``plan.end``, each matched to
    the sheet that was tracked onto it.

    Raises:
        StepUnderflow: If the corrector keeps failing down to the step floor.
        SheetCollision: If sheets cannot be kept apart.
    """
    values = np.array(data.base_fiber if start_values is None else start_values, dtype=complex)
    worst = 0.0
    steps = 0
    for segment in plan.segments:
        values, residual, accepted = _track_segment(data, segment, values, tolerances)
        worst = max(worst, residual)
        steps += accepted
    if plan.segments:
        values = _snap_to_fiber(data, plan.end, values)
    return SheetTransport(target_param=plan.end, values=values, max_residual=worst, steps=steps)
