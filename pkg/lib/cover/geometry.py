"""Points, lines and line charts in the complex projective plane.

Coordinates are double-precision complex triples. Points and lines are
stored normalized: the first coordinate of maximal modulus is divided out,
so it becomes exactly 1. Projective equality is tested on the cross product
of normalized representatives.
"""

from __future__ import annotations

import cmath
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.linalg import null_space

from covercount import settings
from lib.cover.errors import CoincidentLines, CoincidentPoints, PointOffLine
from lib.pydantic_utils import ComplexTriple

logger = logging.getLogger(__name__)

POINT_AT_INFINITY = complex(math.inf, 0.0)

# Minimal separation of a chart's base and direction (cross product modulus).
CHART_SEPARATION = 0.1
_TIE_RELATIVE = 1e-12


def is_infinite(t: complex) -> bool:
    """Return True for the chart parameter of the direction point."""
    return cmath.isinf(t)


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a deterministic 63-bit seed from ``seed`` and integer keys.

    The key count is part of the spawn key, so trailing zero keys give
    different seeds: ``derive_seed(s) != derive_seed(s, 0)``.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(len(keys), *keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def normalize_triple(values: tuple[complex, complex, complex] | np.ndarray) -> tuple[complex, complex, complex]:
    """Divide a triple by its first coordinate of maximal modulus.

    Raises:
        ValueError: If every coordinate vanishes.
    """
    vector = np.asarray(values, dtype=complex)
    moduli = np.abs(vector)
    top = float(moduli.max())
    if not math.isfinite(top) or top < settings.PROJECTIVE_EPS:
        msg = f"Projective triple must have a nonzero finite coordinate, got {tuple(vector)}"
        raise ValueError(msg)
    pivot = int(np.argmax(moduli >= top * (1.0 - _TIE_RELATIVE)))
    scaled = vector / vector[pivot]
    scaled[pivot] = 1.0
    return (complex(scaled[0]), complex(scaled[1]), complex(scaled[2]))


def _cross_modulus(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.abs(np.cross(u, v)).max())


class HomogeneousPoint(BaseModel):
    """A point (x : y : z) of the complex projective plane."""

    model_config = ConfigDict(frozen=True)

    coords: ComplexTriple

    @field_validator("coords", mode="after")
    @classmethod
    def _normalize(cls, value: tuple[complex, complex, complex]) -> tuple[complex, complex, complex]:
        return normalize_triple(value)

    @classmethod
    def of(cls, x: complex, y: complex, z: complex) -> HomogeneousPoint:
        """Build a point from its three homogeneous coordinates."""
        return cls(coords=(complex(x), complex(y), complex(z)))

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> HomogeneousPoint:
        """Build a point from a length-3 complex array."""
        return cls(coords=normalize_triple(vector))

    @property
    def vector(self) -> np.ndarray:
        """The normalized representative as a complex array."""
        return np.array(self.coords, dtype=complex)

    def same_as(self, other: HomogeneousPoint, eps: float = settings.PROJECTIVE_EPS) -> bool:
        """Projective equality up to ``eps``."""
        return _cross_modulus(self.vector, other.vector) <= eps

    def sort_key(self) -> tuple[float, ...]:
        """Lexicographic key used to order points canonically."""
        return tuple(part for z in self.coords for part in (round(z.real, 9), round(z.imag, 9)))


class ProjectiveLine(BaseModel):
    """The line ax + by + cz = 0."""

    model_config = ConfigDict(frozen=True)

    coeffs: ComplexTriple

    @field_validator("coeffs", mode="after")
    @classmethod
    def _normalize(cls, value: tuple[complex, complex, complex]) -> tuple[complex, complex, complex]:
        return normalize_triple(value)

    @classmethod
    def of(cls, a: complex, b: complex, c: complex) -> ProjectiveLine:
        """Build a line from the coefficients of ax + by + cz."""
        return cls(coeffs=(complex(a), complex(b), complex(c)))

    @property
    def vector(self) -> np.ndarray:
        """The normalized coefficients as a complex array."""
        return np.array(self.coeffs, dtype=complex)

    def residual(self, p: HomogeneousPoint) -> float:
        """|a x + b y + c z| at the normalized representative of ``p``."""
        return float(abs(self.vector @ p.vector))

    def contains(self, p: HomogeneousPoint, eps: float = settings.PROJECTIVE_EPS) -> bool:
        """Incidence test up to ``eps``."""
        return self.residual(p) <= eps

    def same_as(self, other: ProjectiveLine, eps: float = settings.PROJECTIVE_EPS) -> bool:
        """Projective equality up to ``eps``."""
        return _cross_modulus(self.vector, other.vector) <= eps


class LineChart(BaseModel):
    """The parametrization t -> base + t * direction of a line; t = inf is the direction."""

    model_config = ConfigDict(frozen=True)

    line: ProjectiveLine
    base: HomogeneousPoint
    direction: HomogeneousPoint

    @model_validator(mode="after")
    def _check_chart(self) -> LineChart:
        tolerance = 1e-8
        if not (self.line.contains(self.base, tolerance) and self.line.contains(self.direction, tolerance)):
            msg = "Chart base and direction must lie on the chart line"
            raise ValueError(msg)
        if _cross_modulus(self.base.vector, self.direction.vector) < settings.PROJECTIVE_EPS:
            msg = "Chart base and direction must be projectively independent"
            raise ValueError(msg)
        return self

    def vector_at(self, t: complex) -> np.ndarray:
        """The (unnormalized) representative base + t * direction."""
        if is_infinite(t):
            return self.direction.vector
        return self.base.vector + t * self.direction.vector

    def __call__(self, t: complex) -> HomogeneousPoint:
        """The point of the line at parameter ``t``."""
        return HomogeneousPoint.from_vector(self.vector_at(t))


def line_through(p: HomogeneousPoint, q: HomogeneousPoint, eps: float = settings.PROJECTIVE_EPS) -> ProjectiveLine:
    """The line through two distinct points.

    Raises:
        CoincidentPoints: If ``p`` and ``q`` are projectively equal.
    """
    coefficients = np.cross(p.vector, q.vector)
    if float(np.abs(coefficients).max()) <= eps:
        msg = f"Points {p.coords} and {q.coords} coincide; no unique line through them"
        raise CoincidentPoints(msg)
    return ProjectiveLine(coeffs=normalize_triple(coefficients))


def intersect(l1: ProjectiveLine, l2: ProjectiveLine, eps: float = settings.PROJECTIVE_EPS) -> HomogeneousPoint:
    """The intersection point of two distinct lines.

    Raises:
        CoincidentLines: If the lines are projectively equal.
    """
    point = np.cross(l1.vector, l2.vector)
    if float(np.abs(point).max()) <= eps:
        msg = f"Lines {l1.coeffs} and {l2.coeffs} coincide"
        raise CoincidentLines(msg)
    return HomogeneousPoint.from_vector(point)


def chart_of(line: ProjectiveLine, seed: int) -> LineChart:
    """A seeded chart on ``line``.

    Base and direction are random combinations of an orthonormal basis of
    the line, redrawn until their normalized cross product has modulus at
    least ``CHART_SEPARATION``. The same line and seed always give the same
    chart.
    """
    basis = null_space(line.vector[np.newaxis, :])
    rng = np.random.default_rng(seed)
    while True:
        draws = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        base = HomogeneousPoint.from_vector(basis @ draws[0])
        direction = HomogeneousPoint.from_vector(basis @ draws[1])
        if _cross_modulus(base.vector, direction.vector) >= CHART_SEPARATION:
            return LineChart(line=line, base=base, direction=direction)
        logger.debug("[Geometry] Redrawing chart for line %s (seed %s)", line.coeffs, seed)


def param_of_point(chart: LineChart, p: HomogeneousPoint, eps: float = 1e-8) -> complex:
    """The parameter t with chart(t) = p, or ``POINT_AT_INFINITY`` for the direction.

    Raises:
        PointOffLine: If ``p`` does not lie on the chart line.
    """
    if not chart.line.contains(p, eps):
        msg = f"Point {p.coords} is not on line {chart.line.coeffs} (residual {chart.line.residual(p):.3e})"
        raise PointOffLine(msg)
    frame = np.column_stack([chart.base.vector, chart.direction.vector])
    (alpha, beta), *_ = np.linalg.lstsq(frame, p.vector, rcond=None)
    if abs(alpha) <= settings.PROJECTIVE_EPS * abs(beta):
        return POINT_AT_INFINITY
    return complex(beta / alpha)


def chart_scale(chart: LineChart, t: complex, p: HomogeneousPoint) -> complex:
    """The scalar lam with chart.vector_at(t) = lam * p.vector."""
    target = p.vector
    return complex(np.vdot(target, chart.vector_at(t)) / np.vdot(target, target))
