"""Exception hierarchy for covercount.

The CLI maps the four families below to exit codes: configuration,
geometry and arrangement problems exit 2, numerical failures exit 3 and a
disagreement between the two connected-number methods exits 4.
"""

from __future__ import annotations

from typing import Any, ClassVar


class CoverCountError(Exception):
    """Base class for every error raised by the library."""


class ConfigurationError(CoverCountError, ValueError):
    """Invalid user-supplied configuration."""


class ConfigInvalid(ConfigurationError):
    """Raised when a family or cover configuration fails validation."""

    NOT_A_MULTIPLE = "not_a_multiple"
    REPEATED_FAMILY = "repeated_family"
    BAD_WEIGHT = "bad_weight"
    DEGREE_NOT_DIVISIBLE = "degree_not_divisible"
    EMPTY_COVER = "empty_cover"
    DUPLICATE_COMPONENT = "duplicate_component"
    BAD_COVER_DEGREE = "bad_cover_degree"
    INDEX_ORDER = "index_order"
    NO_COMPONENTS = "no_components"

    _MESSAGES: ClassVar[dict[str, str]] = {
        NOT_A_MULTIPLE: "The degree b must be a multiple of mu.",
        REPEATED_FAMILY: "The three tangent lines must come from pairwise distinct families.",
        BAD_WEIGHT: "Branch weights must lie in 1..m-1.",
        DEGREE_NOT_DIVISIBLE: "The weighted degree of the branch divisor must be divisible by m.",
        EMPTY_COVER: "A cover needs at least one branch component.",
        DUPLICATE_COMPONENT: "Arrangement components must be pairwise distinct lines.",
        BAD_COVER_DEGREE: "The cover degree m must be at least 2.",
        INDEX_ORDER: "Every tangent index must use the configuration's mu.",
        NO_COMPONENTS: "An arrangement needs at least one line.",
    }

    def __init__(self, reason: str, detail: str | None = None) -> None:
        """Initialize the exception with a predefined reason key."""
        self.reason = reason
        message = self._MESSAGES[reason]
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class NotADivisor(ConfigurationError):
    """Raised when mu does not divide b."""


class GeometryError(CoverCountError, ValueError):
    """Degenerate projective input."""


class CoincidentPoints(GeometryError):
    """Two points that should be distinct are projectively equal."""


class CoincidentLines(GeometryError):
    """Two lines that should be distinct are projectively equal."""


class PointOffLine(GeometryError):
    """A point expected on a line misses it."""


class ArrangementError(CoverCountError):
    """The curve or its position relative to the branch locus is unusable."""


class LineInsideBranchDivisor(ArrangementError):
    """A line is a component of a branch part (its restriction vanishes)."""


class ComponentInsideBranch(ArrangementError):
    """A component of C is contained in B."""


class CurveMinusBranchDisconnected(ArrangementError):
    """C minus B is disconnected, so the connected number is undefined."""


class IntersectionOnBranchLocus(ArrangementError):
    """An intersection of two components lies on B; no gluing happens there."""


class NotCompletelySplit(ArrangementError):
    """The strict offset method needs every component to split completely."""


class NumericalFailure(CoverCountError, ArithmeticError):
    """A numerical routine could not certify its own output."""


class RootFindingDiverged(NumericalFailure):
    """The simultaneous root iteration hit its iteration cap."""


class StepUnderflow(NumericalFailure):
    """Path tracking needed a step below the configured floor."""


class SheetCollision(NumericalFailure):
    """Two sheets came too close to tell apart during tracking."""


class MonodromyMismatch(NumericalFailure):
    """Tracked local monodromy disagrees with the weighted multiplicity."""


class DegenerateGeometry(NumericalFailure):
    """Branch points or endpoints are too close to plan a path."""


class MatchingAmbiguous(NumericalFailure):
    """Sheet values over an intersection cannot be matched unambiguously."""


class NumericalRankAmbiguous(NumericalFailure):
    """A singular value fell inside the ambiguity band of the rank threshold."""


class MethodDisagreement(CoverCountError):
    """Union-find and the offset subgroup produced different connected numbers."""

    def __init__(self, message: str, diagnostics: dict[str, Any]) -> None:
        """Keep the full diagnostic dump next to the message."""
        super().__init__(message)
        self.diagnostics = diagnostics
