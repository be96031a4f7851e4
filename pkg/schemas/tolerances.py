"""Numerical tolerances shared by the numerical pipeline."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from covercount import settings


class Tolerances(BaseModel):
    """Tolerances for one run; defaults come from ``covercount.settings``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    projective_eps: float = Field(default=settings.PROJECTIVE_EPS, gt=0)
    cluster_eps: float = Field(default=settings.CLUSTER_EPS, gt=0)
    taylor_noise: float = Field(default=settings.TAYLOR_NOISE, gt=0)
    root_max_iter: int = Field(default=settings.ROOT_MAX_ITER, gt=0)
    root_tol: float = Field(default=settings.ROOT_TOL, gt=0)
    track_residual: float = Field(default=settings.TRACK_RESIDUAL, gt=0)
    step_floor: float = Field(default=settings.STEP_FLOOR, gt=0)
    corrector_max_iter: int = Field(default=settings.CORRECTOR_MAX_ITER, gt=0)
    separation_factor: float = Field(default=settings.SEPARATION_FACTOR, ge=1)
    max_param: float = Field(default=settings.MAX_PARAM, gt=0)
    rank_tol: float = Field(default=settings.RANK_TOL, gt=0)
    branch_tol: float = Field(default=settings.BRANCH_TOL, gt=0)
    match_tol: float = Field(default=settings.MATCH_TOL, gt=0)

    def with_overrides(self, overrides: dict[str, str | float | int] | None) -> Tolerances:
        """Return a validated copy with ``overrides`` applied.

        Raises:
            pydantic.ValidationError: If a key is unknown or a value is out of range.
        """
        if not overrides:
            return self
        return Tolerances.model_validate({**self.model_dump(), **overrides})


DEFAULT_TOLERANCES = Tolerances()
