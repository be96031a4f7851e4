"""Pydantic schema for the validated configuration of one command run."""

from __future__ import annotations

from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from covercount import settings


class RunMode(StrEnum):
    PREDICT = "predict"
    CARNOT = "carnot"
    COMPUTE = "compute"
    ZARISKI = "zariski"
    VERIFY = "verify"


_REQUIRED: dict[RunMode, tuple[str, ...]] = {
    RunMode.PREDICT: ("b", "mu"),
    RunMode.CARNOT: ("mu", "j_triple", "d"),
    RunMode.ZARISKI: ("b",),
    RunMode.VERIFY: ("b",),
}


class RunConfig(BaseModel):
    """Options of a command after parsing; recorded in every report's metadata."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: RunMode
    b: int | None = Field(default=None, ge=3)
    mu: int | None = Field(default=None, ge=2)
    d: int | None = Field(default=None, ge=1)
    j_triple: tuple[int, int, int] | None = None
    seed: int = Field(default=0, ge=0)
    seeds: list[int] | None = None
    tolerance_overrides: dict[str, float] = Field(default_factory=dict)
    input_path: Path | None = None
    output_path: Path | None = None
    export_path: Path | None = None
    perturbed: bool = True
    oracle: bool = False
    include_validity: bool = False
    samples: int = Field(default=20, ge=0)

    @model_validator(mode="after")
    def _check_mode_fields(self) -> RunConfig:
        missing = [name for name in _REQUIRED.get(self.mode, ()) if getattr(self, name) is None]
        if self.mode is RunMode.COMPUTE and self.input_path is None and (self.b is None or self.mu is None):
            missing.append("b and mu (or an input file)")
        if missing:
            msg = f"{self.mode} needs {', '.join(missing)}"
            raise ValueError(msg)
        if self.mode is RunMode.VERIFY and self.b is not None and self.b > settings.VERIFY_MAX_DEGREE:
            msg = f"verify is limited to b <= {settings.VERIFY_MAX_DEGREE}, got {self.b}"
            raise ValueError(msg)
        return self

    def summary(self) -> dict:
        """JSON-ready dict without unset optional fields."""
        return self.model_dump(mode="json", exclude_none=True)
