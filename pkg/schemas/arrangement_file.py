"""Pydantic schema for arrangement files (schema version 1)."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from lib.pydantic_utils import ComplexTriple


class BranchPartEntry(BaseModel):
    """One branch form: sparse coefficients ``[[a, b, c], re, im]`` and its weight."""
    degree: int = Field(..., ge=0)
    coefficients: list[tuple[tuple[int, int, int], float, float]]
    weight: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check_exponents(self) -> BranchPartEntry:
        for exponents, _, _ in self.coefficients:
            if min(exponents) < 0 or sum(exponents) != self.degree:
                msg = f"Monomial {list(exponents)} does not have degree {self.degree}"
                raise ValueError(msg)
        return self


class CoverEntry(BaseModel):
    """The cover degree and its branch parts."""
    m: int = Field(..., ge=2)
    parts: list[BranchPartEntry] = Field(..., min_length=1)


class ComponentEntry(BaseModel):
    """A line ax + by + cz = 0."""
    coefficients: ComplexTriple


class ArrangementFile(BaseModel):
    """A cover and the lines of an arrangement, as stored on disk."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=1, alias="schema")
    cover: CoverEntry
    components: list[ComponentEntry] = Field(..., min_length=1)
    labels: list[str] | None = None
    metadata: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_json(cls, text: str) -> ArrangementFile:
        """Parse an arrangement file from a JSON string.

        Raises:
            pydantic.ValidationError: If the JSON is malformed or does not match the schema.
        """
        return cls.model_validate_json(text)

    @classmethod
    def load(cls, path: str | Path) -> ArrangementFile:
        """Read and parse an arrangement file."""
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def to_json(self) -> str:
        """Serialize with the on-disk field names."""
        return self.model_dump_json(by_alias=True, indent=2)
