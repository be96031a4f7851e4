"""Pydantic schemas for the JSON reports written by the commands."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, computed_field

from covercount import __version__
from lib.pydantic_utils import ComplexPair, ComplexTriple
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances


class ReportMetadata(BaseModel):
    """Everything needed to reproduce a report."""
    version: str = Field(default=__version__, description="covercount version that produced the report")
    seed: int | None = Field(default=None, description="Master seed of the run, if it used randomness")
    tolerances: Tolerances = Field(default=DEFAULT_TOLERANCES)
    config: dict[str, Any] = Field(default_factory=dict, description="The command's effective configuration")


class CarnotWitness(BaseModel):
    """Carnot verdict for one candidate connected number."""
    divisor: int = Field(..., description="Candidate connected number lambda, a divisor of b")
    d: int = Field(..., description="Degree b / lambda of the contact divisor")
    exists: bool


class PredictionReport(BaseModel):
    """Exact prediction of the connected number of a Fermat tangent triple."""
    model_config = ConfigDict(populate_by_name=True)

    b: int
    mu: int
    nu: int
    j_triple: tuple[int, int, int]
    carnot_exponent: int
    lambda_: int = Field(..., alias="lambda", description="Largest divisor of b passing the Carnot test")
    witnesses: list[CarnotWitness]
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)

    @computed_field
    @property
    def c(self) -> int:
        """The predicted connected number."""
        return self.lambda_

    def __str__(self) -> str:
        """Return a one-line summary."""
        return f"b={self.b} mu={self.mu} j={self.j_triple}: c={self.c}"


class ZariskiEntry(BaseModel):
    """One member B_{b,mu} of a Zariski tuple."""
    mu: int
    j_triple: tuple[int, int, int]
    c: int
    minimal_contact_degree: int


class ArtalValidityReport(BaseModel):
    """Checks that a branch curve and lines form a valid Artal arrangement."""
    degree: int
    m: int
    tangency: list[list[int]] = Field(
        ..., description="Root multiplicities of the branch curve on each line (root at infinity included)"
    )
    totally_tangent: bool
    coincident_pairs: list[tuple[int, int]] = Field(default_factory=list)
    concurrent_triples: list[tuple[int, int, int]] = Field(default_factory=list)
    on_branch_intersections: list[tuple[int, int]] = Field(default_factory=list)
    complement_connected: bool
    degree_divisible: bool
    smooth_near_tangency: bool | None = Field(
        default=None, description="Gradient spot check near each tangency; None when not run"
    )
    min_gradient: float | None = None

    @computed_field
    @property
    def no_triple_points(self) -> bool:
        """No three lines pass through one point."""
        return not self.concurrent_triples and not self.coincident_pairs

    @computed_field
    @property
    def intersections_off_branch(self) -> bool:
        """Every pairwise intersection misses the branch curve."""
        return not self.on_branch_intersections

    @computed_field
    @property
    def is_valid(self) -> bool:
        """All checks pass (a skipped smoothness check counts as passing)."""
        return (
            self.totally_tangent
            and self.no_triple_points
            and self.intersections_off_branch
            and self.complement_connected
            and self.degree_divisible
            and self.smooth_near_tangency is not False
        )


class ZariskiCertificate(BaseModel):
    """Connected numbers of the Fermat family of degree b, one per divisor mu."""
    b: int
    entries: list[ZariskiEntry]
    validity: list[ArtalValidityReport] | None = None
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)

    @computed_field
    @property
    def k(self) -> int:
        """Number of members."""
        return len(self.entries)

    @computed_field
    @property
    def distinct(self) -> bool:
        """All members have different connected numbers."""
        values = [entry.c for entry in self.entries]
        return len(set(values)) == len(values)

    @computed_field
    @property
    def summary(self) -> str:
        """Human-readable verdict."""
        if self.k < 2:  # noqa: PLR2004
            return "no pair at this degree"
        names = {2: "pair", 3: "triple"}
        kind = names.get(self.k, f"{self.k}-plet")
        if not self.distinct:
            return f"connected numbers do not separate the {kind}"
        return f"Zariski {kind}"

    def __str__(self) -> str:
        """Return the summary with the connected numbers."""
        values = ", ".join(f"mu={entry.mu}: c={entry.c}" for entry in self.entries)
        return f"b={self.b}: {self.summary} ({values})"


class OffsetEntry(BaseModel):
    """The sheet offset of two components over one intersection point."""
    components: tuple[int, int]
    point: ComplexTriple
    params: tuple[ComplexPair, ComplexPair]
    offset: int


class ComponentSummary(BaseModel):
    """Per-line branch data."""
    index: int
    label: str | None = None
    splitting: int
    weights: list[int] = Field(..., description="Weighted multiplicities I_P of the finite branch points")
    branch_params: list[ComplexPair]
    infinity_weight: int
    base_param: ComplexPair
    seed: int


class ConnectedNumberReport(BaseModel):
    """Connected number of an arrangement, with the data both methods used."""
    c: int = Field(..., ge=1, description="Connected components of the preimage (union-find)")
    m: int
    n: int
    offsets_c: int | None = Field(default=None, description="Connected number from the offset subgroup")
    method_agreement: bool | None = None
    components: list[ComponentSummary]
    offsets: list[OffsetEntry] = Field(default_factory=list)
    cycle_sums: list[int] = Field(default_factory=list)
    node_count: int
    intra_edge_count: int
    inter_edge_count: int
    max_residual: float
    warnings: list[str] = Field(default_factory=list)
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)

    @computed_field
    @property
    def per_component_splitting(self) -> list[int]:
        """Splitting count of each line."""
        return [component.splitting for component in self.components]

    def __str__(self) -> str:
        """Return a one-line summary."""
        agreement = "n/a" if self.method_agreement is None else str(self.method_agreement).lower()
        return f"c={self.c} (m={self.m}, components={len(self.components)}, agreement={agreement})"


class VerificationRow(BaseModel):
    """Predicted versus computed connected number for one (mu, seed)."""
    b: int
    mu: int
    seed: int
    predicted: int
    computed: int | None = None
    method_agreement: bool | None = None
    error: str | None = None

    @computed_field
    @property
    def agrees(self) -> bool:
        """Computation succeeded, both methods agree and match the prediction."""
        return self.error is None and self.computed == self.predicted and self.method_agreement is not False


class VerificationReport(BaseModel):
    """Matrix of verification rows for one degree."""
    b: int
    seeds: list[int]
    rows: list[VerificationRow]
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)

    @computed_field
    @property
    def all_agree(self) -> bool:
        """Every row agrees."""
        return all(row.agrees for row in self.rows)


class CarnotReport(BaseModel):
    """Carnot verdict for one (mu, j, d), optionally confirmed by the interpolation oracle."""
    mu: int
    j_triple: tuple[int, int, int]
    d: int
    carnot_exponent: int
    exists: bool
    minimal_contact_degree: int
    oracle: bool | None = Field(default=None, description="Interpolation oracle verdict; None when not run")
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)
