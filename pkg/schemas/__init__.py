"""Pydantic schemas for covercount's configuration, files and reports."""

from .arrangement_file import ArrangementFile, BranchPartEntry, ComponentEntry, CoverEntry
from .reports import (
    ArtalValidityReport,
    CarnotReport,
    CarnotWitness,
    ComponentSummary,
    ConnectedNumberReport,
    OffsetEntry,
    PredictionReport,
    ReportMetadata,
    VerificationReport,
    VerificationRow,
    ZariskiCertificate,
    ZariskiEntry,
)
from .run_config import RunConfig, RunMode
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "DEFAULT_TOLERANCES",
    "ArrangementFile",
    "ArtalValidityReport",
    "BranchPartEntry",
    "CarnotReport",
    "CarnotWitness",
    "ComponentEntry",
    "ComponentSummary",
    "ConnectedNumberReport",
    "CoverEntry",
    "OffsetEntry",
    "PredictionReport",
    "ReportMetadata",
    "RunConfig",
    "RunMode",
    "Tolerances",
    "VerificationReport",
    "VerificationRow",
    "ZariskiCertificate",
    "ZariskiEntry",
]
