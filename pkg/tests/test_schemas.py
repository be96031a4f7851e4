"""Tests for the pydantic schemas: files, configuration and tolerances."""

from __future__ import annotations

import importlib
from typing import TYPE_CHECKING

import pytest
from pydantic import ValidationError

from covercount import settings
from schemas.arrangement_file import ArrangementFile
from schemas.reports import ZariskiCertificate, ZariskiEntry
from schemas.run_config import RunConfig, RunMode
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances

if TYPE_CHECKING:
    from pathlib import Path

CONIC_FILE = """
{
  "schema": 1,
  "cover": {"m": 2, "parts": [{"degree": 2, "coefficients": [[[2, 0, 0], 1.0, 0.0], [[0, 2, 0], 1.0, 0.0], [[0, 0, 2], -1.0, 0.0]], "weight": 1}]},
  "components": [{"coefficients": [[1, 0], [2, 0.5], [-0.7, 0]]}]
}
"""


class TestArrangementFile:
    """Tests for the arrangement file schema."""

    def test_parses_valid_file(self):
        """Complex coefficients arrive as [re, im] pairs."""
        file = ArrangementFile.from_json(CONIC_FILE)
        assert file.schema_version == 1
        assert file.components[0].coefficients == (1.0, 2 + 0.5j, -0.7)

    def test_rejects_malformed_json(self):
        """Syntax errors surface as validation errors."""
        with pytest.raises(ValidationError):
            ArrangementFile.from_json("{not json")

    def test_rejects_other_schema_versions(self):
        """Only version 1 is understood."""
        with pytest.raises(ValidationError, match="schema"):
            ArrangementFile.from_json(CONIC_FILE.replace('"schema": 1', '"schema": 2'))

    def test_rejects_inhomogeneous_monomials(self):
        """Every exponent triple must sum to the part's degree."""
        with pytest.raises(ValidationError, match="does not have degree"):
            ArrangementFile.from_json(CONIC_FILE.replace("[[0, 0, 2], -1.0", "[[0, 0, 1], -1.0"))

    def test_dump_uses_schema_alias(self):
        """to_json writes the version under "schema"."""
        assert '"schema": 1' in ArrangementFile.from_json(CONIC_FILE).to_json()


class TestTolerances:
    """Tests for tolerance overrides."""

    def test_override_returns_validated_copy(self):
        """Overrides replace single fields and keep the rest."""
        tolerances = DEFAULT_TOLERANCES.with_overrides({"step_floor": 1e-10})
        assert tolerances.step_floor == 1e-10
        assert tolerances.cluster_eps == DEFAULT_TOLERANCES.cluster_eps

    def test_no_overrides_is_identity(self):
        """An empty override map returns the same object."""
        assert DEFAULT_TOLERANCES.with_overrides({}) is DEFAULT_TOLERANCES

    def test_unknown_key_is_rejected(self):
        """Typos do not pass silently."""
        with pytest.raises(ValidationError, match="step_flor"):
            DEFAULT_TOLERANCES.with_overrides({"step_flor": 1e-10})

    def test_values_must_be_positive(self):
        """Tolerances are strictly positive."""
        with pytest.raises(ValidationError):
            Tolerances(track_residual=0)

    def test_environment_defaults(self, monkeypatch: pytest.MonkeyPatch):
        """Settings read tolerances from the environment at import time."""
        monkeypatch.setenv("COVERCOUNT_STEP_FLOOR", "1e-11")
        try:
            assert importlib.reload(settings).STEP_FLOOR == 1e-11
        finally:
            monkeypatch.delenv("COVERCOUNT_STEP_FLOOR")
            importlib.reload(settings)


class TestRunConfig:
    """Tests for per-mode configuration checks."""

    def test_predict_needs_b_and_mu(self):
        """Missing fields are named in the error."""
        with pytest.raises(ValidationError, match="predict needs mu"):
            RunConfig(mode=RunMode.PREDICT, b=6)

    def test_compute_accepts_input_file(self, tmp_path: Path):
        """An arrangement file replaces --b/--mu."""
        config = RunConfig(mode=RunMode.COMPUTE, input_path=tmp_path / "a.json")
        assert config.b is None

    def test_verify_degree_bound(self):
        """verify stops at degree 12."""
        with pytest.raises(ValidationError, match="b <= 12"):
            RunConfig(mode=RunMode.VERIFY, b=13)

    def test_rejects_unknown_fields(self):
        """Extra fields are configuration errors."""
        with pytest.raises(ValidationError):
            RunConfig(mode=RunMode.ZARISKI, b=6, colour="blue")

    def test_summary_omits_unset_fields(self):
        """summary() is the JSON-ready config without None values."""
        summary = RunConfig(mode=RunMode.ZARISKI, b=6).summary()
        assert summary["mode"] == "zariski"
        assert "mu" not in summary


class TestZariskiCertificate:
    """Tests for certificate summaries."""

    @pytest.mark.parametrize(
        ("values", "summary"),
        [
            ([1], "no pair at this degree"),
            ([2, 1], "Zariski pair"),
            ([3, 2, 1], "Zariski triple"),
            ([4, 3, 2, 1], "Zariski 4-plet"),
            ([2, 2], "connected numbers do not separate the pair"),
        ],
    )
    def test_summary(self, values: list[int], summary: str):
        """The summary names the tuple size and whether it separates."""
        entries = [ZariskiEntry(mu=k + 2, j_triple=(1, 1, k + 2), c=c, minimal_contact_degree=k + 2) for k, c in enumerate(values)]
        assert ZariskiCertificate(b=12, entries=entries).summary == summary
