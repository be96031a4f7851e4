"""Tests for the command-line interface and its exit codes."""

from __future__ import annotations

import json
from types import SimpleNamespace
from typing import TYPE_CHECKING

import pytest

from covercount.management.commands import carnot, compute, verify
from lib.cover.errors import StepUnderflow

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from tests.conftest import CommandResult


class TestDispatch:
    """Tests for manage.py dispatch."""

    def test_unknown_command(self, run_command: Callable[..., CommandResult]):
        """Django rejects an unknown command with exit code 1."""
        result = run_command("frobnicate")
        assert result.code == 1
        assert "Unknown command" in result.stderr

    def test_commands_are_registered(self, run_command: Callable[..., CommandResult]):
        """help lists every covercount command under its app."""
        result = run_command("help", "--commands")
        assert result.code == 0
        for name in ("carnot", "compute", "predict", "verify", "zariski"):
            assert name in result.stdout.split()

    def test_missing_required_argument(self, run_command: Callable[..., CommandResult]):
        """argparse errors exit 2."""
        assert run_command("predict", "--b", "6").code == 2


class TestPredict:
    """Tests for the predict command."""

    def test_prediction(self, run_command: Callable[..., CommandResult]):
        """predict --b 6 --mu 3 reports c = 2 with its metadata."""
        result = run_command("predict", "--b", "6", "--mu", "3")
        assert result.code == 0
        report = result.json()
        assert report["c"] == 2
        assert report["lambda"] == 2
        assert report["metadata"]["config"]["b"] == 6
        assert report["metadata"]["version"]

    def test_quartic_fermat_member(self, run_command: Callable[..., CommandResult]):
        """predict --b 4 --mu 4 reports c = 1."""
        assert run_command("predict", "--b", "4", "--mu", "4").json()["c"] == 1

    def test_non_divisor_exits_2(self, run_command: Callable[..., CommandResult]):
        """mu must divide b."""
        result = run_command("predict", "--b", "6", "--mu", "4")
        assert result.code == 2
        assert "NotADivisor" in result.stderr

    def test_out_writes_file(self, run_command: Callable[..., CommandResult], tmp_path: Path):
        """--out sends the report to a file instead of stdout."""
        target = tmp_path / "prediction.json"
        result = run_command("predict", "--b", "4", "--mu", "2", "--out", str(target))
        assert result.code == 0
        assert result.stdout == ""
        assert json.loads(target.read_text())["c"] == 2


class TestCarnot:
    """Tests for the carnot command."""

    def test_verdict_with_oracle(self, run_command: Callable[..., CommandResult]):
        """The congruence and the oracle agree for the collinear cubic triple."""
        report = run_command("carnot", "--mu", "3", "--j", "1", "1", "1", "--d", "1", "--oracle").json()
        assert report["exists"] is True
        assert report["oracle"] is True
        assert report["minimal_contact_degree"] == 1

    def test_oracle_disagreement_exits_4(self, run_command: Callable[..., CommandResult], monkeypatch: pytest.MonkeyPatch):
        """A contradicting oracle is reported as a method disagreement."""
        monkeypatch.setattr(carnot, "contact_divisor_oracle", lambda *args, **kwargs: False)
        result = run_command("carnot", "--mu", "3", "--j", "1", "1", "3", "--d", "3", "--oracle")
        assert result.code == 4
        assert "MethodDisagreement" in result.stderr

    def test_rank_tol_override_reaches_the_oracle(self, run_command: Callable[..., CommandResult]):
        """--tol rank_tol=1.0 puts every singular value inside the ambiguity band."""
        result = run_command("carnot", "--mu", "3", "--j", "1", "1", "1", "--d", "1", "--oracle", "--tol", "rank_tol=1.0")
        assert result.code == 3
        assert "NumericalRankAmbiguous" in result.stderr

    def test_tolerances_are_recorded(self, run_command: Callable[..., CommandResult]):
        """The effective rank_tol appears in the report metadata."""
        report = run_command("carnot", "--mu", "3", "--j", "1", "1", "1", "--d", "1", "--oracle", "--tol", "rank_tol=1e-9").json()
        assert report["metadata"]["tolerances"]["rank_tol"] == 1e-9
        assert report["oracle"] is True


class TestZariski:
    """Tests for the zariski command."""

    def test_sextic_triple(self, run_command: Callable[..., CommandResult]):
        """zariski --b 6 gives three distinct members."""
        result = run_command("zariski", "--b", "6")
        certificate = result.json()
        assert certificate["k"] == 3
        assert certificate["distinct"] is True
        assert "Zariski triple" in result.stderr

    def test_prime_degree(self, run_command: Callable[..., CommandResult]):
        """zariski --b 7 has no pair."""
        assert run_command("zariski", "--b", "7").json()["summary"] == "no pair at this degree"

    def test_validity_reports_attached(self, run_command: Callable[..., CommandResult]):
        """--include-validity adds one report per member."""
        certificate = run_command("zariski", "--b", "3", "--include-validity", "--samples", "3").json()
        assert len(certificate["validity"]) == 1
        assert certificate["validity"][0]["is_valid"] is True


class TestCompute:
    """Tests for the compute command's error handling."""

    def test_malformed_config_exits_2(self, run_command: Callable[..., CommandResult], tmp_path: Path):
        """Broken JSON is a configuration error."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert run_command("compute", "--config", str(path)).code == 2

    def test_missing_config_file_exits_2(self, run_command: Callable[..., CommandResult], tmp_path: Path):
        """A missing input file is a configuration error."""
        assert run_command("compute", "--config", str(tmp_path / "absent.json")).code == 2

    def test_needs_a_source(self, run_command: Callable[..., CommandResult]):
        """Without --b/--mu or --config there is nothing to compute."""
        assert run_command("compute", "--seed", "1").code == 2

    @pytest.mark.parametrize("override", ["nonsense=1", "step_floor", "step_floor=-1"])
    def test_bad_tolerance_exits_2(self, run_command: Callable[..., CommandResult], override: str):
        """Unknown keys, missing values and out-of-range values are rejected."""
        assert run_command("compute", "--b", "4", "--mu", "2", "--tol", override).code == 2

    def test_numerical_failure_exits_3(self, run_command: Callable[..., CommandResult], monkeypatch: pytest.MonkeyPatch):
        """Tracking failures map to exit code 3."""

        def fail(*args: object, **kwargs: object) -> None:
            msg = "Corrector failed near t=0"
            raise StepUnderflow(msg)

        monkeypatch.setattr(compute, "cross_check", fail)
        result = run_command("compute", "--b", "4", "--mu", "2")
        assert result.code == 3
        assert "StepUnderflow" in result.stderr


class TestVerify:
    """Tests for the verify command's harness behavior."""

    def test_degree_bound(self, run_command: Callable[..., CommandResult]):
        """verify refuses degrees above 12."""
        assert run_command("verify", "--b", "13").code == 2

    def test_bad_seed_list_exits_2(self, run_command: Callable[..., CommandResult]):
        """Seeds must be integers."""
        assert run_command("verify", "--b", "4", "--seeds", "0,x").code == 2

    def test_injected_fault_exits_4(self, run_command: Callable[..., CommandResult], monkeypatch: pytest.MonkeyPatch):
        """A wrong computed value makes the matrix fail."""
        monkeypatch.setattr(verify, "connected_number", lambda *args, **kwargs: SimpleNamespace(c=99, method_agreement=True))
        result = run_command("verify", "--b", "4", "--seeds", "0,1")
        assert result.code == 4
        report = result.json()
        assert len(report["rows"]) == 4
        assert report["all_agree"] is False

    def test_library_failure_is_recorded(self, run_command: Callable[..., CommandResult], monkeypatch: pytest.MonkeyPatch):
        """A numerical failure fills the row's error and fails the matrix."""

        def fail(*args: object, **kwargs: object) -> None:
            msg = "Corrector failed near t=0"
            raise StepUnderflow(msg)

        monkeypatch.setattr(verify, "connected_number", fail)
        result = run_command("verify", "--b", "5")
        assert result.code == 4
        row = result.json()["rows"][0]
        assert row["error"].startswith("StepUnderflow")
        assert row["computed"] is None
