"""Shared behavior of the covercount management commands.

Every command accepts ``--out`` and writes its pydantic report as JSON.
Library exceptions are turned into ``CommandError`` with the exit code of
their family, which Django's ``run_from_argv`` passes to ``sys.exit``.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from lib.cover.errors import ArrangementError, ConfigurationError, GeometryError, MethodDisagreement, NumericalFailure

if TYPE_CHECKING:
    from django.core.management.base import CommandParser
    from pydantic import BaseModel

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_DISAGREEMENT = 4

INPUT_ERRORS = (ConfigurationError, GeometryError, ArrangementError, ValidationError, json.JSONDecodeError, OSError)


def parse_tolerance_overrides(pairs: list[str] | None) -> dict[str, float]:
    """Turn ``["key=value", ...]`` into a dict of floats."""
    overrides: dict[str, float] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            msg = f"Tolerance override must look like key=value, got {pair!r}"
            raise CommandError(msg, returncode=EXIT_CONFIG)
        try:
            overrides[key.strip()] = float(value)
        except ValueError as exc:
            msg = f"Tolerance {key!r} needs a number, got {value!r}"
            raise CommandError(msg, returncode=EXIT_CONFIG) from exc
    return overrides


def parse_seed_list(text: str) -> list[int]:
    """Parse ``"0,1,2"``."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        msg = f"Seeds must be comma-separated integers, got {text!r}"
        raise CommandError(msg, returncode=EXIT_CONFIG) from exc


class CoverCountCommand(BaseCommand):
    """Base for commands that print one JSON report."""

    requires_system_checks = []  # noqa: RUF012

    def create_parser(self, prog_name: str, subcommand: str, **kwargs: Any) -> CommandParser:  # noqa: ANN401
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.add_argument("--out", dest="output_path", type=Path, default=None, help="Write the JSON report here instead of stdout")
        return parser

    def execute(self, *args: Any, **options: Any) -> str | None:  # noqa: ANN401
        try:
            return super().execute(*args, **options)
        except INPUT_ERRORS as exc:
            logger.exception("[CLI] Invalid input")
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=EXIT_CONFIG) from exc
        except NumericalFailure as exc:
            logger.exception("[CLI] Numerical failure")
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=EXIT_NUMERICAL) from exc
        except MethodDisagreement as exc:
            logger.exception("[CLI] Methods disagree")
            self.stderr.write(json.dumps(exc.diagnostics, indent=2))
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=EXIT_DISAGREEMENT) from exc

    def write_report(self, report: BaseModel, output_path: Path | None = None) -> None:
        """Write a report as JSON to ``output_path`` or stdout."""
        text = report.model_dump_json(by_alias=True, indent=2)
        if output_path is None:
            self.stdout.write(text)
            return
        output_path.write_text(text + "\n", encoding="utf-8")
        logger.info("[CLI] Wrote %s", output_path)
