"""Shared pytest fixtures for the command and schema tests."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import pytest
from django.core.management import execute_from_command_line

if TYPE_CHECKING:
    from collections.abc import Callable


@dataclass
class CommandResult:
    """Exit code and captured output of one command run."""

    code: int
    stdout: str
    stderr: str

    def json(self) -> Any:  # noqa: ANN401
        return json.loads(self.stdout)


@pytest.fixture
def run_command(capsys: pytest.CaptureFixture[str]) -> Callable[..., CommandResult]:
    """Run ``manage.py <args>`` in-process and capture its exit code and output."""

    def run(*args: str) -> CommandResult:
        try:
            execute_from_command_line(["manage.py", *args])
            code = 0
        except SystemExit as exc:
            code = exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 1)
        captured = capsys.readouterr()
        return CommandResult(code=code, stdout=captured.out, stderr=captured.err)

    return run
