"""Shared helpers: loading bundled example documents."""
from pathlib import Path

import pytest

from finitegames.cliio.fixtures import default_dir
from finitegames.cliio.textformat import parse_file

FIXTURES = default_dir()


def load(stem: str):
    """Parse ``<stem>.game`` from the bundled corpus."""
    return parse_file(Path(FIXTURES) / f"{stem}.game")


@pytest.fixture
def doc():
    return load


# criterion number -> "criterion N: PASS|FAIL  description", filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
