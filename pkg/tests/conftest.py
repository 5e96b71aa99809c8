"""Shared fixtures and the acceptance-criteria summary hook."""

from __future__ import annotations

from pathlib import Path

import pytest

from gonorm import Graph, load_graph, load_schema

FIXTURES = Path(__file__).resolve().parent / "fixtures"

# One line per acceptance criterion, echoed after the run so the verdict is
# visible even when pytest captures test output.
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fixture_graph(name: str) -> Graph:
    return load_graph(str(FIXTURES / name))


def fixture_schema(name: str):
    return load_schema(str(FIXTURES / name))


@pytest.fixture
def university_graph() -> Graph:
    return fixture_graph("university.graph.json")


@pytest.fixture
def students_graph() -> Graph:
    return fixture_graph("students.graph.json")


@pytest.fixture
def metrics_graph() -> Graph:
    return fixture_graph("metrics_example.graph.json")
