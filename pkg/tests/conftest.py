"""Shared, cached locus traces; tracing all of k = 1..4 takes a few seconds."""

from functools import lru_cache

import pytest

from translocus.character_variety import deformation_seeds
from translocus.locus import dihedral_expand, trace_arcs
from translocus.presentation import TwistedTorusKnot


@lru_cache(maxsize=None)
def traced_arcs(k: int):
    return tuple(trace_arcs(deformation_seeds(TwistedTorusKnot(k))))


@lru_cache(maxsize=None)
def diagram(k: int):
    return dihedral_expand(list(traced_arcs(k)))


def main_arc(k: int = 1):
    """The arc from the root nearest 2pi/3, the longest one."""
    return max(traced_arcs(k), key=lambda a: a.x_extent)


@pytest.fixture(scope="session")
def k1_diagram():
    return diagram(1)


@pytest.fixture(scope="session")
def k1_main_arc():
    return main_arc(1)


_acceptance_lines: list[str] = []


def record_criterion(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
