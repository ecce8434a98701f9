import json
from pathlib import Path

import pytest

from mazenav.grid import Heading, Maze, Opening
from mazenav.instructions import ExitAt, Forward, StepIn, Turn

FIXTURES = Path(__file__).parent / "fixtures"


def make_m0() -> Maze:
    """The worked 2x5 maze: walls 0-1, 2-3, 6-7, 8-9; in at 8/S, out at 1/N."""
    return Maze(
        rows=2,
        cols=5,
        walls=frozenset({(0, 1), (2, 3), (6, 7), (8, 9)}),
        entrance=Opening(8, Heading.S),
        exit=Opening(1, Heading.N),
    )


def make_m0_nowall() -> Maze:
    return Maze(2, 5, frozenset(), Opening(8, Heading.S), Opening(1, Heading.N))


M0_SOLUTION = (
    StepIn(8),
    Turn("left"),
    Forward(7),
    Turn("right"),
    Forward(2),
    Turn("left"),
    Forward(1),
    Turn("right"),
    ExitAt(1),
)


@pytest.fixture
def m0() -> Maze:
    return make_m0()


@pytest.fixture
def m0_nowall() -> Maze:
    return make_m0_nowall()


@pytest.fixture
def m0_solution() -> tuple:
    return M0_SOLUTION


@pytest.fixture
def golden_description() -> str:
    return (FIXTURES / "golden_description.txt").read_text(encoding="utf-8")


@pytest.fixture
def golden_solution() -> str:
    return (FIXTURES / "golden_solution.txt").read_text(encoding="utf-8")


@pytest.fixture
def leniency_variants() -> dict:
    return json.loads((FIXTURES / "leniency.json").read_text(encoding="utf-8"))
