"""Ground-truth solver: shortest cell paths and minimal instruction sequences.

The reference solution for a maze is the first entry of optimal_solutions,
which minimizes instruction count (cell moves first, turns as tie-break by
construction) and breaks remaining ties deterministically.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .grid import Heading, Maze, MazeError, cell_rc, neighbors, passable
from .instructions import ExitAt, Forward, Instruction, StepIn, Turn, render_sequence
from .simulator import initial_heading

_CLOCKWISE = (Heading.N, Heading.E, Heading.S, Heading.W)


class UnsolvableMazeError(ValueError):
    """No cell path exists from entrance to exit."""


@dataclass(frozen=True)
class Solution:
    """Entrance-to-exit cell path with its first-person instruction sequence."""

    cells: tuple
    instructions: tuple
    turn_count: int


def bfs_distances(maze: Maze, start: int) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        for nxt in neighbors(maze, cell):
            if nxt not in dist:
                dist[nxt] = dist[cell] + 1
                queue.append(nxt)
    return dist


def shortest_cell_paths(maze: Maze) -> list[list[int]]:
    """All minimal-length cell paths entrance -> exit, lexicographic order."""
    start, goal = maze.entrance.cell, maze.exit.cell
    dist = bfs_distances(maze, start)
    if goal not in dist:
        raise UnsolvableMazeError(f"no path from {start} to {goal}")
    # Back-walk from the goal along strictly decreasing BFS layers.
    paths: list[list[int]] = []

    def back(cell: int, suffix: list[int]) -> None:
        if cell == start:
            paths.append([start] + suffix)
            return
        for prev in neighbors(maze, cell):
            if dist.get(prev) == dist[cell] - 1:
                back(prev, [cell] + suffix)

    back(goal, [])
    return sorted(paths)


def _move_heading(maze: Maze, a: int, b: int) -> Heading:
    ra, ca = cell_rc(maze, a)
    rb, cb = cell_rc(maze, b)
    for h in _CLOCKWISE:
        if (rb - ra, cb - ca) == h.delta:
            return h
    raise MazeError(f"cells {a} and {b} are not adjacent")


def _turns_to(current: Heading, target: Heading) -> list[Instruction]:
    delta = (_CLOCKWISE.index(target) - _CLOCKWISE.index(current)) % 4
    if delta == 0:
        return []
    if delta == 1:
        return [Turn("right")]
    if delta == 3:
        return [Turn("left")]
    return [Turn("right"), Turn("right")]


def emit_instructions(maze: Maze, cells: list[int] | tuple) -> list[Instruction]:
    """Turn a valid entrance->exit cell path into first-person instructions.

    Consecutive same-heading moves merge into one Forward to the run's last
    cell; a final turn is added when needed to face the exit side.
    """
    cells = list(cells)
    if not cells:
        raise MazeError("empty cell path")
    if cells[0] != maze.entrance.cell:
        raise MazeError(f"path starts at {cells[0]}, entrance is {maze.entrance.cell}")
    if cells[-1] != maze.exit.cell:
        raise MazeError(f"path ends at {cells[-1]}, exit is {maze.exit.cell}")
    for a, b in zip(cells, cells[1:]):
        if not passable(maze, a, b):
            raise MazeError(f"path blocked between {a} and {b}")

    heading = initial_heading(maze)
    instrs: list[Instruction] = [StepIn(cells[0])]
    i = 1
    while i < len(cells):
        move = _move_heading(maze, cells[i - 1], cells[i])
        run_end = i
        while run_end + 1 < len(cells) and _move_heading(maze, cells[run_end], cells[run_end + 1]) == move:
            run_end += 1
        instrs.extend(_turns_to(heading, move))
        heading = move
        instrs.append(Forward(cells[run_end]))
        i = run_end + 1
    instrs.extend(_turns_to(heading, maze.exit.side))
    instrs.append(ExitAt(cells[-1]))
    return instrs


def optimal_solutions(maze: Maze) -> list[Solution]:
    """All minimal-instruction solutions over the shortest cell paths,
    sorted by (turn count, lexicographic cell path)."""
    candidates = []
    for path in shortest_cell_paths(maze):
        instrs = emit_instructions(maze, path)
        turns = sum(1 for x in instrs if isinstance(x, Turn))
        candidates.append(Solution(tuple(path), tuple(instrs), turns))
    best = min(len(s.instructions) for s in candidates)
    chosen = [s for s in candidates if len(s.instructions) == best]
    return sorted(chosen, key=lambda s: (s.turn_count, s.cells))


def reference_solution(maze: Maze) -> Solution:
    return optimal_solutions(maze)[0]


def solution_text(maze: Maze) -> str:
    """Canonical text of the reference solution, one line per instruction."""
    return render_sequence(reference_solution(maze).instructions)
