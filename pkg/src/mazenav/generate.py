"""Seeded procedural maze generation with controlled difficulty.

Mazes in this benchmark are sparse-wall rooms, not spanning-tree mazes, so
generation is rejection sampling: draw a uniform wall subset of fixed size
plus boundary openings, keep the result when it is solvable, its shortest
path length falls in the configured window, and (by default) its minimal
instruction solution is unique so that step-level scoring is unambiguous.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .grid import Heading, Maze, MazeError, Opening, boundary_openings, internal_adjacencies
from .solver import bfs_distances, optimal_solutions


class GenerationError(RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


@dataclass(frozen=True)
class GenConfig:
    rows: int = 2
    cols: int = 5
    wall_count: int = 4
    min_path: int = 3  # bounds on BFS distance entrance -> exit, in moves
    max_path: int = 6
    require_unique_optimal: bool = True
    opposite_sides: bool = True  # entrance/exit on opposite long sides
    seed: int = 0
    max_attempts: int = 100_000

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must be at least 1x1")
        limit = len(internal_adjacencies(self.rows, self.cols))
        if not 0 <= self.wall_count <= limit:
            raise ValueError(f"wall_count must be in [0, {limit}], got {self.wall_count}")
        if not 1 <= self.min_path <= self.max_path:
            raise ValueError("need 1 <= min_path <= max_path")


def _long_side_pair(rows: int, cols: int) -> tuple[Heading, Heading]:
    return (Heading.N, Heading.S) if cols >= rows else (Heading.W, Heading.E)


def _sample_openings(cfg: GenConfig, rng: random.Random) -> tuple[Opening, Opening]:
    if cfg.opposite_sides:
        first, second = _long_side_pair(cfg.rows, cfg.cols)
        entrance_side = rng.choice((first, second))
        exit_side = second if entrance_side is first else first
        return _opening_on(cfg, entrance_side, rng), _opening_on(cfg, exit_side, rng)
    options = boundary_openings(cfg.rows, cfg.cols)
    entrance = rng.choice(options)
    exit_ = rng.choice([o for o in options if o != entrance])
    return entrance, exit_


def _opening_on(cfg: GenConfig, side: Heading, rng: random.Random) -> Opening:
    if side in (Heading.N, Heading.S):
        col = rng.randrange(cfg.cols)
        row = 0 if side is Heading.N else cfg.rows - 1
    else:
        row = rng.randrange(cfg.rows)
        col = 0 if side is Heading.W else cfg.cols - 1
    return Opening(row * cfg.cols + col, side)


def _candidate(cfg: GenConfig, rng: random.Random) -> Maze | None:
    adjacencies = internal_adjacencies(cfg.rows, cfg.cols)
    walls = rng.sample(adjacencies, cfg.wall_count)
    entrance, exit_ = _sample_openings(cfg, rng)
    try:
        maze = Maze(cfg.rows, cfg.cols, frozenset(walls), entrance, exit_)
    except MazeError:
        return None  # entrance == exit draw in 1xN relaxed mode
    dist = bfs_distances(maze, entrance.cell).get(exit_.cell)
    if dist is None or not cfg.min_path <= dist <= cfg.max_path:
        return None
    if cfg.require_unique_optimal and len(optimal_solutions(maze)) != 1:
        return None
    return maze


def generate(cfg: GenConfig, rng: random.Random | None = None) -> Maze:
    """Deterministic function of cfg.seed (or of the supplied rng stream)."""
    rng = rng if rng is not None else random.Random(cfg.seed)
    for _ in range(cfg.max_attempts):
        maze = _candidate(cfg, rng)
        if maze is not None:
            return maze
    raise GenerationError(
        f"no maze satisfying the constraints after {cfg.max_attempts} attempts"
    )


def generate_corpus(cfg: GenConfig, n_test: int, n_shot: int) -> tuple[list[Maze], list[Maze]]:
    """n_test + n_shot structurally distinct mazes from one seeded stream."""
    if n_test < 0 or n_shot < 0:
        raise ValueError("corpus sizes must be non-negative")
    rng = random.Random(cfg.seed)
    mazes: list[Maze] = []
    seen: set[Maze] = set()
    duplicates = 0
    while len(mazes) < n_test + n_shot:
        maze = generate(cfg, rng)
        if maze in seen:
            duplicates += 1
            if duplicates > cfg.max_attempts:
                raise GenerationError("duplicate rejection budget exhausted")
            continue
        seen.add(maze)
        mazes.append(maze)
    return mazes[:n_test], mazes[n_test:]
