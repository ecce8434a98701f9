"""First-person execution of instruction sequences against a maze.

All violations are reported as Fault values rather than exceptions so that
scoring can pinpoint the first error. The fault kinds form a closed set;
PROVIDER_ERROR is never produced here but reuses the same vocabulary for
trials whose transport failed before any instruction existed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .grid import Heading, Maze, Pose, passable, rotate, step_cell
from .instructions import ExitAt, Forward, Instruction, StepIn, Turn


class FaultKind(Enum):
    WALL_BLOCKED = "WallBlocked"
    OFF_GRID = "OffGrid"
    NOT_ON_RAY = "NotOnRay"
    NOT_STARTED = "NotStarted"
    ALREADY_EXITED = "AlreadyExited"
    WRONG_START_CELL = "WrongStartCell"
    WRONG_EXIT_CELL = "WrongExitCell"
    WRONG_EXIT_HEADING = "WrongExitHeading"
    UNPARSEABLE_STEP = "UnparseableStep"
    PROVIDER_ERROR = "ProviderError"


@dataclass(frozen=True)
class Fault:
    kind: FaultKind
    detail: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "detail": self.detail}


@dataclass(frozen=True)
class StepOutcome:
    """Result of one instruction: a new pose, a clean exit, or a fault."""

    pose: Pose | None = None
    exited: bool = False
    fault: Fault | None = None

    @property
    def ok(self) -> bool:
        return self.fault is None


@dataclass(frozen=True)
class ExecutionTrace:
    """Poses after each in-maze step plus where (if anywhere) execution failed.

    ``failed_at`` is None only for a clean exit. A sequence that runs out of
    instructions without exiting gets failed_at = len(instructions) and no
    fault; the exit instruction itself contributes no pose (the navigator
    leaves the grid).
    """

    poses: tuple = ()
    failed_at: int | None = None
    fault: Fault | None = None

    @property
    def complete(self) -> bool:
        return self.failed_at is None

    def to_dict(self) -> dict:
        return {
            "poses": [[p.cell, p.heading.value] for p in self.poses],
            "failed_at": self.failed_at,
            "fault": self.fault.to_dict() if self.fault else None,
        }


def initial_heading(maze: Maze) -> Heading:
    """Heading after stepping in: facing into the grid from the entrance side."""
    return maze.entrance.side.opposite()


def _ray_cells(maze: Maze, start: int, heading: Heading) -> list[int]:
    cells = []
    cur = start
    while True:
        nxt = step_cell(maze, cur, heading)
        if nxt is None:
            return cells
        cells.append(nxt)
        cur = nxt


def step(
    maze: Maze, pose: Pose | None, instr: Instruction, *, lenient_exit: bool = False
) -> StepOutcome:
    """Execute one instruction from ``pose`` (None = not yet stepped in)."""
    if isinstance(instr, StepIn):
        if pose is not None:
            return _fault(
                FaultKind.WRONG_START_CELL,
                f"step-in at {instr.cell} after navigation already started",
            )
        if instr.cell != maze.entrance.cell:
            return _fault(
                FaultKind.WRONG_START_CELL,
                f"stepped into {instr.cell}, entrance is {maze.entrance.cell}",
            )
        return StepOutcome(pose=Pose(instr.cell, initial_heading(maze)))

    if pose is None:
        return _fault(FaultKind.NOT_STARTED, f"{type(instr).__name__} before stepping in")

    if isinstance(instr, Turn):
        return StepOutcome(pose=Pose(pose.cell, rotate(pose.heading, instr.direction)))

    if isinstance(instr, Forward):
        if not 0 <= instr.cell < maze.size:
            return _fault(FaultKind.OFF_GRID, f"position {instr.cell} is outside the grid")
        ray = _ray_cells(maze, pose.cell, pose.heading)
        if instr.cell not in ray:
            return _fault(
                FaultKind.NOT_ON_RAY,
                f"position {instr.cell} is not straight ahead from {pose.cell} "
                f"heading {pose.heading.value}",
            )
        prev = pose.cell
        for cell in ray[: ray.index(instr.cell) + 1]:
            if not passable(maze, prev, cell):
                return _fault(FaultKind.WALL_BLOCKED, f"wall between {prev} and {cell}")
            prev = cell
        return StepOutcome(pose=Pose(instr.cell, pose.heading))

    if isinstance(instr, ExitAt):
        if pose.cell != instr.cell or instr.cell != maze.exit.cell:
            return _fault(
                FaultKind.WRONG_EXIT_CELL,
                f"exit requested at {instr.cell} while at {pose.cell}; "
                f"exit is at {maze.exit.cell}",
            )
        if not lenient_exit and pose.heading != maze.exit.side:
            return _fault(
                FaultKind.WRONG_EXIT_HEADING,
                f"facing {pose.heading.value}, exit side is {maze.exit.side.value}",
            )
        return StepOutcome(exited=True)

    raise TypeError(f"not an instruction: {instr!r}")


def _fault(kind: FaultKind, detail: str) -> StepOutcome:
    return StepOutcome(fault=Fault(kind, detail))


def execute(
    maze: Maze, instrs: list[Instruction] | tuple, *, lenient_exit: bool = False
) -> ExecutionTrace:
    """Run instructions in order, stopping at the first fault.

    Complete iff every step succeeded and the final one was a valid exit.
    An empty sequence is, by convention, a NotStarted failure at index 0.
    """
    if not instrs:
        return ExecutionTrace((), 0, Fault(FaultKind.NOT_STARTED, "empty instruction sequence"))
    pose: Pose | None = None
    exited = False
    poses: list[Pose] = []
    for index, instr in enumerate(instrs):
        if exited:
            return ExecutionTrace(
                tuple(poses),
                index,
                Fault(FaultKind.ALREADY_EXITED, "instruction after leaving the maze"),
            )
        outcome = step(maze, pose, instr, lenient_exit=lenient_exit)
        if outcome.fault is not None:
            return ExecutionTrace(tuple(poses), index, outcome.fault)
        if outcome.exited:
            exited = True
        else:
            pose = outcome.pose
            poses.append(outcome.pose)
    if not exited:
        return ExecutionTrace(tuple(poses), len(instrs), None)
    return ExecutionTrace(tuple(poses), None, None)
