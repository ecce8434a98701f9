"""First-person navigation instruction grammar and lenient line parser.

Accepted forms (case-insensitive, enumeration markers and trailing
punctuation stripped; see docs/instruction_grammar.md for the EBNF):

    ... step into position N          -> StepIn(N)
    Turn [to my/your/the] left|right  -> Turn(direction)
    Walk|Move|Go [forward] to position N -> Forward(N)
    Exit|Leave [the maze] from|at|through position N -> ExitAt(N)

Whole responses are parsed line by line; lines that match nothing are kept
as rejected lines with a reason, never raised, so scoring can decide how to
treat them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class StepIn:
    cell: int

    def __post_init__(self) -> None:
        _check_cell(self.cell)


@dataclass(frozen=True)
class Turn:
    direction: str  # "left" | "right"

    def __post_init__(self) -> None:
        if self.direction not in ("left", "right"):
            raise ValueError(f"turn direction must be left/right, got {self.direction!r}")


@dataclass(frozen=True)
class Forward:
    cell: int

    def __post_init__(self) -> None:
        _check_cell(self.cell)


@dataclass(frozen=True)
class ExitAt:
    cell: int

    def __post_init__(self) -> None:
        _check_cell(self.cell)


Instruction = Union[StepIn, Turn, Forward, ExitAt]


def _check_cell(cell: int) -> None:
    if cell < 0:
        raise ValueError(f"cell must be non-negative, got {cell}")


class UnparseableLine(ValueError):
    """A single line that matches no instruction form; carries the reason."""

    def __init__(self, line: str, reason: str):
        super().__init__(f"{reason}: {line!r}")
        self.line = line
        self.reason = reason


REASON_NO_VERB = "no verb match"
REASON_NO_POSITION = "no position number"
REASON_AMBIGUOUS_DIRECTION = "ambiguous direction"
REASON_EXTRA_CONTENT = "unrecognized instruction form"

_ENUM_MARKER = re.compile(r"^(?:step\s+\d+\s*[:.)\-]\s*|\d+\s*[.):\-]\s*|[-*•]\s+)", re.I)
_TRAILING_PUNCT = re.compile(r"[\s.!,;:]+$")

_STEP_IN = re.compile(r"(?:^|\b)steps?\s+into\s+position\s+(\d+)$", re.I)
_TURN = re.compile(r"^turn(?:\s+to\s+(?:my|your|the))?\s+(left|right)$", re.I)
_FORWARD = re.compile(r"^(?:walk|move|go)(?:\s+forward)?\s+to\s+position\s+(\d+)$", re.I)
_EXIT = re.compile(
    r"^(?:exit|leave)(?:\s+the\s+maze)?\s+(?:from|at|through)\s+position\s+(\d+)$", re.I
)

_ANY_VERB = re.compile(r"\b(step|turn|walk|move|go|exit|leave)\b", re.I)
_DIRECTION_WORDS = re.compile(r"\b(left|right)\b", re.I)


def normalize_line(line: str) -> str:
    """Strip enumeration markers, trailing punctuation, and extra whitespace."""
    s = " ".join(line.split())
    s = _ENUM_MARKER.sub("", s)
    s = _TRAILING_PUNCT.sub("", s)
    return s.strip()


def parse_line(line: str) -> Instruction:
    """Parse one response line into an Instruction; raises UnparseableLine."""
    s = normalize_line(line)
    if not s:
        raise UnparseableLine(line, REASON_NO_VERB)
    m = _STEP_IN.search(s)
    if m:
        return StepIn(int(m.group(1)))
    m = _EXIT.match(s)
    if m:
        return ExitAt(int(m.group(1)))
    m = _FORWARD.match(s)
    if m:
        return Forward(int(m.group(1)))
    m = _TURN.match(s)
    if m:
        return Turn(m.group(1).lower())
    raise UnparseableLine(line, _failure_reason(s))


def _failure_reason(s: str) -> str:
    verb = _ANY_VERB.search(s)
    if not verb:
        return REASON_NO_VERB
    if verb.group(1).lower() == "turn":
        dirs = {m.lower() for m in _DIRECTION_WORDS.findall(s)}
        if len(dirs) != 1:
            return REASON_AMBIGUOUS_DIRECTION
        return REASON_EXTRA_CONTENT
    if not re.search(r"\d", s):
        return REASON_NO_POSITION
    return REASON_EXTRA_CONTENT


def canonical_render(instr: Instruction) -> str:
    """Canonical line form of an instruction; parse_line inverts it exactly."""
    if isinstance(instr, StepIn):
        return f"Start facing into the maze entrance and step into position {instr.cell}"
    if isinstance(instr, Turn):
        return f"Turn {instr.direction}"
    if isinstance(instr, Forward):
        return f"Walk forward to position {instr.cell}"
    if isinstance(instr, ExitAt):
        return f"Exit the maze from position {instr.cell}"
    raise TypeError(f"not an instruction: {instr!r}")


def render_sequence(instrs: list[Instruction] | tuple[Instruction, ...]) -> str:
    """One canonical line per instruction, newline-joined."""
    return "\n".join(canonical_render(i) for i in instrs)


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    text: str
    reason: str


@dataclass(frozen=True)
class ParsedResponse:
    """All recognized instructions plus every non-blank line that failed.

    ``instruction_lines`` holds the 1-based source line of each instruction,
    which lets scoring locate rejected lines inside the instruction block.
    """

    instructions: tuple = ()
    instruction_lines: tuple = ()
    rejected_lines: tuple = field(default_factory=tuple)

    def scored_prefix(self) -> tuple[list[Instruction], bool]:
        """Instructions usable for scoring, stopping at the first rejected
        line strictly inside the recognized block. Returns (prefix, truncated).
        """
        if not self.instructions:
            return [], False
        first, last = self.instruction_lines[0], self.instruction_lines[-1]
        interior = [r.line_no for r in self.rejected_lines if first < r.line_no < last]
        if not interior:
            return list(self.instructions), False
        cutoff = min(interior)
        usable = [
            instr
            for instr, line_no in zip(self.instructions, self.instruction_lines)
            if line_no < cutoff
        ]
        return usable, True


def parse_response(text: str) -> ParsedResponse:
    """Split a full model response into instructions and rejected lines.

    Never raises: blank lines are skipped and unparseable lines (including
    any leading/trailing prose) are recorded per line with a reason.
    """
    instructions: list[Instruction] = []
    lines: list[int] = []
    rejected: list[RejectedLine] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            instructions.append(parse_line(raw))
            lines.append(line_no)
        except UnparseableLine as err:
            rejected.append(RejectedLine(line_no, raw.strip(), err.reason))
    return ParsedResponse(tuple(instructions), tuple(lines), tuple(rejected))


_KINDS = {"step_in": StepIn, "forward": Forward, "exit_at": ExitAt}


def instruction_to_dict(instr: Instruction) -> dict:
    if isinstance(instr, Turn):
        return {"kind": "turn", "direction": instr.direction}
    for kind, cls in _KINDS.items():
        if isinstance(instr, cls):
            return {"kind": kind, "cell": instr.cell}
    raise TypeError(f"not an instruction: {instr!r}")


def instruction_from_dict(data: dict) -> Instruction:
    kind = data["kind"]
    if kind == "turn":
        return Turn(data["direction"])
    if kind in _KINDS:
        return _KINDS[kind](data["cell"])
    raise ValueError(f"unknown instruction kind: {kind!r}")
