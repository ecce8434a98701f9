"""Canonical textual maze description, its parser, and an ASCII renderer.

The description is the wire format embedded in prompts, so serialization is
deterministic and byte-stable. The layout, for the default 2x5 maze:

    Here is the text description of a maze:
      - The floor is always composed of 10 squared zones or positions, ...
      - Size is 2 rows by 5 columns
      - The zones are always numbered from 0 to 4 (First row) and 5 to 9 (second row)
      - From a bird's eye perspective, the room has the following zone topology:
            -- x  -- -- --
            0  1  2  3  4
            5  6  7  8  9
            -- -- -- ^  --
      ...entrance/exit statement, wall list...

"^" marks the entrance opening and "x" the exit. Openings on the west/east
sides render as a marker beside the grid row. The parser tolerates
whitespace and blank-line variation but rejects re-worded prose; the
comparison canon is per-line: strip, collapse internal runs of spaces,
drop blank lines.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .grid import Heading, Maze, MazeError, Opening, cell_rc

HEADER = "Here is the text description of a maze:"
TOPOLOGY_HEADER = "- From a bird's eye perspective, the room has the following zone topology:"
WALLS_SENTENCE_1 = "- Walls cannot be traversed. For example, if there was a wall between zones 1 and 2,"
WALLS_SENTENCE_2 = "you would not be able to move from 1 to 2"
WALLS_HEADER = "- Furthermore there are internal walls BETWEEN the following zones:"
NO_WALLS_LINE = "- There are no internal walls between any zones"

_ORDINALS = (
    "First", "second", "third", "fourth", "fifth",
    "sixth", "seventh", "eighth", "ninth", "tenth",
)


class MalformedDescription(ValueError):
    """Description text that does not follow the template; names the first
    offending line."""

    def __init__(self, line_no: int, reason: str, line_text: str = ""):
        super().__init__(f"line {line_no}: {reason}" + (f": {line_text!r}" if line_text else ""))
        self.line_no = line_no
        self.reason = reason
        self.line_text = line_text


@dataclass(frozen=True)
class MazeDescription:
    text: str
    maze_id: str


def _collapse(line: str) -> str:
    return " ".join(line.split())


def canonical_lines(text: str) -> list[str]:
    """The whitespace canon: stripped, space-collapsed, non-blank lines."""
    return [s for s in (_collapse(line) for line in text.splitlines()) if s]


def _ordinal(i: int) -> str:
    if i < len(_ORDINALS):
        return _ORDINALS[i]
    return f"{i + 1}th"


def _numbering_phrase(rows: int, cols: int) -> str:
    segments = [
        f"{r * cols} to {r * cols + cols - 1} ({_ordinal(r)} row)" for r in range(rows)
    ]
    if len(segments) == 1:
        return segments[0]
    return ", ".join(segments[:-1]) + " and " + segments[-1]


def _marker(maze: Maze, cell: int, side: Heading) -> str | None:
    if maze.entrance == Opening(cell, side):
        return "^"
    if maze.exit == Opening(cell, side):
        return "x"
    return None


def _topology_lines(maze: Maze) -> list[str]:
    rows, cols = maze.rows, maze.cols
    west = any(o.side == Heading.W for o in (maze.entrance, maze.exit))
    east = any(o.side == Heading.E for o in (maze.entrance, maze.exit))

    grid_tokens: list[list[str]] = []
    top = [_marker(maze, c, Heading.N) or "--" for c in range(cols)]
    bottom = [_marker(maze, (rows - 1) * cols + c, Heading.S) or "--" for c in range(cols)]
    grid_tokens.append([""] + top + [""] if west or east else top)
    for r in range(rows):
        row = [str(r * cols + c) for c in range(cols)]
        if west or east:
            row = [_marker(maze, r * cols, Heading.W) or ""] + row
            row = row + [_marker(maze, r * cols + cols - 1, Heading.E) or ""]
        grid_tokens.append(row)
    grid_tokens.append([""] + bottom + [""] if west or east else bottom)

    widths = [max(len(line[i]) for line in grid_tokens) for i in range(len(grid_tokens[0]))]
    return [
        " ".join(tok.ljust(w) for tok, w in zip(line, widths)).rstrip()
        for line in grid_tokens
    ]


def serialize(maze: Maze, maze_id: str | None = None) -> MazeDescription:
    """Render a maze as its canonical multi-line description."""
    rows, cols = maze.rows, maze.cols
    row_word = "row" if rows == 1 else "rows"
    col_word = "column" if cols == 1 else "columns"
    lines = [
        HEADER,
        f"  - The floor is always composed of {maze.size} squared zones or positions,"
        " in a chess-board-like pattern",
        f"  - Size is {rows} {row_word} by {cols} {col_word}",
        f"  - The zones are always numbered from {_numbering_phrase(rows, cols)}",
        f"  {TOPOLOGY_HEADER}",
    ]
    lines.extend("        " + t for t in _topology_lines(maze))
    lines.append("")
    lines.append(
        f'  - You enter the maze from the direction of the "^" symbol'
        f" into position {maze.entrance.cell}"
    )
    lines.append(
        f'    and exit at position {maze.exit.cell} in the direction of the "x" symbol, so:'
    )
    lines.append(f"      * ENTRANCE at {maze.entrance.cell}")
    lines.append(f"      * EXIT at {maze.exit.cell}")
    lines.append("")
    lines.append(f"  {WALLS_SENTENCE_1}")
    lines.append(f"    {WALLS_SENTENCE_2}")
    if maze.walls:
        lines.append(f"  {WALLS_HEADER}")
        lines.extend(f"      * {a} and {b}" for a, b in sorted(maze.walls))
    else:
        lines.append(f"  {NO_WALLS_LINE}")
    text = "\n".join(lines) + "\n"
    return MazeDescription(text, maze_id or text_digest(text))


def text_digest(text: str) -> str:
    """Stable short id for a description (hash of its canonical lines)."""
    canon = "\n".join(canonical_lines(text))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


_SIZE_RE = re.compile(r"^- Size is (\d+) rows? by (\d+) columns?$")
_FLOOR_RE = re.compile(
    r"^- The floor is always composed of (\d+) squared zones or positions,"
    r" in a chess-board-like pattern$"
)
_ENTRANCE_RE = re.compile(r"^\* ENTRANCE at (\d+)$")
_EXIT_RE = re.compile(r"^\* EXIT at (\d+)$")
_WALL_ITEM_RE = re.compile(r"^\* (\d+) and (\d+)$")


class _Cursor:
    def __init__(self, text: str):
        entries = [(no, _collapse(raw)) for no, raw in enumerate(text.splitlines(), start=1)]
        self.lines = [(no, s) for no, s in entries if s]
        self.pos = 0

    def peek(self) -> tuple[int, str]:
        if self.pos < len(self.lines):
            return self.lines[self.pos]
        last_no = self.lines[-1][0] if self.lines else 1
        return last_no, ""

    def next(self, expectation: str) -> tuple[int, str]:
        no, s = self.peek()
        if not s:
            raise MalformedDescription(no, f"unexpected end of description, expected {expectation}")
        self.pos += 1
        return no, s

    def expect_match(self, pattern: re.Pattern, expectation: str) -> tuple[int, re.Match]:
        no, s = self.next(expectation)
        m = pattern.match(s)
        if not m:
            raise MalformedDescription(no, f"expected {expectation}", s)
        return no, m

    def expect_prefix(self, prefix: str, expectation: str) -> tuple[int, str]:
        no, s = self.next(expectation)
        if not s.startswith(prefix):
            raise MalformedDescription(no, f"expected {expectation}", s)
        return no, s


def _parse_topology(cur: _Cursor, rows: int, cols: int) -> dict[str, Opening]:
    """Read the rows+2 topology lines and locate the ^ and x markers.

    Marker side comes from which boundary line (or row gutter) holds it;
    exact column alignment is not trusted, the ENTRANCE/EXIT statements
    carry the authoritative cells.
    """
    markers: dict[str, Opening] = {}

    def record(no: int, symbol: str, opening: Opening) -> None:
        if symbol in markers:
            raise MalformedDescription(no, f'duplicate "{symbol}" marker in topology block')
        markers[symbol] = opening

    no, s = cur.next("topology boundary line")
    tokens = s.split()
    if len(tokens) != cols or any(t not in ("--", "x", "^") for t in tokens):
        raise MalformedDescription(no, f"expected {cols} boundary markers (--, x or ^)", s)
    for col, tok in enumerate(tokens):
        if tok in ("x", "^"):
            record(no, tok, Opening(col, Heading.N))

    for r in range(rows):
        no, s = cur.next("topology grid row")
        tokens = s.split()
        expected = [str(r * cols + c) for c in range(cols)]
        west = east = None
        if tokens and tokens[0] in ("x", "^"):
            west, tokens = tokens[0], tokens[1:]
        if tokens and tokens[-1] in ("x", "^"):
            east, tokens = tokens[-1], tokens[:-1]
        if tokens != expected:
            raise MalformedDescription(no, f"expected zone numbers {' '.join(expected)}", s)
        if west:
            record(no, west, Opening(r * cols, Heading.W))
        if east:
            record(no, east, Opening(r * cols + cols - 1, Heading.E))

    no, s = cur.next("topology boundary line")
    tokens = s.split()
    if len(tokens) != cols or any(t not in ("--", "x", "^") for t in tokens):
        raise MalformedDescription(no, f"expected {cols} boundary markers (--, x or ^)", s)
    for col, tok in enumerate(tokens):
        if tok in ("x", "^"):
            record(no, tok, Opening((rows - 1) * cols + col, Heading.S))

    for symbol in ("^", "x"):
        if symbol not in markers:
            raise MalformedDescription(no, f'topology block has no "{symbol}" marker')
    return markers


def parse(text: str) -> Maze:
    """Inverse of serialize; raises MalformedDescription on the first
    offending line for anything that deviates beyond whitespace."""
    cur = _Cursor(text)
    no, s = cur.peek()
    if s != HEADER:
        raise MalformedDescription(no, "expected description header", s)
    cur.pos += 1

    _, floor = cur.expect_match(_FLOOR_RE, "floor composition line")
    size_no, size = cur.expect_match(_SIZE_RE, "size line")
    rows, cols = int(size.group(1)), int(size.group(2))
    if int(floor.group(1)) != rows * cols:
        raise MalformedDescription(size_no, f"zone count {floor.group(1)} does not match {rows}x{cols}")
    cur.expect_prefix("- The zones are always numbered from", "zone numbering line")
    topo_no, _ = cur.expect_prefix(TOPOLOGY_HEADER, "topology header")

    markers = _parse_topology(cur, rows, cols)

    cur.expect_prefix('- You enter the maze from the direction of the "^" symbol',
                      "entrance sentence")
    cur.expect_prefix("and exit at position", "exit sentence")
    ent_no, ent = cur.expect_match(_ENTRANCE_RE, "ENTRANCE statement")
    exit_no, ext = cur.expect_match(_EXIT_RE, "EXIT statement")
    entrance_cell, exit_cell = int(ent.group(1)), int(ext.group(1))

    cur.expect_prefix("- Walls cannot be traversed", "wall explanation")
    cur.expect_prefix("you would not be able to move", "wall explanation")

    walls: list[tuple[int, int]] = []
    no, s = cur.next("wall list or no-walls line")
    if s == NO_WALLS_LINE:
        pass
    elif s == WALLS_HEADER:
        while True:
            no, s = cur.peek()
            if not s:
                break
            m = _WALL_ITEM_RE.match(s)
            if not m:
                raise MalformedDescription(no, "expected wall pair '* a and b'", s)
            a, b = int(m.group(1)), int(m.group(2))
            if not (0 <= a < rows * cols and 0 <= b < rows * cols):
                raise MalformedDescription(no, f"wall pair {a} and {b} out of bounds", s)
            ra, ca = divmod(a, cols)
            rb, cb = divmod(b, cols)
            if abs(ra - rb) + abs(ca - cb) != 1:
                raise MalformedDescription(no, f"zones {a} and {b} are not adjacent", s)
            walls.append((a, b))
            cur.pos += 1
    else:
        raise MalformedDescription(no, "expected wall list header or no-walls line", s)

    no, s = cur.peek()
    if s:
        raise MalformedDescription(no, "unexpected content after wall list", s)

    if markers["^"].cell != entrance_cell:
        raise MalformedDescription(
            ent_no, f'ENTRANCE at {entrance_cell} does not match the "^" marker '
                    f"at zone {markers['^'].cell}")
    if markers["x"].cell != exit_cell:
        raise MalformedDescription(
            exit_no, f'EXIT at {exit_cell} does not match the "x" marker '
                     f"at zone {markers['x'].cell}")

    try:
        maze = Maze(rows, cols, frozenset(walls), markers["^"], markers["x"])
    except MazeError as err:
        raise MalformedDescription(topo_no, str(err))

    # Prose lines only prefix-checked above are pinned down here: the text
    # must equal its own re-serialization under the whitespace canon.
    expected = canonical_lines(serialize(maze).text)
    actual = [s for _, s in cur.lines]
    for (line_no, got), want in zip(cur.lines, expected):
        if got != want:
            raise MalformedDescription(line_no, f"text deviates from template, expected {want!r}", got)
    if len(actual) != len(expected):
        raise MalformedDescription(cur.lines[-1][0], "description length deviates from template")
    return maze


def load_description(path) -> Maze:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def render_ascii(maze: Maze, path: list[int] | None = None) -> str:
    """Human-oriented grid drawing with walls, openings, and an optional
    path overlay (path cells are starred)."""
    overlay = set(path or ())
    for cell in overlay:
        cell_rc(maze, cell)  # bounds check
    width = max(4, len(str(maze.size - 1)) + 3)

    def cell_label(cell: int) -> str:
        label = str(cell) + ("*" if cell in overlay else "")
        return f"{label:^{width}}"

    def boundary_gap(cell: int, side: Heading) -> str:
        mark = _marker(maze, cell, side)
        return f"{mark:^{width}}" if mark else "-" * width

    lines = []
    for r in range(maze.rows + 1):
        parts = []
        for c in range(maze.cols):
            if r == 0:
                parts.append(boundary_gap(c, Heading.N))
            elif r == maze.rows:
                parts.append(boundary_gap((r - 1) * maze.cols + c, Heading.S))
            else:
                upper, lower = (r - 1) * maze.cols + c, r * maze.cols + c
                parts.append("-" * width if (upper, lower) in maze.walls else " " * width)
        lines.append("+" + "+".join(parts) + "+")
        if r == maze.rows:
            break
        row_cells = [r * maze.cols + c for c in range(maze.cols)]
        west = _marker(maze, row_cells[0], Heading.W) or "|"
        east = _marker(maze, row_cells[-1], Heading.E) or "|"
        body = ""
        for c, cell in enumerate(row_cells):
            body += cell_label(cell)
            if c + 1 < maze.cols:
                body += "|" if (cell, cell + 1) in maze.walls else " "
        lines.append(west + body + east)
    return "\n".join(lines) + "\n"
