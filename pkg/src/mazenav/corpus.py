"""Corpus persistence: one .maze description file per maze plus a manifest
recording ids, roles (test/shot), generation config, and content hashes."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .generate import GenConfig, generate_corpus
from .grid import Maze
from .textform import parse, serialize

MANIFEST_NAME = "manifest.json"
FORMAT = "maze-corpus/1"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Corpus:
    tests: tuple  # ((maze_id, Maze), ...)
    shots: tuple
    config: dict


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def save_corpus(directory, tests: list[Maze], shots: list[Maze], cfg: GenConfig) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for role, mazes in (("test", tests), ("shot", shots)):
        for i, maze in enumerate(mazes):
            maze_id = f"{role}-{i:03d}"
            text = serialize(maze, maze_id).text
            filename = f"{maze_id}.maze"
            (directory / filename).write_text(text, encoding="utf-8")
            entries.append(
                {"id": maze_id, "role": role, "file": filename, "sha256": _sha256(text)}
            )
    manifest = {
        "format": FORMAT,
        "config": dataclasses.asdict(cfg),
        "mazes": entries,
    }
    path = directory / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def build_corpus(directory, cfg: GenConfig, n_test: int, n_shot: int) -> Corpus:
    tests, shots = generate_corpus(cfg, n_test, n_shot)
    save_corpus(directory, tests, shots, cfg)
    return load_corpus(directory)


def load_corpus(directory) -> Corpus:
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise CorpusError(f"no {MANIFEST_NAME} in {directory}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("format") != FORMAT:
        raise CorpusError(f"unsupported corpus format: {manifest.get('format')!r}")
    tests, shots = [], []
    for entry in manifest["mazes"]:
        text = (directory / entry["file"]).read_text(encoding="utf-8")
        if _sha256(text) != entry["sha256"]:
            raise CorpusError(f"checksum mismatch for {entry['file']}")
        maze = parse(text)
        target = tests if entry["role"] == "test" else shots
        target.append((entry["id"], maze))
    return Corpus(tuple(tests), tuple(shots), manifest["config"])
