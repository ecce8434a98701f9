"""Command-line entry point for the whole pipeline.

Subcommands: gen, render, solve, serialize, verify, eval, report, mock-eval.
All are non-interactive and deterministic for identical inputs; paths are
resolved relative to --workdir.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import CorpusError, build_corpus, load_corpus
from .gateway import DEFAULT_SCENARIOS, GatewayError, ProviderConfig
from .generate import GenConfig, GenerationError, generate
from .grid import MazeError
from .instructions import parse_response, render_sequence
from .runner import (
    ExperimentSpec,
    SpecError,
    load_records,
    load_spec,
    report_text,
    run,
    summary_csv,
    write_reports,
)
from .scoring import MODES, MODE_ORACLE, score_run
from .simulator import execute
from .solver import UnsolvableMazeError, reference_solution, solution_text
from .textform import MalformedDescription, load_description, render_ascii, serialize

_ERRORS = (
    MazeError,
    MalformedDescription,
    CorpusError,
    GenerationError,
    UnsolvableMazeError,
    SpecError,
    GatewayError,
    FileNotFoundError,
    ValueError,
)


def _gen_config(args) -> GenConfig:
    return GenConfig(
        rows=args.rows,
        cols=args.cols,
        wall_count=args.wall_count,
        min_path=args.min_path,
        max_path=args.max_path,
        require_unique_optimal=not args.allow_tied_optima,
        opposite_sides=not args.any_sides,
        seed=args.seed,
    )


def _add_gen_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rows", type=int, default=2)
    p.add_argument("--cols", type=int, default=5)
    p.add_argument("--wall-count", type=int, default=4)
    p.add_argument("--min-path", type=int, default=3)
    p.add_argument("--max-path", type=int, default=6)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--allow-tied-optima", action="store_true",
                   help="do not require a unique minimal solution")
    p.add_argument("--any-sides", action="store_true",
                   help="allow entrance/exit on any boundary side")


def cmd_gen(args) -> int:
    cfg = _gen_config(args)
    corpus = build_corpus(args.workdir / args.out, cfg, args.n_test, args.n_shot)
    print(f"wrote {len(corpus.tests)} test + {len(corpus.shots)} shot mazes "
          f"to {args.workdir / args.out}")
    return 0


def cmd_render(args) -> int:
    maze = load_description(args.workdir / args.maze)
    path = list(reference_solution(maze).cells) if args.solution else None
    print(render_ascii(maze, path), end="")
    return 0


def cmd_solve(args) -> int:
    maze = load_description(args.workdir / args.maze)
    print(solution_text(maze))
    return 0


def cmd_serialize(args) -> int:
    if args.maze:
        maze = load_description(args.workdir / args.maze)
    else:
        maze = generate(_gen_config(args))
    print(serialize(maze).text, end="")
    return 0


def cmd_verify(args) -> int:
    maze = load_description(args.workdir / args.maze)
    answer = (args.workdir / args.answer).read_text(encoding="utf-8")
    parsed = parse_response(answer)
    score = score_run(maze, parsed, args.mode, lenient_exit=args.lenient_exit)
    print(f"complete={str(score.complete).lower()} partial={score.partial:.3f}")
    if score.first_fault:
        print(f"first fault: step {score.first_fault[0]} ({score.first_fault[1]})")
    usable, _ = parsed.scored_prefix()
    trace = execute(maze, usable, lenient_exit=args.lenient_exit)
    for i, pose in enumerate(trace.poses):
        print(f"  step {i}: cell {pose.cell} facing {pose.heading.value}")
    if trace.fault:
        print(f"  fault at step {trace.failed_at}: {trace.fault.kind.value}"
              f" ({trace.fault.detail})")
    for rej in parsed.rejected_lines:
        print(f"  rejected line {rej.line_no}: {rej.reason}: {rej.text}")
    return 0


def cmd_eval(args) -> int:
    spec = load_spec(args.workdir / args.spec)
    if args.concurrency:
        spec.concurrency = args.concurrency
    if args.mode:
        spec.scoring_mode = args.mode
    if args.out:
        spec.output_dir = args.workdir / args.out
    run(spec)
    records = load_records(spec.output_dir / "records.jsonl")
    write_reports(spec.output_dir, records)
    print(report_text(records), end="")
    print(f"records: {spec.output_dir / 'records.jsonl'}")
    return 0


def cmd_report(args) -> int:
    records = load_records(args.workdir / args.log)
    print(report_text(records, args.mode), end="")
    if args.csv:
        (args.workdir / args.csv).write_text(summary_csv(records, args.mode), encoding="utf-8")
    return 0


def _mock_script(corpus, flaw_every: int | None) -> dict:
    """Scripted responses: the reference solution text for every test maze,
    except every ``flaw_every``-th maze which answers with a truncated
    opening (deterministic partial credit)."""
    script = {}
    for i, (maze_id, maze) in enumerate(corpus.tests):
        text = solution_text(maze)
        if flaw_every and i % flaw_every == 1:
            text = "\n".join(text.splitlines()[:2])
        for scenario in DEFAULT_SCENARIOS:
            script[f"{maze_id}|{scenario.name}"] = text
    return script


def cmd_mock_eval(args) -> int:
    out = args.workdir / args.out
    corpus_dir = args.workdir / args.corpus if args.corpus else out / "corpus"
    if not (corpus_dir / "manifest.json").exists():
        cfg = GenConfig(seed=args.seed)
        build_corpus(corpus_dir, cfg, args.n_test, args.n_shot)
    corpus = load_corpus(corpus_dir)

    out.mkdir(parents=True, exist_ok=True)
    providers = []
    for name, flaw_every in (("mock-oracle", None), ("mock-partial", 2)):
        script_path = out / f"script-{name}.json"
        script_path.write_text(
            json.dumps(_mock_script(corpus, flaw_every), indent=0, sort_keys=True),
            encoding="utf-8",
        )
        providers.append(
            ProviderConfig(name=name, model=f"{name}-v1", endpoint=f"mock:{script_path}")
        )
    spec = ExperimentSpec(
        corpus_dir=corpus_dir,
        output_dir=out,
        providers=providers,
        scoring_mode=args.mode,
        concurrency=args.concurrency,
        experiment_id="mock-eval",
    )
    run(spec, clock=lambda: 0.0)
    records = load_records(out / "records.jsonl")
    write_reports(out, records)
    print(report_text(records), end="")
    print(f"records: {out / 'records.jsonl'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mazenav", description=__doc__)
    parser.add_argument("--workdir", type=Path, default=Path("."),
                        help="base directory for all relative paths")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate and write a maze corpus")
    _add_gen_options(p)
    p.add_argument("--out", type=Path, default=Path("corpus"))
    p.add_argument("--n-test", type=int, default=34)
    p.add_argument("--n-shot", type=int, default=6)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="print an ASCII drawing of a maze file")
    p.add_argument("--maze", type=Path, required=True)
    p.add_argument("--solution", action="store_true", help="overlay the reference path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("solve", help="print the reference solution for a maze file")
    p.add_argument("--maze", type=Path, required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("serialize", help="print the canonical text description")
    _add_gen_options(p)
    p.add_argument("--maze", type=Path, help="re-serialize an existing maze file")
    p.set_defaults(func=cmd_serialize)

    p = sub.add_parser("verify", help="score a response file against a maze")
    p.add_argument("--maze", type=Path, required=True)
    p.add_argument("--answer", type=Path, required=True)
    p.add_argument("--mode", choices=MODES, default=MODE_ORACLE)
    p.add_argument("--lenient-exit", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="run an experiment from a spec file")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--concurrency", type=int)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="render tables from a record log")
    p.add_argument("--log", type=Path, required=True)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--csv", type=Path, help="also write a CSV summary")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("mock-eval", help="end-to-end run against scripted providers")
    p.add_argument("--out", type=Path, default=Path("mock-run"))
    p.add_argument("--corpus", type=Path, help="reuse an existing corpus directory")
    p.add_argument("--n-test", type=int, default=34)
    p.add_argument("--n-shot", type=int, default=6)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--mode", choices=MODES, default=MODE_ORACLE)
    p.add_argument("--concurrency", type=int, default=4)
    p.set_defaults(func=cmd_mock_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
