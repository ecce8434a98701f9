"""Acceptance suite: one test per release criterion, each printing a
PASS line (run with ``pytest tests/test_acceptance.py -v -s``).

Criteria, in short:
  1. Golden worked example reproduced end to end (serialize/solve/execute).
  2. Oracle-simulator closure over 1,000 seeded mazes, cross-checked against
     a brute-force all-simple-paths oracle. Budget <30 s.
  3. Round-trip identities: parse(serialize(maze)) and
     parse_line(canonical_render(instruction)). Zero violations.
  4. Metrics arithmetic: 18/34 scripted run reports 52.9% complete; known
     prefixes reproduce hand-computed partials exactly.
  5. Invariants: Partial >= Complete, complete => partial == 1, turn
     algebra, and every fault kind triggered by a fixture.
  6. Parser leniency corpus (>= 20 variants) collapses to one sequence.
  7. mock-eval end to end: 34 mazes x 3 scenarios x 2 mock models in <10 s,
     idempotent rerun, resume-equals-uninterrupted. Byte-exact.
  8. Live provider scores are explicitly documented as not desk-reproducible;
     acceptance rests on criteria 1-7 only.
"""

import json
import time
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from mazenav.cli import main
from mazenav.corpus import build_corpus
from mazenav.generate import GenConfig, generate_corpus
from mazenav.grid import Heading, Pose, rotate
from mazenav.instructions import (
    ExitAt,
    Forward,
    StepIn,
    Turn,
    canonical_render,
    parse_line,
    parse_response,
    render_sequence,
)
from mazenav.runner import RECORDS_NAME, ExperimentSpec, load_records, run
from mazenav.scoring import MODE_EXECUTION, MODE_ORACLE, RunScore, score_run, summarize
from mazenav.simulator import FaultKind, execute
from mazenav.solver import reference_solution, solution_text
from mazenav.textform import canonical_lines, parse, serialize
from mazenav.gateway import ProviderConfig, Scenario

from .conftest import M0_SOLUTION, make_m0
from .reference_impl import bf_distance

REPO_ROOT = Path(__file__).parent.parent


def _ok(n: int, label: str, detail: str = "") -> None:
    suffix = f" [{detail}]" if detail else ""
    print(f"\nACCEPTANCE {n} ({label}): PASS{suffix}")


def test_criterion_1_golden_worked_example(m0, golden_description, golden_solution):
    started = time.monotonic()
    assert canonical_lines(serialize(m0).text) == canonical_lines(golden_description)
    assert parse(golden_description) == m0
    solution = reference_solution(m0)
    assert solution.instructions == M0_SOLUTION
    assert solution_text(m0) + "\n" == golden_solution
    trace = execute(m0, solution.instructions)
    assert trace.complete
    assert [p.cell for p in trace.poses] == [8, 8, 7, 7, 2, 2, 1, 1]
    elapsed = time.monotonic() - started
    assert elapsed < 1.0
    _ok(1, "golden worked example", f"{elapsed:.3f}s")


def test_criterion_2_oracle_simulator_closure():
    started = time.monotonic()
    mazes, _ = generate_corpus(GenConfig(seed=20_240_001), 1000, 0)
    violations = 0
    for maze in mazes:
        solution = reference_solution(maze)
        if not execute(maze, solution.instructions).complete:
            violations += 1
        if len(solution.cells) - 1 != bf_distance(maze):
            violations += 1
    elapsed = time.monotonic() - started
    assert violations == 0
    assert elapsed < 30.0
    _ok(2, "oracle-simulator closure, 1000 mazes", f"{elapsed:.1f}s")


def test_criterion_3_round_trips():
    mazes, _ = generate_corpus(GenConfig(seed=77_002), 1000, 0)
    for maze in mazes:
        assert parse(serialize(maze).text) == maze
    cells = list(range(0, 50)) + [99, 123, 4096]
    grammar = (
        [StepIn(c) for c in cells]
        + [Forward(c) for c in cells]
        + [ExitAt(c) for c in cells]
        + [Turn("left"), Turn("right")]
    )
    for instr in grammar:
        assert parse_line(canonical_render(instr)) == instr
    _ok(3, "round-trip identities", f"1000 mazes, {len(grammar)} instructions")


def _scripted_run(tmp_path, n_correct: int, n_test: int = 34):
    corpus = build_corpus(tmp_path / "corpus", GenConfig(seed=88_004), n_test, 6)
    script = {}
    for i, (maze_id, maze) in enumerate(corpus.tests):
        answer = solution_text(maze) if i < n_correct else ""
        script[f"{maze_id}|zero-shot"] = answer
    script_path = tmp_path / "script.json"
    script_path.write_text(json.dumps(script), encoding="utf-8")
    spec = ExperimentSpec(
        corpus_dir=tmp_path / "corpus",
        output_dir=tmp_path / "out",
        providers=[ProviderConfig(name="scripted", model="scripted-v1",
                                  endpoint=f"mock:{script_path}")],
        scenarios=[Scenario("zero-shot", 0)],
        experiment_id="metrics-check",
    )
    return run(spec, clock=lambda: 0.0)


def test_criterion_4_metrics_arithmetic(tmp_path, m0):
    (summary,) = _scripted_run(tmp_path, n_correct=18)
    assert summary.n == 34
    assert summary.complete_pct == pytest.approx(52.9, abs=0.05)
    assert summary.partial_pct == pytest.approx(52.9, abs=0.05)
    assert f"{summary.complete_pct:.1f}" == "52.9"

    reference = reference_solution(m0)
    lines = render_sequence(reference.instructions).splitlines()
    for prefix_len in range(len(lines) + 1):
        parsed = parse_response("\n".join(lines[:prefix_len]))
        score = score_run(m0, parsed, MODE_ORACLE, reference=reference)
        assert score.partial == prefix_len / 9
    _ok(4, "metrics arithmetic", "18/34 -> 52.9; prefixes exact")


run_scores = st.lists(
    st.one_of(
        st.just((True, 1.0)),
        st.tuples(st.just(False), st.floats(0.0, 1.0)),
    ),
    min_size=1,
    max_size=60,
)


@settings(max_examples=200)
@given(run_scores)
def test_criterion_5a_partial_dominates_complete(raw):
    scores = [RunScore(c, p, None, MODE_ORACLE) for c, p in raw]
    summary = summarize("m", "few-shot", scores)
    assert summary.complete_pct <= summary.partial_pct
    for score in scores:
        if score.complete:
            assert score.partial == 1.0


@settings(max_examples=100)
@given(st.integers(0, 9), st.sampled_from(list(Heading)))
def test_criterion_5b_turn_algebra(cell, heading):
    pose = Pose(cell, heading)
    assert rotate(rotate(pose.heading, "left"), "right") == pose.heading
    out = pose.heading
    for _ in range(4):
        out = rotate(out, "left")
    assert out == pose.heading


def test_criterion_5c_fault_kind_fixtures(tmp_path, m0):
    solution = list(M0_SOLUTION)
    execution_fixtures = {
        FaultKind.WALL_BLOCKED: [StepIn(8), Turn("left"), Forward(6)],
        FaultKind.OFF_GRID: [StepIn(8), Forward(99)],
        FaultKind.NOT_ON_RAY: [StepIn(8), Forward(9)],
        FaultKind.NOT_STARTED: [Turn("left")],
        FaultKind.ALREADY_EXITED: solution + [Turn("left")],
        FaultKind.WRONG_START_CELL: [StepIn(7)],
        FaultKind.WRONG_EXIT_CELL: [StepIn(8), Forward(3), ExitAt(1)],
        FaultKind.WRONG_EXIT_HEADING: solution[:7] + [ExitAt(1)],
    }
    triggered = set()
    for kind, instrs in execution_fixtures.items():
        trace = execute(m0, instrs)
        assert trace.fault is not None and trace.fault.kind == kind, kind
        triggered.add(kind)

    garbled = render_sequence(solution[:5]) + "\n???\n" + render_sequence(solution[5:])
    score = score_run(m0, parse_response(garbled), MODE_EXECUTION)
    assert score.first_fault[1] == FaultKind.UNPARSEABLE_STEP.value
    triggered.add(FaultKind.UNPARSEABLE_STEP)

    (summary,) = _scripted_run(tmp_path, n_correct=0, n_test=2)
    assert summary.fault_histogram == {}  # empty responses parse, score 0
    corpus_dir = tmp_path / "corpus"
    empty_script = tmp_path / "empty-script.json"
    empty_script.write_text("{}", encoding="utf-8")
    spec = ExperimentSpec(
        corpus_dir=corpus_dir,
        output_dir=tmp_path / "failing",
        providers=[ProviderConfig(name="down", model="down-v1",
                                  endpoint=f"mock:{empty_script}")],
        scenarios=[Scenario("zero-shot", 0)],
    )
    (summary,) = run(spec, clock=lambda: 0.0)
    assert summary.fault_histogram == {FaultKind.PROVIDER_ERROR.value: 2}
    triggered.add(FaultKind.PROVIDER_ERROR)

    assert triggered == set(FaultKind)
    _ok(5, "invariant suite", f"{len(triggered)} fault kinds triggered")


def test_criterion_6_leniency_corpus(leniency_variants):
    assert len(leniency_variants) >= 20
    for name, text in leniency_variants.items():
        parsed = parse_response(text)
        assert parsed.instructions == M0_SOLUTION, f"variant {name!r} diverged"
    _ok(6, "parser leniency corpus", f"{len(leniency_variants)} variants")


def test_criterion_7_end_to_end_determinism(tmp_path):
    args = ["--workdir", str(tmp_path), "mock-eval", "--out", "run", "--seed", "4242"]
    started = time.monotonic()
    assert main(args) == 0
    elapsed = time.monotonic() - started
    assert elapsed < 10.0

    log_path = tmp_path / "run" / RECORDS_NAME
    records = load_records(log_path)
    assert len(records) == 34 * 3 * 2
    full = log_path.read_bytes()

    assert main(args) == 0  # idempotent rerun
    assert log_path.read_bytes() == full

    lines = full.decode("utf-8").splitlines(keepends=True)
    log_path.write_text("".join(lines[:12]), encoding="utf-8")
    assert main(args) == 0  # resumed interrupted run
    assert log_path.read_bytes() == full
    _ok(7, "end-to-end determinism", f"204 records in {elapsed:.2f}s")


def test_criterion_8_external_scores_not_desk_reproducible():
    readme = (REPO_ROOT / "README.md").read_text(encoding="utf-8")
    assert "not reproducible offline" in readme
    # the acceptance suite itself never touches the network: every provider
    # endpoint exercised above is mock: scripted
    _ok(8, "non-reproducibility of live scores", "documented in README")
