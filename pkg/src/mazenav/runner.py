"""Experiment orchestration: providers x scenarios x test mazes.

Every trial appends one JSON record line to records.jsonl in the output
directory. Trials whose key (provider, model, scenario, maze, repeat) is
already present are skipped, so interrupted runs resume and finished runs
are idempotent. Workers only do pure scoring plus the gateway call; records
are written by the submitting thread in planning order, which keeps the log
byte-stable regardless of scheduling.
"""

from __future__ import annotations

import dataclasses
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import gateway
from .corpus import load_corpus
from .gateway import (
    DEFAULT_SCENARIOS,
    GatewayError,
    ProviderConfig,
    Scenario,
    build_messages,
    prompt_hash,
)
from .grid import Maze
from .instructions import ParsedResponse, instruction_to_dict, parse_response
from .scoring import MODES, MODE_EXECUTION, MODE_ORACLE, MetricsSummary, RunScore, score_run, summarize
from .simulator import FaultKind, execute
from .solver import Solution, reference_solution

RECORDS_NAME = "records.jsonl"
SCENARIO_ORDER = ("few-shot", "one-shot", "zero-shot")  # report column order


class SpecError(ValueError):
    pass


@dataclass
class ExperimentSpec:
    corpus_dir: Path
    output_dir: Path
    providers: list[ProviderConfig]
    scenarios: list[Scenario] = field(default_factory=lambda: list(DEFAULT_SCENARIOS))
    scoring_mode: str = MODE_ORACLE
    concurrency: int = 1
    experiment_id: str = "exp"
    repeats: int = 1
    lenient_exit: bool = False

    def __post_init__(self) -> None:
        if not self.providers:
            raise SpecError("at least one provider is required")
        if self.scoring_mode not in MODES:
            raise SpecError(f"scoring_mode must be one of {MODES}")
        if self.concurrency < 1:
            raise SpecError("concurrency must be >= 1")
        if self.repeats < 1:
            raise SpecError("repeats must be >= 1")


def load_spec(path) -> ExperimentSpec:
    """Read the declarative experiment config (JSON)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as err:
        raise SpecError(f"cannot read spec {path}: {err}")
    try:
        providers = [ProviderConfig(**p) for p in data["providers"]]
        scenarios = [Scenario(**s) for s in data.get("scenarios", [])] or list(DEFAULT_SCENARIOS)
        base = path.parent
        return ExperimentSpec(
            corpus_dir=(base / data["corpus"]).resolve(),
            output_dir=(base / data["output"]).resolve(),
            providers=providers,
            scenarios=scenarios,
            scoring_mode=data.get("scoring_mode", MODE_ORACLE),
            concurrency=int(data.get("concurrency", 1)),
            experiment_id=data.get("experiment_id", path.stem),
            repeats=int(data.get("repeats", 1)),
            lenient_exit=bool(data.get("lenient_exit", False)),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise SpecError(f"invalid spec {path}: {err}")


@dataclass(frozen=True)
class RunRecord:
    experiment: str
    provider: str
    model: str
    scenario: str
    maze_id: str
    repeat: int
    prompt_hash: str
    response: str
    instructions: list
    rejected: list
    trace: dict
    scores: dict  # mode -> RunScore dict
    scoring_mode: str
    tokens_in: int
    tokens_out: int
    latency_ms: float
    attempts: int
    ts: float

    def key(self) -> tuple:
        return (self.provider, self.model, self.scenario, self.maze_id, self.repeat)

    def score(self, mode: str) -> RunScore:
        return RunScore.from_dict(self.scores[mode])

    def to_json_line(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "RunRecord":
        return cls(**json.loads(line))


def shots_for(scenario: Scenario, shot_entries: list) -> list:
    """Shot mazes for a scenario; the first shot maze is reserved for
    one-shot, few-shot draws from the rest (disjoint example sets)."""
    if scenario.k == 0:
        return []
    pool = shot_entries[1:] if scenario.name == "few-shot" else shot_entries
    if len(pool) < scenario.k:
        need = scenario.k + (1 if scenario.name == "few-shot" else 0)
        raise SpecError(
            f"{scenario.name} needs {need} shot mazes in the corpus, "
            f"got {len(shot_entries)}"
        )
    return pool[: scenario.k]


def _load_records(path: Path) -> list[RunRecord]:
    if not path.exists():
        return []
    records = []
    raw = path.read_text(encoding="utf-8")
    lines = raw.split("\n")
    for i, line in enumerate(lines):
        if not line:
            continue
        try:
            records.append(RunRecord.from_json_line(line))
        except (ValueError, TypeError) as err:
            if i == len(lines) - 1:
                # Torn tail from a crash mid-write: drop it, the trial reruns.
                repaired = "\n".join(lines[:i])
                path.write_text(repaired + ("\n" if repaired else ""), encoding="utf-8")
                break
            raise SpecError(f"corrupt record log {path} at line {i + 1}: {err}")
    return records


def load_records(path) -> list[RunRecord]:
    records = _load_records(Path(path))
    if not records:
        raise SpecError(f"no records in {path}")
    return records


def _run_trial(
    spec: ExperimentSpec,
    provider: ProviderConfig,
    scenario: Scenario,
    maze_id: str,
    maze: Maze,
    shots: list[tuple[Maze, Solution]],
    reference: Solution,
    repeat: int,
    clock,
) -> RunRecord:
    messages = build_messages(maze, shots, scenario)
    digest = prompt_hash(messages)
    trial_key = f"{maze_id}|{scenario.name}"
    try:
        completion = gateway.complete(provider, messages, trial_key=trial_key)
        parsed = parse_response(completion.text)
        usable, _ = parsed.scored_prefix()
        trace = execute(maze, usable, lenient_exit=spec.lenient_exit)
        scores = {
            mode: score_run(
                maze, parsed, mode, reference=reference, lenient_exit=spec.lenient_exit
            ).to_dict()
            for mode in MODES
        }
        return RunRecord(
            experiment=spec.experiment_id,
            provider=provider.name,
            model=provider.model,
            scenario=scenario.name,
            maze_id=maze_id,
            repeat=repeat,
            prompt_hash=digest,
            response=completion.text,
            instructions=[instruction_to_dict(i) for i in parsed.instructions],
            rejected=[[r.line_no, r.text, r.reason] for r in parsed.rejected_lines],
            trace=trace.to_dict(),
            scores=scores,
            scoring_mode=spec.scoring_mode,
            tokens_in=completion.tokens_in,
            tokens_out=completion.tokens_out,
            latency_ms=completion.latency_ms,
            attempts=completion.attempts,
            ts=clock(),
        )
    except GatewayError as err:
        failure = RunScore(
            False, 0.0, (0, FaultKind.PROVIDER_ERROR.value), spec.scoring_mode
        )
        return RunRecord(
            experiment=spec.experiment_id,
            provider=provider.name,
            model=provider.model,
            scenario=scenario.name,
            maze_id=maze_id,
            repeat=repeat,
            prompt_hash=digest,
            response="",
            instructions=[],
            rejected=[],
            trace={
                "poses": [],
                "failed_at": 0,
                "fault": {"kind": FaultKind.PROVIDER_ERROR.value, "detail": str(err)},
            },
            scores={
                mode: dataclasses.replace(failure, mode=mode).to_dict() for mode in MODES
            },
            scoring_mode=spec.scoring_mode,
            tokens_in=0,
            tokens_out=0,
            latency_ms=0.0,
            attempts=0,
            ts=clock(),
        )


def run(spec: ExperimentSpec, *, clock=time.time) -> list[MetricsSummary]:
    """Execute all missing trials, append their records, return summaries
    computed from the full record log."""
    corpus = load_corpus(spec.corpus_dir)
    if not corpus.tests:
        raise SpecError("corpus has no test mazes")
    references = {maze_id: reference_solution(maze) for maze_id, maze in corpus.tests}
    shot_solutions = [(maze, reference_solution(maze)) for _, maze in corpus.shots]
    scenario_shots = {sc.name: shots_for(sc, shot_solutions) for sc in spec.scenarios}

    spec.output_dir.mkdir(parents=True, exist_ok=True)
    log_path = spec.output_dir / RECORDS_NAME
    existing = {record.key() for record in _load_records(log_path)}

    planned = [
        (provider, scenario, maze_id, maze, repeat)
        for provider in spec.providers
        for scenario in spec.scenarios
        for maze_id, maze in corpus.tests
        for repeat in range(spec.repeats)
        if (provider.name, provider.model, scenario.name, maze_id, repeat) not in existing
    ]

    with open(log_path, "a", encoding="utf-8") as log, ThreadPoolExecutor(
        max_workers=spec.concurrency
    ) as pool:
        futures = [
            pool.submit(
                _run_trial,
                spec,
                provider,
                scenario,
                maze_id,
                maze,
                scenario_shots[scenario.name],
                references[maze_id],
                repeat,
                clock,
            )
            for provider, scenario, maze_id, maze, repeat in planned
        ]
        for future in futures:
            log.write(future.result().to_json_line() + "\n")
            log.flush()

    records = load_records(log_path)
    return summaries_from(records, spec.scoring_mode)


def summaries_from(records: list[RunRecord], mode: str | None = None) -> list[MetricsSummary]:
    """Per provider x scenario summaries; ``mode`` overrides the recorded
    scoring mode (records hold scores for both)."""
    if mode is None:
        modes = {r.scoring_mode for r in records}
        if len(modes) > 1:
            raise SpecError(
                f"records mix scoring modes {sorted(modes)}; pass an explicit mode"
            )
        mode = modes.pop()
    groups: dict[tuple[str, str], list[RunScore]] = {}
    order: list[tuple[str, str]] = []
    for record in records:
        key = (record.provider, record.scenario)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(record.score(mode))
    return [summarize(model, scenario, groups[(model, scenario)]) for model, scenario in order]


def _table(summaries: list[MetricsSummary], metric: str, title: str) -> list[str]:
    scenarios = [s for s in SCENARIO_ORDER if any(x.scenario == s for x in summaries)]
    scenarios += sorted({x.scenario for x in summaries} - set(scenarios))
    by_model: dict[str, dict[str, float]] = {}
    for s in summaries:
        by_model.setdefault(s.model, {})[s.scenario] = getattr(s, metric)
    sort_col = scenarios[0] if scenarios else ""
    rows = sorted(by_model.items(), key=lambda kv: kv[1].get(sort_col, -1.0))
    name_w = max([len("Model")] + [len(m) for m in by_model])
    head = "Model".ljust(name_w) + "".join(f"  {sc:>10}" for sc in scenarios)
    out = [title, "-" * len(head), head]
    for model, cells in rows:
        line = model.ljust(name_w)
        for sc in scenarios:
            value = cells.get(sc)
            line += f"  {value:>10.1f}" if value is not None else f"  {'-':>10}"
        out.append(line)
    return out


def report_text(records: list[RunRecord], mode: str | None = None) -> str:
    """Aligned-text report: both accuracy tables, fault histograms, and a
    per-maze difficulty table."""
    if not records:
        raise SpecError("empty record log")
    summaries = summaries_from(records, mode)
    used_mode = mode or records[0].scoring_mode

    lines: list[str] = []
    lines.append(f"Scoring mode: {used_mode}")
    lines.append(f"Records: {len(records)}")
    lines.append("")
    for metric, title in (
        ("complete_pct", "Complete Path Accuracy [%] (sorted by few-shot performance)"),
        ("partial_pct", "Partial Path Accuracy [%] (sorted by few-shot performance)"),
    ):
        lines.extend(_table(summaries, metric, title))
        lines.append("")

    lines.append("Fault histogram per model (execution scoring, first fault per run)")
    by_model: dict[str, dict[str, int]] = {}
    for record in records:
        hist = by_model.setdefault(record.provider, {})
        score = record.score(MODE_EXECUTION)
        label = score.first_fault[1] if score.first_fault else (
            "none" if score.complete else "StoppedEarly"
        )
        hist[label] = hist.get(label, 0) + 1
    for model in sorted(by_model):
        parts = ", ".join(f"{k}={v}" for k, v in sorted(by_model[model].items()))
        lines.append(f"  {model}: {parts}")
    lines.append("")

    lines.append(f"Per-maze difficulty (fraction of runs complete, {used_mode} scoring)")
    solved: dict[str, list[bool]] = {}
    for record in records:
        solved.setdefault(record.maze_id, []).append(record.score(used_mode).complete)
    for maze_id in sorted(solved):
        outcomes = solved[maze_id]
        lines.append(f"  {maze_id}: {sum(outcomes) / len(outcomes):.3f} (n={len(outcomes)})")
    lines.append("")

    lines.append("Notes:")
    lines.append("  * Partial accuracy is normalized by the reference solution length.")
    lines.append("  * An unparseable line inside the instruction block ends the scored prefix.")
    lines.append("  * oracle-match requires the exact reference sequence; execution accepts")
    lines.append("    any faultless route that exits cleanly (strict exit heading unless")
    lines.append("    the experiment ran with lenient_exit).")
    lines.append("  * Provider failures after retry exhaustion score 0 and stay in n.")
    return "\n".join(lines) + "\n"


def summary_csv(records: list[RunRecord], mode: str | None = None) -> str:
    """Long-form CSV export of the per-group accuracy summaries."""
    summaries = summaries_from(records, mode)
    buf = io.StringIO()
    buf.write("model,scenario,n,complete_pct,partial_pct\n")
    for s in summaries:
        buf.write(f"{s.model},{s.scenario},{s.n},{s.complete_pct:.1f},{s.partial_pct:.1f}\n")
    return buf.getvalue()


def write_reports(output_dir, records: list[RunRecord], mode: str | None = None) -> None:
    output_dir = Path(output_dir)
    (output_dir / "report.txt").write_text(report_text(records, mode), encoding="utf-8")
    (output_dir / "summary.csv").write_text(summary_csv(records, mode), encoding="utf-8")
