"""Prompt assembly and stateless chat-completion transport.

One wire dialect is spoken: the OpenAI-compatible chat-completions shape,
with per-provider endpoint overrides. Every call builds its payload from
scratch (no conversation state is ever reused) and the full message list is
hashable, which is what makes trials resumable.

Endpoints starting with ``mock:`` are served from a JSON script file mapping
"<maze_id>|<scenario>" keys to response text; "*" is the fallback key. Mock
completions are fully deterministic and need no credentials.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .grid import Maze
from .instructions import render_sequence
from .solver import Solution
from .textform import serialize

SYSTEM_PROMPT = """\
You are an expert maze navigator. Your task is to provide clear, step-by-step instructions to solve mazes from a first-person perspective.

When presented with a bird's-eye view text description of a maze do the following first:
  Locate --- Identify the entrance ("^" symbol) and exit ("x" symbol).
  Analyze --- Mentally visualize the maze from the entrance, evaluating all paths to the exit, avoiding any walls.
  Optimize --- Determine the shortest, most efficient route, favoring straight paths.
  Instruct --- Describe the optimal route as if you are walking it, using precise language.

Instruction Guidelines:
  Perspective --- Maintain a strict first-person perspective throughout.
  Directions --- Use only "forward", "left", and "right".
  Verbs --- Begin each instruction with an action verb (e.g., "Walk", "Turn").
  Positions --- Reference numbered positions for orientation.

Use the following format to describe the best path through the maze:
  First instruction --- "Start facing into the maze at the "^" symbol and step into position [number]."
  Subsequent instructions --- "Turn to my [left/right]" or "Walk forward to position [number]."
  Final instruction --- "Exit the maze from position [number]."

Key Points:
Describe the path as if you were in the maze, not observing it from above.
Assume you can only see your immediate surroundings.
Focus solely on navigation, omitting unnecessary details.
Make sure to output one line per navigation step."""

TEST_QUESTION = (
    "Please provide step-by-step instructions to navigate the maze described below. "
    "Do it from a first-person perspective."
)


class GatewayError(RuntimeError):
    pass


class AuthError(GatewayError):
    """Credential missing or rejected; never retried."""


class RateLimitExhausted(GatewayError):
    pass


class TransportFailure(GatewayError):
    """Network-level failure (connection, timeout); retried as transient."""


class MalformedResponse(GatewayError):
    """HTTP 200 without extractable message content."""


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"bad role: {self.role!r}")
        if not self.content:
            raise ValueError("empty message content")


@dataclass(frozen=True)
class Scenario:
    name: str
    k: int  # number of solved example mazes shown before the test maze

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("k must be non-negative")


ZERO_SHOT = Scenario("zero-shot", 0)
ONE_SHOT = Scenario("one-shot", 1)
FEW_SHOT = Scenario("few-shot", 5)
DEFAULT_SCENARIOS = (ZERO_SHOT, ONE_SHOT, FEW_SHOT)


@dataclass(frozen=True)
class ProviderConfig:
    name: str
    model: str
    endpoint: str
    credential_env: str | None = None
    temperature: float = 0.0
    max_output_tokens: int = 2048
    timeout_s: float = 60.0
    max_retries: int = 3
    rate_per_s: float | None = None
    reasoning: bool = False  # report grouping only; prompts are identical

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")


@dataclass(frozen=True)
class Completion:
    text: str
    tokens_in: int
    tokens_out: int
    latency_ms: float
    attempts: int


def build_messages(
    test_maze: Maze, shots: list[tuple[Maze, Solution]], scenario: Scenario
) -> list[ChatMessage]:
    """System prompt, then one solved example per shot, then the test question."""
    if len(shots) != scenario.k:
        raise ValueError(f"{scenario.name} needs {scenario.k} shots, got {len(shots)}")
    messages = [ChatMessage("system", SYSTEM_PROMPT)]
    for shot_maze, solution in shots:
        if shot_maze == test_maze:
            raise ValueError("shot maze equals the test maze")
        messages.append(
            ChatMessage("user", f"{TEST_QUESTION}\n\n{serialize(shot_maze).text}")
        )
        messages.append(ChatMessage("assistant", render_sequence(solution.instructions)))
    messages.append(ChatMessage("user", f"{TEST_QUESTION}\n\n{serialize(test_maze).text}"))
    return messages


def prompt_hash(messages: list[ChatMessage]) -> str:
    digest = hashlib.sha256()
    for m in messages:
        digest.update(m.role.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(m.content.encode("utf-8"))
        digest.update(b"\x01")
    return digest.hexdigest()


def request_payload(cfg: ProviderConfig, messages: list[ChatMessage]) -> dict:
    """The full request body; rebuilt per call, so two identical calls send
    byte-identical payloads."""
    return {
        "model": cfg.model,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_output_tokens,
    }


class _TokenBucket:
    """Minimal per-provider rate cap: one request per 1/rate seconds."""

    def __init__(self, rate_per_s: float):
        self.interval = 1.0 / rate_per_s
        self.next_free = 0.0
        self.lock = threading.Lock()

    def reserve(self, now: float) -> float:
        with self.lock:
            start = max(now, self.next_free)
            self.next_free = start + self.interval
            return start - now


_BUCKETS: dict[str, _TokenBucket] = {}
_BUCKETS_LOCK = threading.Lock()


def _bucket(cfg: ProviderConfig) -> _TokenBucket:
    with _BUCKETS_LOCK:
        bucket = _BUCKETS.get(cfg.name)
        if bucket is None or abs(bucket.interval - 1.0 / cfg.rate_per_s) > 1e-9:
            bucket = _TokenBucket(cfg.rate_per_s)
            _BUCKETS[cfg.name] = bucket
        return bucket


def _http_transport(url: str, headers: dict, payload: dict, timeout: float):
    import requests

    try:
        resp = requests.post(url, json=payload, headers=headers, timeout=timeout)
    except requests.RequestException as err:
        raise TransportFailure(str(err))
    try:
        body = resp.json()
    except ValueError:
        body = {}
    return resp.status_code, body


def _mock_complete(cfg: ProviderConfig, messages, trial_key: str | None) -> Completion:
    script_path = Path(cfg.endpoint[len("mock:"):])
    if trial_key is None:
        raise GatewayError("mock provider requires a trial key")
    try:
        script = json.loads(script_path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as err:
        raise GatewayError(f"cannot load mock script {script_path}: {err}")
    text = script.get(trial_key, script.get("*"))
    if text is None:
        raise GatewayError(f"no scripted response for key {trial_key!r}")
    tokens_in = sum(len(m.content.split()) for m in messages)
    return Completion(text, tokens_in, len(text.split()), 0.0, 1)


def complete(
    cfg: ProviderConfig,
    messages: list[ChatMessage],
    *,
    trial_key: str | None = None,
    transport=None,
    sleeper=time.sleep,
    rng: random.Random | None = None,
) -> Completion:
    """One stateless chat-completion request with retry on transient failures.

    Rate-limit (429) and 5xx/network errors back off exponentially with
    jitter up to cfg.max_retries retries; auth failures never retry.
    """
    if cfg.endpoint.startswith("mock:"):
        return _mock_complete(cfg, messages, trial_key)

    headers = {"Content-Type": "application/json"}
    if cfg.credential_env:
        key = os.environ.get(cfg.credential_env)
        if not key:
            raise AuthError(f"credential variable {cfg.credential_env} is not set")
        headers["Authorization"] = f"Bearer {key}"
    if cfg.rate_per_s:
        wait = _bucket(cfg).reserve(time.monotonic())
        if wait > 0:
            sleeper(wait)

    transport = transport or _http_transport
    rng = rng or random.Random()
    payload = request_payload(cfg, messages)
    started = time.perf_counter()
    attempts = 0
    delay = 0.5
    while True:
        attempts += 1
        retryable = None
        try:
            status, body = transport(cfg.endpoint, headers, payload, cfg.timeout_s)
        except TransportFailure as err:
            retryable = str(err)
        else:
            if status in (401, 403):
                raise AuthError(f"provider rejected credentials (http {status})")
            if status == 429:
                retryable = "rate limited (http 429)"
            elif 500 <= status < 600:
                retryable = f"server error (http {status})"
            elif status != 200:
                raise GatewayError(f"unexpected http status {status}")
            else:
                return _extract(body, started, attempts)
        if attempts > cfg.max_retries:
            if "rate limited" in (retryable or ""):
                raise RateLimitExhausted(f"gave up after {attempts} attempts: {retryable}")
            raise TransportFailure(f"gave up after {attempts} attempts: {retryable}")
        sleeper(delay + rng.uniform(0.0, delay / 2))
        delay *= 2


def _extract(body: dict, started: float, attempts: int) -> Completion:
    try:
        text = body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise MalformedResponse("response has no message content")
    if text is None:
        raise MalformedResponse("response content is null")
    usage = body.get("usage") or {}
    return Completion(
        text=text,
        tokens_in=int(usage.get("prompt_tokens", 0)),
        tokens_out=int(usage.get("completion_tokens", 0)),
        latency_ms=(time.perf_counter() - started) * 1000.0,
        attempts=attempts,
    )
