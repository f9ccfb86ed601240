#!/usr/bin/env python3
"""
确定性模拟提供方
给定 (seed, request) 输出固定，使所有上层模块可以离线测试
"""

import re
import threading
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..errors import TransportError
from ..seeding import derive_seed
from .capture import CaptureLog
from .types import ChatProvider, ChatRequest, ChatResponse


class MockBehaviour(Enum):
    """模拟行为"""

    MPI_ANSWERER = "mpi"
    SCHEDULE_PLANNER = "planner"
    SCRIPTED = "scripted"


PERSONA_RE = re.compile(
    r"Imagine you are an? (?P<title>.+?) person characterised by being (?P<words>[^\n]+)"
)
STATEMENT_RE = re.compile(r'Given a statement of you: "(?P<statement>[^"]+)"')
TASK_BLOCK_RE = re.compile(r"Available tasks:\n(?P<block>(?:- [^\n]+\n?)+)")

OPTION_LETTERS = "ABCDE"
NEUTRAL_WEIGHTS = np.array([0.15, 0.3, 0.3, 0.17, 0.08])
LEANING_WEIGHTS = np.array([0.55, 0.3, 0.1, 0.04, 0.01])

DURATIONS = np.array([15, 30, 45, 60, 90, 120])
DURATION_WEIGHTS = np.array([0.08, 0.22, 0.2, 0.3, 0.12, 0.08])
DAY_LIMIT_MIN = 22 * 60

FILLER_WORDS = (
    "project update review draft notes meeting follow plan team budget report "
    "schedule client summary idea research progress design deadline feedback"
).split()


def _rng(seed: int, request: ChatRequest, salt: str = "") -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, request.fingerprint(), salt))


def _hhmm(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _persona_stems(prompt: str) -> List[str]:
    match = PERSONA_RE.search(prompt)
    if not match:
        return []
    words = [match.group("title")] + match.group("words").split(",")
    return [w.strip().lower()[:4] for w in words if len(w.strip()) >= 4]


def _answer_mpi(request: ChatRequest, seed: int) -> str:
    """按人格关键词偏置的选项字母"""
    rng = _rng(seed, request)
    weights = NEUTRAL_WEIGHTS
    stems = _persona_stems(request.user_message)
    statement = STATEMENT_RE.search(request.user_message)
    if stems and statement:
        tokens = re.findall(r"[a-z]+", statement.group("statement").lower())
        if any(tok.startswith(stem) for tok in tokens for stem in stems):
            weights = LEANING_WEIGHTS
    letter = OPTION_LETTERS[int(rng.choice(5, p=weights))]
    return f"({letter})."


def _plan_schedule(request: ChatRequest, seed: int, tasks: Sequence[str]) -> str:
    """沿给定任务顺序生成合法日程，时长按种子抽取"""
    rng = _rng(seed, request)
    persona = PERSONA_RE.search(request.user_message)
    # 同一人格文本下每个任务的时长倍率固定
    persona_rng = np.random.default_rng(
        derive_seed(0, persona.group(0) if persona else "neutral")
    )
    multipliers = {
        name: float(np.clip(1 + 0.3 * persona_rng.standard_normal(), 0.5, 1.8))
        for name in tasks
    }

    order = list(tasks)
    for i in range(len(order) - 1):
        if rng.random() < 0.2:
            order[i], order[i + 1] = order[i + 1], order[i]

    t = 8 * 60 + int(rng.integers(0, 5)) * 15
    lines = []
    for name in order:
        if rng.random() < 0.05:
            continue
        base = int(rng.choice(DURATIONS, p=DURATION_WEIGHTS))
        duration = max(5, int(round(base * multipliers[name] / 5.0)) * 5)
        if t + duration > DAY_LIMIT_MIN:
            break
        lines.append(f"{_hhmm(t)} - {_hhmm(t + duration)} | {name}")
        t += duration
        if rng.random() < 0.1:
            t += 15
    return "\n".join(lines)


def _filler_text(request: ChatRequest, seed: int) -> str:
    """非日程请求的占位内容"""
    rng = _rng(seed, request, "filler")
    if "search queries" in request.user_message:
        queries = []
        for _ in range(int(rng.integers(1, 4))):
            words = rng.choice(FILLER_WORDS, size=2, replace=False)
            queries.append("https://www.example.com/search?q=" + "+".join(words))
        return "\n".join(queries)

    sentences = []
    for _ in range(int(rng.integers(1, 4))):
        words = list(rng.choice(FILLER_WORDS, size=int(rng.integers(4, 9))))
        sentences.append(" ".join(words).capitalize() + ".")
    return " ".join(sentences)


def mock_complete(
    request: ChatRequest,
    seed: int,
    behaviour: MockBehaviour,
    transcript: Optional["ScriptedTranscript"] = None,
) -> ChatResponse:
    """模拟补全"""
    if behaviour is MockBehaviour.SCRIPTED:
        if transcript is None:
            raise TransportError("Scripted 模式缺少回放记录")
        text = transcript.next_for(request)
    elif behaviour is MockBehaviour.MPI_ANSWERER:
        text = _answer_mpi(request, seed)
    else:
        block = TASK_BLOCK_RE.search(request.user_message)
        if block:
            tasks = [line[2:].strip() for line in block.group("block").splitlines() if line.strip()]
            text = _plan_schedule(request, seed, tasks)
        else:
            text = _filler_text(request, seed)

    return ChatResponse(
        text=text,
        prompt_tokens=len(request.user_message.split()),
        completion_tokens=len(text.split()),
        latency_s=0.0,
    )


class ScriptedTranscript:
    """回放记录

    带 request_sha 的条目按请求匹配，其余条目按顺序依次返回。
    """

    def __init__(self, entries: Sequence[Dict[str, Any]]):
        self._keyed: Dict[str, List[str]] = {}
        self._queue: List[str] = []
        for entry in entries:
            sha = entry.get("request_sha")
            if sha:
                self._keyed.setdefault(sha, []).append(entry["text"])
            else:
                self._queue.append(entry["text"])
        self._cursor = 0
        self._lock = threading.Lock()

    def next_for(self, request: ChatRequest) -> str:
        with self._lock:
            keyed = self._keyed.get(request.fingerprint())
            if keyed:
                return keyed.pop(0)
            if self._cursor >= len(self._queue):
                raise TransportError("回放记录已耗尽")
            text = self._queue[self._cursor]
            self._cursor += 1
            return text


class MockChatProvider(ChatProvider):
    """模拟提供方"""

    name = "mock"

    def __init__(
        self,
        seed: int = 0,
        behaviour: MockBehaviour = MockBehaviour.SCHEDULE_PLANNER,
        transcript: Optional[Sequence[Dict[str, Any]]] = None,
        max_in_flight: int = 4,
        capture: Optional[CaptureLog] = None,
    ):
        super().__init__(max_in_flight=max_in_flight, capture=capture)
        self.seed = seed
        self.behaviour = behaviour
        self.transcript = ScriptedTranscript(transcript) if transcript is not None else None

    def _complete(self, request: ChatRequest) -> ChatResponse:
        return mock_complete(request, self.seed, self.behaviour, self.transcript)
