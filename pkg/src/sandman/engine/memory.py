#!/usr/bin/env python3
"""
智能体记忆
语义记忆 (档案与自我认知)、情景记忆 (只追加的事件日志)、
程序记忆 (提示词模板与行为参数)、工作记忆 (单个决策周期内的临时数据)
"""

import json
import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)


class EventKind(Enum):
    PLAN_CREATED = "PlanCreated"
    TASK_ADDED = "TaskAdded"
    TASK_STARTED = "TaskStarted"
    TASK_FINISHED = "TaskFinished"


@dataclass(frozen=True)
class EpisodicEvent:
    seq: int
    t: float
    kind: EventKind
    data: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"seq": self.seq, "t": self.t, "kind": self.kind.value, "data": self.data}

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "EpisodicEvent":
        return cls(
            seq=int(raw["seq"]),
            t=float(raw["t"]),
            kind=EventKind(raw["kind"]),
            data=dict(raw.get("data", {})),
        )

    def summary(self) -> str:
        """供生成器提示词使用的一行描述"""
        task = self.data.get("task")
        if self.kind is EventKind.PLAN_CREATED:
            return f"Planned the day with {self.data.get('tasks', 0)} tasks"
        if self.kind is EventKind.TASK_STARTED:
            return f"Started {task}"
        if self.kind is EventKind.TASK_FINISHED:
            return f"Finished {task}"
        return f"Added {task} to the task list"


class EpisodicMemory:
    """只追加的事件日志

    给出 path 时每条事件立即写入 JSONL 文件。
    """

    def __init__(self, path: Optional[Path] = None):
        self.path = path
        self._events: List[EpisodicEvent] = []
        self._lock = threading.Lock()
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, t: float, kind: EventKind, data: Optional[Dict[str, Any]] = None) -> EpisodicEvent:
        with self._lock:
            event = EpisodicEvent(seq=len(self._events), t=t, kind=kind, data=dict(data or {}))
            self._events.append(event)
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(json.dumps(event.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")
        return event

    @property
    def events(self) -> Tuple[EpisodicEvent, ...]:
        return tuple(self._events)

    def recent(self, k: int) -> List[EpisodicEvent]:
        return list(self._events[-k:]) if k > 0 else []

    def count(self, kind: EventKind) -> int:
        return sum(1 for e in self._events if e.kind is kind)

    def __len__(self) -> int:
        return len(self._events)


def load_episodic_log(path: Path) -> List[EpisodicEvent]:
    events = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                events.append(EpisodicEvent.from_dict(json.loads(line)))
    return events


@dataclass
class SemanticMemory:
    """档案文本与结构化的自我认知"""

    profile_text: str
    facts: Dict[str, str] = field(default_factory=dict)

    def describe(self) -> str:
        lines = [self.profile_text.strip()] if self.profile_text.strip() else []
        lines.extend(f"{k}: {v}" for k, v in sorted(self.facts.items()))
        return "\n".join(lines)


DEFAULT_TEMPLATES = {
    "document": (
        "Write the text you would type for this task. "
        "Reply with the text only, at most a few short paragraphs."
    ),
    "web": (
        "List one to three web search queries you would run for this task, "
        "as search queries written as URLs, one per line."
    ),
}


@dataclass
class ProceduralMemory:
    """提示词模板与行为参数"""

    templates: Dict[str, str] = field(default_factory=lambda: dict(DEFAULT_TEMPLATES))
    recent_events: int = 5
    parameters: Dict[str, Any] = field(default_factory=dict)

    def template(self, kind: str) -> str:
        return self.templates[kind]


class WorkingMemory:
    """决策周期内的临时键值数据，每个周期开始时清空"""

    def __init__(self) -> None:
        self._data: Dict[str, Any] = {}

    def __getitem__(self, key: str) -> Any:
        return self._data[key]

    def __setitem__(self, key: str, value: Any) -> None:
        self._data[key] = value

    def __contains__(self, key: object) -> bool:
        return key in self._data

    def get(self, key: str, default: Any = None) -> Any:
        return self._data.get(key, default)

    def update(self, values: Dict[str, Any]) -> None:
        self._data.update(values)

    def clear(self) -> None:
        self._data.clear()

    def __len__(self) -> int:
        return len(self._data)


@dataclass
class MemoryStores:
    semantic: SemanticMemory
    episodic: EpisodicMemory
    procedural: ProceduralMemory = field(default_factory=ProceduralMemory)
    working: WorkingMemory = field(default_factory=WorkingMemory)
