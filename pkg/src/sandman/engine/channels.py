#!/usr/bin/env python3
"""
动作通道
通道位于任务与环境之间，把任务内容转换为带时间戳的动作事件
"""

import json
import logging
import re
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ChannelUnbound
from ..scheduler import TaskCategory, TaskDef
from .tasks import TaskInstance
from .typing_sim import TypingProfile, simulate_typing

logger = logging.getLogger(__name__)


class ActionKind(Enum):
    OPEN = "Open"
    CLOSE = "Close"
    KEY_PRESS = "KeyPress"
    NAVIGATE = "Navigate"
    LOG = "Log"


@dataclass(frozen=True)
class ActionEvent:
    """动作事件，t 为模拟时钟的秒数"""

    t: float
    channel: str
    kind: ActionKind
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"t": round(self.t, 6), "channel": self.channel, "kind": self.kind.value, "payload": self.payload}

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "ActionEvent":
        return cls(
            t=float(raw["t"]),
            channel=str(raw["channel"]),
            kind=ActionKind(raw["kind"]),
            payload=dict(raw.get("payload", {})),
        )


class Channel(ABC):
    """通道基类

    content_kind 非空时任务执行前需要生成器提供内容，取值对应程序记忆中的模板名。
    """

    name = "channel"
    content_kind: Optional[str] = None

    @abstractmethod
    def emit(self, task: TaskInstance, content: str, t0: float, seed: int) -> List[ActionEvent]:
        ...


class LogChannel(Channel):
    """通用通道，只记录任务本身"""

    name = "log"

    def emit(self, task: TaskInstance, content: str, t0: float, seed: int) -> List[ActionEvent]:
        return [
            ActionEvent(
                t=t0,
                channel=self.name,
                kind=ActionKind.LOG,
                payload={"task": task.task.name, "slot": task.slot, "duration_min": task.duration_min},
            )
        ]


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-") or "task"


class DocumentChannel(Channel):
    """模拟在文本文档中打字，给出 directory 时把最终文本写入文件"""

    name = "document"
    content_kind = "document"

    def __init__(self, typing: Optional[TypingProfile] = None, directory: Optional[Path] = None):
        self.typing = typing or TypingProfile()
        self.directory = directory

    def emit(self, task: TaskInstance, content: str, t0: float, seed: int) -> List[ActionEvent]:
        document = f"{task.slot:02d}-{_slug(task.task.name)}.txt"
        events = [ActionEvent(t0, self.name, ActionKind.OPEN, {"document": document})]
        t = t0
        for stroke in simulate_typing(content, self.typing, seed):
            t = t0 + stroke.offset_s
            events.append(ActionEvent(t, self.name, ActionKind.KEY_PRESS, {"key": stroke.key}))
        events.append(ActionEvent(t, self.name, ActionKind.CLOSE, {"document": document}))

        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            (self.directory / document).write_text(content, encoding="utf-8")
        task.content_ref = document
        return events


class WebChannel(Channel):
    """模拟浏览器导航，只产生导航事件"""

    name = "web"
    content_kind = "web"

    def __init__(self, dwell_s: float = 45.0):
        self.dwell_s = dwell_s

    def emit(self, task: TaskInstance, content: str, t0: float, seed: int) -> List[ActionEvent]:
        rng = np.random.default_rng(seed)
        urls = [line.strip() for line in content.splitlines() if line.strip().startswith("http")]
        events = [ActionEvent(t0, self.name, ActionKind.OPEN, {"application": "browser"})]
        t = t0
        for url in urls:
            t += float(rng.uniform(0.5, 1.5)) * self.dwell_s
            events.append(ActionEvent(t, self.name, ActionKind.NAVIGATE, {"url": url}))
        events.append(ActionEvent(t, self.name, ActionKind.CLOSE, {"application": "browser"}))
        return events


class ChannelRegistry:
    """按任务名、再按任务类别、最后按默认通道路由"""

    def __init__(self, default: Optional[Channel] = None):
        self.default = default
        self._by_task: Dict[str, Channel] = {}
        self._by_category: Dict[TaskCategory, Channel] = {}

    def bind_task(self, name: str, channel: Channel) -> None:
        self._by_task[name.lower()] = channel

    def bind_category(self, category: TaskCategory, channel: Channel) -> None:
        self._by_category[category] = channel

    def resolve(self, task: TaskDef) -> Channel:
        channel = self._by_task.get(task.name.lower()) or self._by_category.get(task.category) or self.default
        if channel is None:
            raise ChannelUnbound(f"任务 {task.name} 没有绑定通道")
        return channel


DOCUMENT_TASKS = ("Email", "Creative", "Plan", "Reflect", "Work")
WEB_TASKS = ("Research", "Reading", "Media")


def default_registry(typing: Optional[TypingProfile] = None, documents: Optional[Path] = None) -> ChannelRegistry:
    """写作类任务走文档通道，浏览类任务走网页通道，其余只记录日志"""
    registry = ChannelRegistry(default=LogChannel())
    document = DocumentChannel(typing=typing, directory=documents)
    web = WebChannel()
    for name in DOCUMENT_TASKS:
        registry.bind_task(name, document)
    for name in WEB_TASKS:
        registry.bind_task(name, web)
    return registry


class ActionLog:
    """动作日志，多个智能体可共享，写入由锁串行化"""

    def __init__(self, path: Optional[Path] = None):
        self.path = path
        self._lock = threading.Lock()
        self._events: List[ActionEvent] = []
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, events: List[ActionEvent]) -> None:
        with self._lock:
            self._events.extend(events)
            if self.path is not None and events:
                with open(self.path, "a", encoding="utf-8") as f:
                    for event in events:
                        f.write(json.dumps(event.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")

    @property
    def events(self) -> List[ActionEvent]:
        return list(self._events)

    def __len__(self) -> int:
        return len(self._events)


def load_action_log(path: Path) -> List[ActionEvent]:
    events = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                events.append(ActionEvent.from_dict(json.loads(line)))
    return events
