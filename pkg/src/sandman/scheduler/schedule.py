#!/usr/bin/env python3
"""
日程数据结构
日程条目、日程、拒收记录，以及规范化序列化
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..stats import END_OF_DAY
from .catalog import TaskCatalog

MINUTES_PER_DAY = 24 * 60


def format_hhmm(minutes: int) -> str:
    """分钟数转为 HH:MM，1440 输出 24:00"""
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


@dataclass(frozen=True)
class ScheduleEntry:
    """日程条目：任务名、开始时间与时长 (分钟)"""

    task: str
    start_min: int
    duration_min: int

    def __post_init__(self) -> None:
        if self.duration_min <= 0:
            raise ValueError(f"时长必须为正: {self.duration_min}")
        if not 0 <= self.start_min < MINUTES_PER_DAY:
            raise ValueError(f"开始时间超出当天范围: {self.start_min}")
        if self.end_min > MINUTES_PER_DAY:
            raise ValueError(f"结束时间超出当天范围: {self.end_min}")

    @property
    def end_min(self) -> int:
        return self.start_min + self.duration_min

    def to_dict(self) -> Dict[str, Any]:
        return {"task": self.task, "start_min": self.start_min, "duration_min": self.duration_min}


@dataclass(frozen=True)
class Schedule:
    """按开始时间排序、互不重叠的日程，末尾隐含结束标记"""

    entries: Tuple[ScheduleEntry, ...]

    def __post_init__(self) -> None:
        for prev, cur in zip(self.entries, self.entries[1:]):
            if cur.start_min < prev.start_min:
                raise ValueError("日程条目未按开始时间排序")
            if cur.start_min < prev.end_min:
                raise ValueError(f"日程条目重叠: {prev.task} 与 {cur.task}")

    def __len__(self) -> int:
        return len(self.entries)

    def task_names(self) -> List[str]:
        return [e.task for e in self.entries]

    def slots(self) -> List[str]:
        """槽位序列，含末尾结束标记"""
        return self.task_names() + [END_OF_DAY]

    def validate(self, catalog: TaskCatalog) -> None:
        """重新校验全部不变量"""
        Schedule(self.entries)
        for entry in self.entries:
            task = catalog.resolve(entry.task)
            if task is None or task.name != entry.task:
                raise ValueError(f"任务不在目录中: {entry.task}")


class RejectReason(Enum):
    """拒收原因，TRANSPORT 表示提供方在重试后仍失败"""

    UNKNOWN_TASK = "UnknownTask"
    OVERLAP = "Overlap"
    UNPARSEABLE = "Unparseable"
    EMPTY_SCHEDULE = "EmptySchedule"
    TRANSPORT = "Transport"


@dataclass(frozen=True)
class RejectRecord:
    """未通过校验的生成结果，保留原文"""

    condition: str
    sample_index: int
    reason: RejectReason
    raw_text: str
    detail: str = ""


def serialise_schedule(schedule: Schedule) -> str:
    """规范化 JSONL：每行一个条目，末行 {"end": true}"""
    lines = [
        json.dumps(entry.to_dict(), sort_keys=True, separators=(",", ":"))
        for entry in schedule.entries
    ]
    lines.append(json.dumps({"end": True}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def load_schedule(text: str) -> Schedule:
    """读取规范化 JSONL 日程"""
    entries = []
    ended = False
    for line in text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if record.get("end"):
            ended = True
            break
        entries.append(
            ScheduleEntry(
                task=str(record["task"]),
                start_min=int(record["start_min"]),
                duration_min=int(record["duration_min"]),
            )
        )
    if not ended:
        raise ValueError("日程文件缺少结束标记")
    return Schedule(entries=tuple(entries))


def render_schedule_lines(schedule: Schedule) -> str:
    """渲染为 "HH:MM - HH:MM | Task" 行格式"""
    return "\n".join(
        f"{format_hhmm(e.start_min)} - {format_hhmm(e.end_min)} | {e.task}"
        for e in schedule.entries
    )


def rule_based_plan(
    catalog: TaskCatalog,
    start_min: int = 9 * 60,
    slot_min: int = 60,
    order: Optional[List[str]] = None,
) -> Schedule:
    """确定性的顺序排程：按目录顺序依次排入固定时长，直到当天结束"""
    entries = []
    t = start_min
    for name in order or catalog.names():
        if t + slot_min > MINUTES_PER_DAY:
            break
        entries.append(ScheduleEntry(task=catalog.get(name).name, start_min=t, duration_min=slot_min))
        t += slot_min
    return Schedule(entries=tuple(entries))
