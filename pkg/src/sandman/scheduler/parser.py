#!/usr/bin/env python3
"""
日程解析
把模型输出解析为日程，任何输入都不抛异常，失败时返回拒收记录

接受两种格式：
  每行 "HH:MM - HH:MM | TaskName" (24 小时制)
  JSON 数组 [{"start": "HH:MM", "end": "HH:MM", "task": "..."}]
"""

import json
import re
from typing import Any, List, Optional, Tuple, Union

from .catalog import TaskCatalog
from .schedule import MINUTES_PER_DAY, RejectReason, RejectRecord, Schedule, ScheduleEntry

LINE_RE = re.compile(
    r"^\s*(?:[-*•]\s*|\d{1,2}[.)]\s+)?"
    r"(?P<h1>\d{1,2}):(?P<m1>\d{2})\s*[-–—]\s*(?P<h2>\d{1,2}):(?P<m2>\d{2})"
    r"\s*\|\s*(?P<task>.+?)\s*$"
)
# 形似日程行但不合格式的行
LOOSE_RE = re.compile(r"\d{1,2}:\d{2}.*\|")
FENCE_RE = re.compile(r"^```(?:json)?\s*|\s*```$", re.MULTILINE)

Candidate = Tuple[int, int, str]


class _Reject(Exception):
    def __init__(self, reason: RejectReason, detail: str):
        super().__init__(detail)
        self.reason = reason
        self.detail = detail


def _minutes(hours: int, minutes: int, is_end: bool) -> int:
    if minutes >= 60 or hours > 24 or (hours == 24 and (minutes != 0 or not is_end)):
        raise _Reject(RejectReason.UNPARSEABLE, f"无效时间 {hours:02d}:{minutes:02d}")
    return hours * 60 + minutes


def _parse_clock(text: Any, is_end: bool) -> int:
    match = re.fullmatch(r"\s*(\d{1,2}):(\d{2})\s*", str(text))
    if not match:
        raise _Reject(RejectReason.UNPARSEABLE, f"无效时间 {text!r}")
    return _minutes(int(match.group(1)), int(match.group(2)), is_end)


def _json_candidates(text: str) -> List[Candidate]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise _Reject(RejectReason.UNPARSEABLE, f"JSON 解析失败: {e}")
    if not isinstance(data, list):
        raise _Reject(RejectReason.UNPARSEABLE, "JSON 顶层必须是数组")

    candidates = []
    for item in data:
        if not isinstance(item, dict):
            raise _Reject(RejectReason.UNPARSEABLE, "JSON 数组元素必须是对象")
        task = item.get("task", item.get("name"))
        if not isinstance(task, str):
            raise _Reject(RejectReason.UNPARSEABLE, "JSON 条目缺少任务名")
        if "start_min" in item and "duration_min" in item:
            try:
                start = int(item["start_min"])
                end = start + int(item["duration_min"])
            except (TypeError, ValueError):
                raise _Reject(RejectReason.UNPARSEABLE, "JSON 条目时间字段无效")
        elif "start" in item and "end" in item:
            start = _parse_clock(item["start"], is_end=False)
            end = _parse_clock(item["end"], is_end=True)
        else:
            raise _Reject(RejectReason.UNPARSEABLE, "JSON 条目缺少时间字段")
        candidates.append((start, end, task))
    return candidates


def _line_candidates(text: str) -> List[Candidate]:
    candidates = []
    for line in text.splitlines():
        match = LINE_RE.match(line)
        if match is None:
            if LOOSE_RE.search(line):
                raise _Reject(RejectReason.UNPARSEABLE, f"无法解析的日程行: {line.strip()[:80]}")
            continue
        start = _minutes(int(match.group("h1")), int(match.group("m1")), is_end=False)
        end = _minutes(int(match.group("h2")), int(match.group("m2")), is_end=True)
        candidates.append((start, end, match.group("task")))
    return candidates


def _build(candidates: List[Candidate], catalog: TaskCatalog) -> Schedule:
    entries = []
    for start, end, name in candidates:
        if not 0 <= start < MINUTES_PER_DAY or end > MINUTES_PER_DAY or end <= start:
            raise _Reject(RejectReason.UNPARSEABLE, f"时间段无效: {start}-{end}")
        task = catalog.resolve(name)
        if task is None:
            raise _Reject(RejectReason.UNKNOWN_TASK, f"未知任务: {name.strip()[:80]}")
        entries.append(ScheduleEntry(task=task.name, start_min=start, duration_min=end - start))

    entries.sort(key=lambda e: e.start_min)
    for prev, cur in zip(entries, entries[1:]):
        if cur.start_min < prev.end_min:
            raise _Reject(RejectReason.OVERLAP, f"{prev.task} 与 {cur.task} 时间重叠")
    return Schedule(entries=tuple(entries))


def parse_schedule(
    raw: Union[str, bytes],
    catalog: TaskCatalog,
    condition: str = "",
    sample_index: int = 0,
) -> Union[Schedule, RejectRecord]:
    """解析模型输出，返回日程或第一条失败规则对应的拒收记录"""
    text = raw.decode("utf-8", errors="replace") if isinstance(raw, bytes) else str(raw)

    def reject(reason: RejectReason, detail: str) -> RejectRecord:
        return RejectRecord(
            condition=condition,
            sample_index=sample_index,
            reason=reason,
            raw_text=text,
            detail=detail,
        )

    try:
        body = FENCE_RE.sub("", text).strip()
        if not body:
            return reject(RejectReason.EMPTY_SCHEDULE, "输出为空")

        if body.startswith("["):
            candidates = _json_candidates(body)
        else:
            candidates = _line_candidates(body)

        if not candidates:
            if body.startswith("["):
                return reject(RejectReason.EMPTY_SCHEDULE, "日程为空")
            return reject(RejectReason.UNPARSEABLE, "没有找到日程行")
        return _build(candidates, catalog)
    except _Reject as r:
        return reject(r.reason, r.detail)
    except Exception as e:  # 任意输入都不能让解析器崩溃
        return reject(RejectReason.UNPARSEABLE, f"解析异常: {e}")


def is_reject(result: Optional[Union[Schedule, RejectRecord]]) -> bool:
    return isinstance(result, RejectRecord)
