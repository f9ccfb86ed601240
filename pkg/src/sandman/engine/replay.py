#!/usr/bin/env python3
"""
日志回放
由情景日志重建智能体最终状态，并校验动作日志的时间戳
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

from .agent import AgentState, TaskSnapshot
from .channels import load_action_log
from .memory import EventKind, load_episodic_log
from .tasks import TaskStatus

logger = logging.getLogger(__name__)


def replay(action_log_path: Optional[Path], episodic_log_path: Path) -> AgentState:
    """回放情景事件得到最后一天的任务状态

    情景日志序号不连续或动作日志时间戳倒退时抛出 ValueError。
    """
    events = load_episodic_log(episodic_log_path)
    day = 0
    tasks: Dict[int, List] = {}
    for expected, event in enumerate(events):
        if event.seq != expected:
            raise ValueError(f"情景日志序号不连续: 期望 {expected}，实际 {event.seq}")
        data = event.data
        if event.kind is EventKind.PLAN_CREATED:
            day = int(data["day"])
            tasks = {
                slot: [entry["task"], TaskStatus.PENDING.value, None]
                for slot, entry in enumerate(data.get("entries", []))
            }
        elif event.kind is EventKind.TASK_ADDED:
            tasks[int(data["slot"])] = [data["task"], TaskStatus.PENDING.value, None]
        elif event.kind is EventKind.TASK_STARTED:
            tasks[int(data["slot"])][1] = TaskStatus.ACTIVE.value
        elif event.kind is EventKind.TASK_FINISHED:
            record = tasks[int(data["slot"])]
            record[1] = TaskStatus.DONE.value
            record[2] = data.get("failure")

    if action_log_path is not None and action_log_path.exists():
        actions = load_action_log(action_log_path)
        for prev, cur in zip(actions, actions[1:]):
            if cur.t < prev.t:
                raise ValueError(f"动作日志时间戳倒退: {prev.t} -> {cur.t}")
        logger.info("动作日志共 %d 条事件", len(actions))

    snapshots: List[TaskSnapshot] = [
        (slot, name, status, failure) for slot, (name, status, failure) in sorted(tasks.items())
    ]
    return AgentState(
        day=day,
        tasks=tuple(snapshots),
        episodic_events=len(events),
        clock_s=events[-1].t if events else 0.0,
    )
