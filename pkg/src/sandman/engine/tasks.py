#!/usr/bin/env python3
"""
动态任务列表
任务实例按槽位排列，状态只能 Pending → Active → Done
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

from ..errors import TaskStateError
from ..scheduler import Schedule, TaskCatalog, TaskDef


class TaskStatus(Enum):
    PENDING = "Pending"
    ACTIVE = "Active"
    DONE = "Done"


@dataclass
class TaskInstance:
    task: TaskDef
    slot: int
    start_min: int
    duration_min: int
    status: TaskStatus = TaskStatus.PENDING
    content_ref: Optional[str] = None
    failure: Optional[str] = None

    @property
    def end_min(self) -> int:
        return self.start_min + self.duration_min

    def start(self) -> None:
        if self.status is not TaskStatus.PENDING:
            raise TaskStateError(f"任务 {self.task.name}#{self.slot} 状态为 {self.status.value}，无法开始")
        self.status = TaskStatus.ACTIVE

    def finish(self, failure: Optional[str] = None) -> None:
        if self.status is not TaskStatus.ACTIVE:
            raise TaskStateError(f"任务 {self.task.name}#{self.slot} 状态为 {self.status.value}，无法结束")
        self.status = TaskStatus.DONE
        self.failure = failure


class TaskList:
    """可增长的任务列表，pending() 随任务完成而缩短"""

    def __init__(self) -> None:
        self._tasks: List[TaskInstance] = []

    @classmethod
    def from_schedule(cls, schedule: Schedule, catalog: TaskCatalog) -> "TaskList":
        tasks = cls()
        for entry in schedule.entries:
            tasks.add(catalog.get(entry.task), entry.start_min, entry.duration_min)
        return tasks

    def add(self, task: TaskDef, start_min: int, duration_min: int) -> TaskInstance:
        instance = TaskInstance(task=task, slot=len(self._tasks), start_min=start_min, duration_min=duration_min)
        self._tasks.append(instance)
        return instance

    def next_pending(self) -> Optional[TaskInstance]:
        for task in self._tasks:
            if task.status is TaskStatus.PENDING:
                return task
        return None

    def pending(self) -> List[TaskInstance]:
        return [t for t in self._tasks if t.status is TaskStatus.PENDING]

    def counts(self) -> Dict[TaskStatus, int]:
        result = {s: 0 for s in TaskStatus}
        for task in self._tasks:
            result[task.status] += 1
        return result

    def __iter__(self):
        return iter(self._tasks)

    def __len__(self) -> int:
        return len(self._tasks)

    def __getitem__(self, slot: int) -> TaskInstance:
        return self._tasks[slot]
