#!/usr/bin/env python3
"""
任务目录
工作与非工作任务的名称、缩写与别名
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..config import data_path, load_toml
from ..errors import ConfigError

logger = logging.getLogger(__name__)


class TaskCategory(Enum):
    WORK = "work"
    NON_WORK = "non-work"


@dataclass(frozen=True)
class TaskDef:
    """任务定义"""

    name: str
    abbreviation: str
    category: TaskCategory
    aliases: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.name.strip() or not self.abbreviation.strip():
            raise ConfigError("任务名称和缩写不能为空")


def _key(text: str) -> str:
    return " ".join(text.strip().lower().split())


@dataclass(frozen=True)
class TaskCatalog:
    """有序任务目录，顺序即基线条件下的呈现顺序"""

    tasks: Tuple[TaskDef, ...]

    def __post_init__(self) -> None:
        if not self.tasks:
            raise ConfigError("任务目录不能为空")
        names = [_key(t.name) for t in self.tasks]
        abbrevs = [_key(t.abbreviation) for t in self.tasks]
        if len(set(names)) != len(names):
            raise ConfigError("任务名称重复")
        if len(set(abbrevs)) != len(abbrevs):
            raise ConfigError("任务缩写重复")

        lookup: Dict[str, TaskDef] = {}
        for task in self.tasks:
            keys = [task.name, task.abbreviation, task.abbreviation.rstrip(".")]
            keys.extend(task.aliases)
            for key in keys:
                k = _key(key)
                if not k:
                    continue
                owner = lookup.get(k)
                if owner is not None and owner is not task:
                    raise ConfigError(f"名称或别名冲突: {key}")
                lookup[k] = task
        # frozen dataclass 只能这样写入派生字段
        object.__setattr__(self, "_lookup", lookup)

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    def names(self) -> List[str]:
        return [t.name for t in self.tasks]

    def resolve(self, text: str) -> Optional[TaskDef]:
        """不区分大小写地按名称、缩写或别名查找"""
        lookup: Dict[str, TaskDef] = getattr(self, "_lookup")
        return lookup.get(_key(text)) or lookup.get(_key(text.rstrip(".:;,")))

    def get(self, name: str) -> TaskDef:
        task = self.resolve(name)
        if task is None:
            raise KeyError(name)
        return task

    def abbreviation(self, name: str) -> str:
        task = self.resolve(name)
        return task.abbreviation if task else name


def load_catalog(path: Optional[Path] = None) -> TaskCatalog:
    """读取任务目录 TOML，每个 [[task]] 一条"""
    path = path or data_path("tasks.toml")
    raw = load_toml(path)
    records = raw.get("task", [])
    tasks = []
    for record in records:
        try:
            tasks.append(
                TaskDef(
                    name=record["name"],
                    abbreviation=record["abbreviation"],
                    category=TaskCategory(record.get("category", "work")),
                    aliases=tuple(record.get("aliases", ())),
                )
            )
        except KeyError as e:
            raise ConfigError(f"{path}: 任务记录缺少字段 {e}") from e
        except ValueError as e:
            raise ConfigError(f"{path}: 任务类别无效 {e}") from e
    catalog = TaskCatalog(tasks=tuple(tasks))
    logger.debug("已加载任务目录 %s，共 %d 项", path, len(catalog))
    return catalog
