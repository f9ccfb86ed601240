#!/usr/bin/env python3
"""
量表题库
MPI 题目与题库，题库文件为 JSONL，每行 {id, statement, factor, keying}
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from ..config import data_path
from ..errors import ConfigError
from ..persona import OceanFactor

logger = logging.getLogger(__name__)


class Keying(Enum):
    """计分方向，NEGATIVE 为反向计分"""

    POSITIVE = "+"
    NEGATIVE = "-"

    @classmethod
    def parse(cls, text: str) -> "Keying":
        key = str(text).strip().lower()
        if key in ("+", "pos", "positive"):
            return cls.POSITIVE
        if key in ("-", "neg", "negative", "reverse"):
            return cls.NEGATIVE
        raise ConfigError(f"未知的计分方向: {text}")


@dataclass(frozen=True)
class MpiItem:
    id: str
    statement: str
    factor: OceanFactor
    keying: Keying = Keying.POSITIVE

    def __post_init__(self) -> None:
        if not self.id.strip():
            raise ConfigError("题目 id 不能为空")
        if not self.statement.strip():
            raise ConfigError(f"题目 {self.id} 的陈述为空")


@dataclass(frozen=True)
class MpiItemBank:
    """有序题库，每个因素题量相同"""

    items: Tuple[MpiItem, ...]

    def __post_init__(self) -> None:
        ids = [item.id for item in self.items]
        duplicates = [i for i, c in Counter(ids).items() if c > 1]
        if duplicates:
            raise ConfigError(f"题目 id 重复: {', '.join(sorted(duplicates))}")

        counts = Counter(item.factor for item in self.items)
        missing = [f.letter for f in OceanFactor if counts[f] == 0]
        if missing:
            raise ConfigError(f"题库缺少因素: {', '.join(missing)}")
        if len(set(counts.values())) != 1:
            detail = ", ".join(f"{f.letter}={counts[f]}" for f in OceanFactor)
            raise ConfigError(f"各因素题量不一致: {detail}")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[MpiItem]:
        return iter(self.items)

    def by_factor(self) -> Dict[OceanFactor, List[MpiItem]]:
        groups: Dict[OceanFactor, List[MpiItem]] = {f: [] for f in OceanFactor}
        for item in self.items:
            groups[item.factor].append(item)
        return groups

    def get(self, item_id: str) -> MpiItem:
        for item in self.items:
            if item.id == item_id:
                return item
        raise KeyError(item_id)


def load_item_bank(path: Optional[Path] = None) -> MpiItemBank:
    """读取 JSONL 题库，空行和 # 开头的行跳过"""
    path = path or data_path("mpi_items.jsonl")
    items = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    record = json.loads(line)
                    items.append(
                        MpiItem(
                            id=str(record["id"]),
                            statement=str(record["statement"]),
                            factor=OceanFactor.parse(str(record["factor"])),
                            keying=Keying.parse(record.get("keying", "+")),
                        )
                    )
                except (json.JSONDecodeError, KeyError, TypeError) as e:
                    raise ConfigError(f"{path}:{lineno}: 题目记录无效 ({e})") from e
    except FileNotFoundError as e:
        raise ConfigError(f"题库文件不存在: {path}") from e

    bank = MpiItemBank(items=tuple(items))
    logger.debug("已加载题库 %s，共 %d 题", path, len(bank))
    return bank
