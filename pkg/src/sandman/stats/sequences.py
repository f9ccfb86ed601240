"""期望日程：逐槽位取众数任务"""

from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from ..errors import EmptySample

END_OF_DAY = "End"


@dataclass(frozen=True)
class ExpectedSlot:
    """槽位序号 (从 1 开始)、众数任务、出现次数、是否并列"""

    index: int
    task: str
    frequency: int
    tie: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "task": self.task, "frequency": self.frequency, "tie": self.tie}


@dataclass(frozen=True)
class ExpectedSchedule:
    slots: Tuple[ExpectedSlot, ...]

    def tasks(self) -> List[str]:
        return [slot.task for slot in self.slots]


def expected_schedule(
    sequences: Sequence[Sequence[str]],
    catalog_order: Sequence[str],
    end_marker: str = END_OF_DAY,
) -> ExpectedSchedule:
    """每份日程末尾补齐结束标记到最长长度，逐槽位取众数

    并列时按任务目录顺序取前者，结束标记排在所有任务之后，目录外名称按字母序排在最后。
    """
    if not sequences:
        raise EmptySample("期望日程至少需要一份日程")

    padded = []
    for seq in sequences:
        names = list(seq)
        if not names or names[-1] != end_marker:
            names.append(end_marker)
        padded.append(names)
    width = max(len(names) for names in padded)
    for names in padded:
        names.extend([end_marker] * (width - len(names)))

    rank = {name: i for i, name in enumerate(catalog_order)}
    end_rank = len(rank)

    def order_key(name: str) -> Tuple[int, str]:
        if name == end_marker:
            return end_rank, ""
        return rank.get(name, end_rank + 1), name

    slots = []
    for i in range(width):
        tally = Counter(names[i] for names in padded)
        top = max(tally.values())
        leaders = sorted((name for name, count in tally.items() if count == top), key=order_key)
        slots.append(ExpectedSlot(index=i + 1, task=leaders[0], frequency=top, tie=len(leaders) > 1))
    return ExpectedSchedule(slots=tuple(slots))
