#!/usr/bin/env python3
"""
排程提示词
生成条件 (人格、系统消息、任务顺序随机化) 与引导任务的提示词构造
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..config import DEFAULT_MODEL, DEFAULT_SYSTEM_MESSAGE, DEFAULT_TEMPERATURE
from ..errors import ConfigError
from ..llm_gateway import ChatRequest
from ..persona import NEUTRAL_PERSONA, Lexicon, PersonaPrompt, all_conditions
from .catalog import TaskCatalog

TASK_LIST_HEADER = "Available tasks:"
PLANNING_INSTRUCTION = "Plan a full working day for yourself using the tasks below."
FORMAT_INSTRUCTION = (
    'Respond with one line per scheduled task in the format "HH:MM - HH:MM | TaskName" '
    "using 24-hour zero-padded times, in chronological order and without overlaps. "
    "Use only the task names listed above; a task may appear more than once or not at all. "
    "Do not add any other text."
)

BASELINE_LABEL = "Baseline"
SYS_LABEL = "Sys"
RAND_LABEL = "Rand"
SYS_RAND_LABEL = "Sys & Rand"


@dataclass(frozen=True)
class GenerationCondition:
    """一组样本共享的生成条件"""

    label: str
    persona: PersonaPrompt = NEUTRAL_PERSONA
    use_system_message: bool = False
    randomise_order: bool = False
    system_message: str = DEFAULT_SYSTEM_MESSAGE

    def __post_init__(self) -> None:
        if not self.label.strip():
            raise ConfigError("条件标签不能为空")
        if self.use_system_message and not self.system_message.strip():
            raise ConfigError(f"条件 {self.label} 启用了系统消息但内容为空")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "persona": self.persona.label,
            "persona_text": self.persona.text,
            "use_system_message": self.use_system_message,
            "randomise_order": self.randomise_order,
            "system_message": self.system_message if self.use_system_message else None,
        }


def randomise_task_order(catalog: TaskCatalog, seed: int) -> List[str]:
    """均匀随机排列任务顺序，相同种子结果相同"""
    names = catalog.names()
    perm = np.random.default_rng(seed).permutation(len(names))
    return [names[i] for i in perm]


def presented_order(condition: GenerationCondition, catalog: TaskCatalog, seed: int) -> List[str]:
    """提示词中呈现的任务顺序"""
    if condition.randomise_order:
        return randomise_task_order(catalog, seed)
    return catalog.names()


def build_bootstrap_prompt(
    condition: GenerationCondition,
    task_order: Sequence[str],
    profile_text: str = "",
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
    seed: Optional[int] = None,
) -> ChatRequest:
    """构造日程规划请求

    用户消息依次为：人格句 (Neutral 时省略)、智能体档案、任务列表、格式说明。
    """
    if not task_order:
        raise ValueError("任务列表不能为空")

    parts = []
    if not condition.persona.is_neutral and condition.persona.text:
        parts.append(condition.persona.text + ".")
    if profile_text.strip():
        parts.append(profile_text.strip())
    parts.append(PLANNING_INSTRUCTION)
    parts.append(TASK_LIST_HEADER + "\n" + "\n".join(f"- {name}" for name in task_order))
    parts.append(FORMAT_INSTRUCTION)

    return ChatRequest(
        user_message="\n\n".join(parts),
        temperature=temperature,
        model_id=model_id,
        system_message=condition.system_message if condition.use_system_message else None,
        seed=seed,
    )


def baseline_conditions(system_message: str = DEFAULT_SYSTEM_MESSAGE) -> List[GenerationCondition]:
    """四个干预对照组：Baseline、Sys、Rand、Sys & Rand，人格均为 Neutral"""
    return [
        GenerationCondition(label=BASELINE_LABEL, system_message=system_message),
        GenerationCondition(label=SYS_LABEL, use_system_message=True, system_message=system_message),
        GenerationCondition(label=RAND_LABEL, randomise_order=True, system_message=system_message),
        GenerationCondition(
            label=SYS_RAND_LABEL,
            use_system_message=True,
            randomise_order=True,
            system_message=system_message,
        ),
    ]


def persona_conditions(
    lexicon: Lexicon,
    use_system_message: bool = False,
    randomise_order: bool = False,
    system_message: str = DEFAULT_SYSTEM_MESSAGE,
) -> List[GenerationCondition]:
    """Neutral 加十个单因素人格条件"""
    return [
        GenerationCondition(
            label=persona.label,
            persona=persona,
            use_system_message=use_system_message,
            randomise_order=randomise_order,
            system_message=system_message,
        )
        for persona in all_conditions(lexicon)
    ]
