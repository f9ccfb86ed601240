#!/usr/bin/env python3
"""
智能体档案
从 TOML 读取姓名、角色、人格条件、生平与打字参数
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from ..config import data_path, load_toml
from ..errors import ConfigError
from ..persona import NEUTRAL_PERSONA, Lexicon, PersonaPrompt, persona_for_label
from .typing_sim import TypingProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AgentProfile:
    name: str
    role: str
    persona: PersonaPrompt = NEUTRAL_PERSONA
    biography: str = ""
    typing: TypingProfile = field(default_factory=TypingProfile)
    recent_events: int = 5
    facts: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ConfigError("智能体姓名不能为空")
        if self.recent_events < 0:
            raise ConfigError("recent_events 不能为负")

    def semantic_text(self) -> str:
        """写入提示词的档案文本"""
        parts = [f"Your name is {self.name}. You work as {self.role}."]
        if self.biography.strip():
            parts.append(self.biography.strip())
        return " ".join(parts)


def load_profile(lexicon: Lexicon, path: Optional[Path] = None, condition: Optional[str] = None) -> AgentProfile:
    """读取档案；condition 覆盖文件中的人格条件标签"""
    path = path or data_path("agent.toml")
    raw = load_toml(path)
    agent = raw.get("agent", {})
    typing = raw.get("typing", {})
    memory = raw.get("memory", {})

    label = condition or str(agent.get("condition", "Neutral"))
    try:
        profile = AgentProfile(
            name=str(agent["name"]),
            role=str(agent.get("role", "an office worker")),
            persona=persona_for_label(lexicon, label),
            biography=str(agent.get("biography", "")),
            typing=TypingProfile(
                wpm_mean=float(typing.get("wpm_mean", 40.0)),
                wpm_std=float(typing.get("wpm_std", 10.0)),
                mistake_prob=float(typing.get("mistake_prob", 0.02)),
                jitter=float(typing.get("jitter", 0.25)),
            ),
            recent_events=int(memory.get("recent_events", 5)),
            facts={str(k): str(v) for k, v in raw.get("facts", {}).items()},
        )
    except KeyError as e:
        raise ConfigError(f"{path}: 档案缺少字段 {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: 档案字段类型错误 {e}") from e

    logger.debug("已加载档案 %s (%s)", profile.name, profile.persona.label)
    return profile
