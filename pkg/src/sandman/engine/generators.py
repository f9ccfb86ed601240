#!/usr/bin/env python3
"""
内容生成器
以人格、记忆和任务元数据向模型请求任务内容
"""

import logging
from typing import Optional

from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE
from ..llm_gateway import ChatProvider, ChatRequest
from ..persona import PersonaPrompt
from ..scheduler import format_hhmm
from .memory import MemoryStores
from .profile import AgentProfile
from .tasks import TaskInstance

logger = logging.getLogger(__name__)

MAX_CONTENT_TOKENS = 400


class ContentGenerator:
    def __init__(
        self,
        provider: ChatProvider,
        profile: AgentProfile,
        persona: Optional[PersonaPrompt] = None,
        temperature: float = DEFAULT_TEMPERATURE,
        model_id: str = DEFAULT_MODEL,
    ):
        self.provider = provider
        self.profile = profile
        # 条件人格优先于档案中的人格
        self.persona = persona or profile.persona
        self.temperature = temperature
        self.model_id = model_id

    def build_request(self, task: TaskInstance, kind: str, memory: MemoryStores, seed: int) -> ChatRequest:
        parts = []
        if not self.persona.is_neutral and self.persona.text:
            parts.append(self.persona.text + ".")
        semantic = memory.semantic.describe()
        if semantic:
            parts.append(semantic)

        recent = memory.episodic.recent(memory.procedural.recent_events)
        if recent:
            parts.append("Recent activity:\n" + "\n".join(f"- {e.summary()}" for e in recent))

        parts.append(
            f"Current task: {task.task.name} ({task.task.category.value}), "
            f"{format_hhmm(task.start_min)} - {format_hhmm(task.end_min)}"
        )
        parts.append(memory.procedural.template(kind))
        return ChatRequest(
            user_message="\n\n".join(parts),
            temperature=self.temperature,
            model_id=self.model_id,
            max_tokens=MAX_CONTENT_TOKENS,
            seed=seed,
        )

    def generate(self, task: TaskInstance, kind: str, memory: MemoryStores, seed: int) -> str:
        """返回生成的内容，提供方错误向上抛出"""
        response = self.provider.complete(self.build_request(task, kind, memory, seed))
        logger.debug("任务 %s 生成内容 %d 字符", task.task.name, len(response.text))
        return response.text.strip()
