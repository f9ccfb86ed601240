#!/usr/bin/env python3
"""
对话补全接口类型
请求、响应值对象与提供方抽象基类
"""

import hashlib
import json
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, Optional

from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE

if TYPE_CHECKING:
    from .capture import CaptureLog


@dataclass(frozen=True)
class ChatRequest:
    """单轮对话请求"""

    user_message: str
    temperature: float = DEFAULT_TEMPERATURE
    model_id: str = DEFAULT_MODEL
    system_message: Optional[str] = None
    max_tokens: Optional[int] = None
    # 采样种子，同一提示词的不同样本靠它区分
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.user_message:
            raise ValueError("user_message 不能为空")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature 超出范围 [0, 2]: {self.temperature}")
        if self.max_tokens is not None and self.max_tokens <= 0:
            raise ValueError("max_tokens 必须为正整数")

    def fingerprint(self) -> str:
        """请求内容摘要，用于模拟种子和脚本回放匹配"""
        canonical = json.dumps(
            {
                "model": self.model_id,
                "system": self.system_message,
                "user": self.user_message,
                "temperature": self.temperature,
                "max_tokens": self.max_tokens,
                "seed": self.seed,
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def snapshot(self) -> Dict[str, Any]:
        """写入运行记录的请求快照，不含凭据"""
        return {
            "model_id": self.model_id,
            "system_message": self.system_message,
            "user_message": self.user_message,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ChatResponse:
    """对话响应"""

    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency_s: float = 0.0
    attempts: int = 1

    def __post_init__(self) -> None:
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token 计数不能为负")


class ChatProvider(ABC):
    """对话补全提供方

    complete 可并发调用，全局信号量限制同时在途的请求数。
    """

    name = "provider"

    def __init__(self, max_in_flight: int = 4, capture: Optional["CaptureLog"] = None):
        self.max_in_flight = max_in_flight
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self.capture = capture

    def complete(self, request: ChatRequest) -> ChatResponse:
        """执行一次补全，重试在提供方内部完成"""
        with self._slots:
            response = self._complete(request)
        if self.capture is not None:
            self.capture.record(request, response)
        return response

    @abstractmethod
    def _complete(self, request: ChatRequest) -> ChatResponse:
        ...
