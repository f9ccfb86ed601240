"""
语言模型网关
统一的对话补全边界：一个真实 HTTP 提供方，一个带种子的确定性模拟
"""

from pathlib import Path
from typing import Optional

from ..config import ProviderSettings
from .capture import CaptureLog, load_transcript
from .http_provider import HttpChatProvider
from .mock_provider import MockBehaviour, MockChatProvider, ScriptedTranscript, mock_complete
from .types import ChatProvider, ChatRequest, ChatResponse


def create_provider(
    settings: ProviderSettings,
    behaviour: MockBehaviour,
    seed: int = 0,
    api_key: Optional[str] = None,
    capture: Optional[Path] = None,
) -> ChatProvider:
    """按配置创建提供方"""
    capture_log = CaptureLog(capture) if capture is not None else None
    if settings.kind == "real":
        return HttpChatProvider(settings, api_key=api_key, capture=capture_log)
    if settings.kind == "scripted":
        assert settings.transcript is not None
        return MockChatProvider(
            seed=seed,
            behaviour=MockBehaviour.SCRIPTED,
            transcript=load_transcript(settings.transcript),
            max_in_flight=1,
            capture=capture_log,
        )
    return MockChatProvider(
        seed=seed,
        behaviour=behaviour,
        max_in_flight=settings.max_in_flight,
        capture=capture_log,
    )


__all__ = [
    'CaptureLog', 'load_transcript', 'HttpChatProvider', 'MockBehaviour',
    'MockChatProvider', 'ScriptedTranscript', 'mock_complete', 'ChatProvider',
    'ChatRequest', 'ChatResponse', 'create_provider',
]
