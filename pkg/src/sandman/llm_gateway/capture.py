"""
请求/响应捕获日志
每行一条 JSON，可直接作为 Scripted 模拟的回放记录
"""

import json
import threading
from pathlib import Path
from typing import Any, Dict, List

from ..errors import ConfigError
from .types import ChatRequest, ChatResponse
from .wire import build_payload


class CaptureLog:
    """线程安全的捕获日志写入器"""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def record(self, request: ChatRequest, response: ChatResponse) -> None:
        entry = {
            "request_sha": request.fingerprint(),
            "payload": build_payload(request),
            "seed": request.seed,
            "text": response.text,
            "prompt_tokens": response.prompt_tokens,
            "completion_tokens": response.completion_tokens,
        }
        line = json.dumps(entry, ensure_ascii=False, sort_keys=True)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line + "\n")


def load_transcript(path: Path) -> List[Dict[str, Any]]:
    """读取回放记录，接受捕获日志或只含 text 字段的手写记录"""
    entries: List[Dict[str, Any]] = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as e:
                    raise ConfigError(f"{path}:{lineno} 不是有效的 JSON") from e
                if "text" not in entry:
                    raise ConfigError(f"{path}:{lineno} 缺少 text 字段")
                entries.append(entry)
    except FileNotFoundError as e:
        raise ConfigError(f"回放记录不存在: {path}") from e
    return entries
