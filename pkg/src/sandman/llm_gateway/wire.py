"""
线上报文格式
chat-completions 风格 JSON：
  请求 {"model", "messages": [{"role", "content"}], "temperature", ["max_tokens"]}
  响应 {"choices": [{"message": {"content"}}], "usage": {"prompt_tokens", "completion_tokens"}}
其余采样参数不发送，使用提供方默认值。请求种子只用于模拟提供方和请求指纹，不写入报文。
"""

from typing import Any, Dict, List, Tuple

from ..errors import MalformedResponse
from .types import ChatRequest


def build_payload(request: ChatRequest) -> Dict[str, Any]:
    """构造请求报文"""
    messages: List[Dict[str, str]] = []
    if request.system_message:
        messages.append({"role": "system", "content": request.system_message})
    messages.append({"role": "user", "content": request.user_message})

    payload: Dict[str, Any] = {
        "model": request.model_id,
        "messages": messages,
        "temperature": request.temperature,
    }
    if request.max_tokens is not None:
        payload["max_tokens"] = request.max_tokens
    return payload


def decode_completion(data: Any) -> Tuple[str, int, int]:
    """从响应报文中取出文本与 token 计数"""
    try:
        text = data["choices"][0]["message"]["content"]
        usage = data.get("usage") or {}
        prompt_tokens = int(usage.get("prompt_tokens", 0))
        completion_tokens = int(usage.get("completion_tokens", 0))
    except (KeyError, IndexError, TypeError, ValueError, AttributeError) as e:
        raise MalformedResponse(f"响应结构无法解码: {e}") from e
    if not isinstance(text, str):
        raise MalformedResponse("响应中缺少文本内容")
    return text, prompt_tokens, completion_tokens
