#!/usr/bin/env python3
"""
HTTP 对话补全提供方
通过 HTTPS JSON 接口调用真实模型，限流和瞬时网络错误按指数退避重试
"""

import logging
import time
from typing import Any, Dict, Optional

import backoff
import httpx

from ..config import API_KEY_ENV, ProviderSettings
from ..errors import AuthError, MalformedResponse, ProviderError, RateLimited, TransportError
from .capture import CaptureLog
from .types import ChatProvider, ChatRequest, ChatResponse
from .wire import build_payload, decode_completion

logger = logging.getLogger(__name__)

RETRYABLE = (RateLimited, TransportError)


class HttpChatProvider(ChatProvider):
    """真实模型提供方"""

    name = "real"

    def __init__(
        self,
        settings: ProviderSettings,
        api_key: Optional[str],
        client: Optional[httpx.Client] = None,
        capture: Optional[CaptureLog] = None,
    ):
        if not api_key:
            raise AuthError(f"未设置环境变量 {API_KEY_ENV}，无法使用真实模型")
        super().__init__(max_in_flight=settings.max_in_flight, capture=capture)
        self.settings = settings
        self._api_key = api_key
        self.client = client or httpx.Client(timeout=httpx.Timeout(settings.timeout_s))

    def _headers(self) -> Dict[str, str]:
        return {
            "Authorization": f"Bearer {self._api_key}",
            "Content-Type": "application/json",
        }

    def _post(self, payload: Dict[str, Any]) -> Any:
        """发送一次请求并把 HTTP 状态映射为异常"""
        try:
            resp = self.client.post(self.settings.endpoint, json=payload, headers=self._headers())
        except httpx.TimeoutException as e:
            raise TransportError(f"请求超时: {e}") from e
        except httpx.HTTPError as e:
            raise TransportError(f"网络错误: {e}") from e

        if resp.status_code in (401, 403):
            raise AuthError(f"凭据被拒绝 (HTTP {resp.status_code})，请检查 {API_KEY_ENV}")
        if resp.status_code == 429:
            raise RateLimited("请求被限流 (HTTP 429)")
        if resp.status_code >= 500:
            raise TransportError(f"服务端错误 (HTTP {resp.status_code})")
        if resp.status_code >= 400:
            raise ProviderError(f"请求被拒绝 (HTTP {resp.status_code}): {resp.text[:200]}")

        try:
            return resp.json()
        except ValueError as e:
            raise MalformedResponse("响应不是有效的 JSON") from e

    def _log_backoff(self, details: Dict[str, Any]) -> None:
        logger.warning(
            "第 %d 次请求失败，%.2f 秒后重试: %s",
            details["tries"], details["wait"], details.get("exception"),
        )

    def _complete(self, request: ChatRequest) -> ChatResponse:
        payload = build_payload(request)
        logger.debug("发送请求: %s", payload)
        attempts = 0

        def attempt() -> Any:
            nonlocal attempts
            attempts += 1
            return self._post(payload)

        # 退避: base * 2^n 秒，加全抖动
        retrying = backoff.on_exception(
            backoff.expo,
            RETRYABLE,
            max_tries=self.settings.retry_budget + 1,
            on_backoff=self._log_backoff,
            jitter=backoff.full_jitter,
            logger=None,
            base=2,
            factor=self.settings.backoff_base_s,
        )(attempt)

        start = time.perf_counter()
        data = retrying()
        latency = time.perf_counter() - start

        text, prompt_tokens, completion_tokens = decode_completion(data)
        return ChatResponse(
            text=text,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            latency_s=latency,
            attempts=attempts,
        )

    def close(self) -> None:
        self.client.close()
