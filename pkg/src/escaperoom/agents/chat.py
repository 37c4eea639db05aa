"""HTTP chat-completion client.

Speaks the de-facto chat-completion schema (POST /chat/completions with a
messages array) so any compatible endpoint — hosted or local — plugs in via
one base URL. Credentials come from an environment variable. Transport
errors and rate limits are retried with exponential backoff; every call is
logged with a prompt hash, latency, and token usage.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

import httpx

from .base import AgentError

logger = logging.getLogger(__name__)

DEFAULT_API_KEY_ENV = "ESCAPEROOM_API_KEY"


class ChatError(AgentError):
    """Base class for chat transport failures."""


class TransportError(ChatError):
    pass


class AuthError(ChatError):
    pass


class RequestTimeout(ChatError):
    pass


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_tokens: Optional[int] = None

    def prompt_hash(self) -> str:
        h = hashlib.sha256()
        for m in self.messages:
            h.update(m.role.encode())
            h.update(b"\x00")
            h.update(m.content.encode())
            h.update(b"\x00")
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency_ms: int = 0


def user_request(model: str, prompt: str, temperature: float = 0.0) -> ChatRequest:
    return ChatRequest(model=model, messages=(ChatMessage("user", prompt),), temperature=temperature)


class ChatModel(Protocol):
    def send(self, request: ChatRequest) -> ChatResponse: ...


class HttpChatClient:
    """Chat-completion client with bounded retries.

    Retries transport errors, timeouts, 429s, and 5xx responses up to
    max_retries with exponential backoff (honoring a numeric Retry-After).
    401/403 raise AuthError immediately. Safe for concurrent send() calls;
    retry state is per call.
    """

    def __init__(
        self,
        base_url: str,
        *,
        api_key: Optional[str] = None,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        timeout: float = 60.0,
        max_retries: int = 4,
        backoff_base: float = 0.5,
        backoff_cap: float = 8.0,
        transport: Optional[httpx.BaseTransport] = None,
        sleep: Callable[[float], None] = time.sleep,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.backoff_cap = backoff_cap
        self._sleep = sleep
        self._clock = clock
        key = api_key if api_key is not None else os.environ.get(api_key_env, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        self._client = httpx.Client(
            base_url=base_url.rstrip("/"), timeout=timeout, headers=headers, transport=transport
        )

    def close(self) -> None:
        self._client.close()

    def send(self, request: ChatRequest) -> ChatResponse:
        payload = {
            "model": request.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
        }
        if request.max_tokens is not None:
            payload["max_tokens"] = request.max_tokens

        started = self._clock()
        last_error: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(self._backoff(attempt - 1, last_error))
            try:
                response = self._client.post("/chat/completions", json=payload)
            except httpx.TimeoutException as exc:
                last_error = exc
                continue
            except httpx.TransportError as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"endpoint rejected credentials ({response.status_code})")
            if response.status_code == 429 or response.status_code >= 500:
                last_error = _HttpStatusError(response)
                continue
            if response.status_code != 200:
                raise TransportError(f"unexpected status {response.status_code}: {response.text[:200]}")
            return self._parse(request, response, started)

        if isinstance(last_error, httpx.TimeoutException):
            raise RequestTimeout(f"timed out after {self.max_retries + 1} attempts") from last_error
        raise TransportError(
            f"gave up after {self.max_retries + 1} attempts: {last_error}"
        ) from last_error

    def _backoff(self, retry_index: int, last_error: Optional[Exception]) -> float:
        if isinstance(last_error, _HttpStatusError):
            retry_after = last_error.response.headers.get("Retry-After")
            if retry_after is not None:
                try:
                    return min(float(retry_after), self.backoff_cap)
                except ValueError:
                    pass
        return min(self.backoff_base * (2**retry_index), self.backoff_cap)

    def _parse(self, request: ChatRequest, response: httpx.Response, started: float) -> ChatResponse:
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise TransportError(f"malformed completion payload: {exc}") from exc
        usage = body.get("usage") or {}
        latency_ms = int(round((self._clock() - started) * 1000))
        result = ChatResponse(
            text=text or "",
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency_ms=latency_ms,
        )
        logger.debug(
            "chat call model=%s prompt_hash=%s latency_ms=%d tokens=%d+%d",
            request.model,
            request.prompt_hash(),
            result.latency_ms,
            result.prompt_tokens,
            result.completion_tokens,
        )
        return result


class _HttpStatusError(Exception):
    def __init__(self, response: httpx.Response):
        self.response = response
        super().__init__(f"status {response.status_code}")
