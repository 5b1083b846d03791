"""Minimal chat-completions client with function calling.

One blocking request per call, no retries.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import requests

from .nl import NLRequest

DEFAULT_TIMEOUT = 30.0


class LLMTransportError(RuntimeError):
    pass


@dataclass
class LLMClient:
    url: str
    token: str | None = None
    model: str = "gpt-4"
    timeout: float = DEFAULT_TIMEOUT

    @classmethod
    def from_env(cls) -> "LLMClient":
        url = os.environ.get("VIZFILTER_LLM_URL")
        if not url:
            raise LLMTransportError("VIZFILTER_LLM_URL is not set")
        return cls(url, os.environ.get("VIZFILTER_LLM_TOKEN"))

    def complete(self, request: NLRequest) -> str:
        """Send ``request``; return the function arguments, or the reply text."""
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        try:
            resp = requests.post(self.url, json=request.payload(self.model), headers=headers, timeout=self.timeout)
            resp.raise_for_status()
            body = resp.json()
        except (requests.RequestException, ValueError) as e:
            raise LLMTransportError(str(e)) from e
        return extract_reply(body)


def extract_reply(body: dict) -> str:
    try:
        message = body["choices"][0]["message"]
    except (KeyError, IndexError, TypeError):
        raise LLMTransportError("response has no choices[0].message") from None
    call = message.get("function_call")
    if call and call.get("arguments") is not None:
        return call["arguments"]
    for tc in message.get("tool_calls") or []:
        fn = tc.get("function") or {}
        if fn.get("arguments") is not None:
            return fn["arguments"]
    return message.get("content") or ""
