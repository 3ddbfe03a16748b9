"""Chat transport for the agents.

An agent turn is: system prompt + message history + tool declarations
in, and either final text or a batch of tool calls out. Everything
above this layer is transport-agnostic; HttpChatClient speaks the
common chat-completions wire shape, ScriptedChatClient replays a
canned transcript for tests.

Message dicts use the conventional keys:
    {"role": "user" | "assistant" | "tool", "content": str, ...}
Tool result messages carry "tool_call_id" naming the call they answer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import httpx

from codequiz.errors import CodequizError


class ClientError(CodequizError):
    """The chat provider failed or returned an unusable response."""


@dataclass(frozen=True)
class ToolCall:
    call_id: str
    name: str
    # JSON text exactly as the model produced it
    arguments: str


@dataclass(frozen=True)
class ChatResponse:
    """One model turn: final text or tool calls, never both."""

    text: str | None = None
    tool_calls: tuple[ToolCall, ...] = ()

    def __post_init__(self):
        if (self.text is None) == (len(self.tool_calls) == 0):
            raise ValueError("a response carries either text or tool calls")


@runtime_checkable
class ChatClient(Protocol):
    def complete(
        self,
        system_prompt: str,
        messages: list[dict],
        tools: list[dict],
    ) -> ChatResponse: ...


@dataclass
class ScriptedChatClient:
    """Replays a fixed sequence of responses; records what it was asked."""

    responses: list[ChatResponse]
    calls: list[dict] = field(default_factory=list)

    def complete(self, system_prompt, messages, tools) -> ChatResponse:
        self.calls.append(
            {
                "system_prompt": system_prompt,
                "messages": [dict(m) for m in messages],
                "tools": [t["name"] for t in tools],
            }
        )
        if not self.responses:
            raise ClientError("scripted client ran out of responses")
        return self.responses.pop(0)


class HttpChatClient:
    """Chat-completions client over HTTP.

    Sends {model, messages, tools} and reads choices[0].message. The
    api_key, when set, is passed as a bearer token.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        client: httpx.Client | None = None,
    ):
        self._endpoint = endpoint
        self._model = model
        self._api_key = api_key
        self._client = client or httpx.Client(timeout=timeout)

    def complete(self, system_prompt, messages, tools) -> ChatResponse:
        wire_messages = [{"role": "system", "content": system_prompt}]
        for message in messages:
            wire_messages.append(dict(message))
        body = {"model": self._model, "messages": wire_messages}
        if tools:
            body["tools"] = [
                {"type": "function", "function": declaration} for declaration in tools
            ]
        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        try:
            response = self._client.post(self._endpoint, json=body, headers=headers)
        except httpx.HTTPError as exc:
            raise ClientError(f"chat request failed: {exc}") from exc
        if response.status_code != 200:
            raise ClientError(
                f"chat provider returned status {response.status_code}"
            )
        return self._parse_message(response)

    @staticmethod
    def _parse_message(response: httpx.Response) -> ChatResponse:
        try:
            payload = response.json()
            message = payload["choices"][0]["message"]
        except (json.JSONDecodeError, LookupError, TypeError) as exc:
            raise ClientError(f"malformed chat response: {exc}") from exc

        raw_calls = message.get("tool_calls") or []
        if raw_calls:
            calls = []
            for raw in raw_calls:
                try:
                    calls.append(
                        ToolCall(
                            call_id=raw["id"],
                            name=raw["function"]["name"],
                            arguments=raw["function"]["arguments"],
                        )
                    )
                except (LookupError, TypeError) as exc:
                    raise ClientError(f"malformed tool call: {exc}") from exc
            return ChatResponse(tool_calls=tuple(calls))

        content = message.get("content")
        if not isinstance(content, str) or not content.strip():
            raise ClientError("chat response had neither text nor tool calls")
        return ChatResponse(text=content)
