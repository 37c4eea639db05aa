"""Decision-makers: random and scripted baselines, the history-window LLM
baseline, and the modular Memory+Feedback+ReAct agent."""

from __future__ import annotations

from typing import Optional

from .base import Agent, AgentError, RandomAgent, ScriptedAgent
from .baseline import BaseAgent
from .chat import ChatModel, ChatRequest, ChatResponse, ChatMessage, HttpChatClient
from .framework import ExplorerAgent
from .memory import AgentMemory, MalformedMemory, parse_memory, serialize_memory
from .parsing import ParseFailure, ReactOutput, parse_react, render_react

AGENT_KINDS = ("random", "scripted", "base", "explorer")


def make_agent(
    kind: str,
    *,
    oracle: tuple[str, ...] = (),
    chat: Optional[ChatModel] = None,
    model: str = "",
    temperature: float = 0.0,
    memory_enabled: bool = True,
    exploration_memory_enabled: bool = True,
    feedback_enabled: bool = True,
    memory_refresh_interval: int = 10,
) -> Agent:
    if kind == "random":
        return RandomAgent()
    if kind == "scripted":
        return ScriptedAgent(oracle)
    if kind in ("base", "explorer"):
        if chat is None:
            raise ValueError(f"agent kind {kind!r} needs a chat model/endpoint")
        if kind == "base":
            return BaseAgent(chat, model, temperature)
        return ExplorerAgent(
            chat,
            model,
            temperature=temperature,
            memory_enabled=memory_enabled,
            exploration_memory_enabled=exploration_memory_enabled,
            feedback_enabled=feedback_enabled,
            memory_refresh_interval=memory_refresh_interval,
        )
    raise ValueError(f"unknown agent kind {kind!r}; expected one of {AGENT_KINDS}")


__all__ = [
    "Agent",
    "AgentError",
    "AgentMemory",
    "AGENT_KINDS",
    "BaseAgent",
    "ChatMessage",
    "ChatModel",
    "ChatRequest",
    "ChatResponse",
    "ExplorerAgent",
    "HttpChatClient",
    "MalformedMemory",
    "ParseFailure",
    "RandomAgent",
    "ReactOutput",
    "ScriptedAgent",
    "make_agent",
    "parse_memory",
    "parse_react",
    "render_react",
    "serialize_memory",
]
