"""History-window LLM baseline: no memory, no feedback, no retry prompt.

The prompt alternates the most recent observations and actions (at most 20
pairs, oldest first) followed by the current observation and the available
actions. With no history yet it degenerates to the initial-step prompt.
"""

from __future__ import annotations

from typing import Optional

from .base import Agent
from .chat import ChatModel, ChatRequest, user_request
from .parsing import ReactOutput, parse_react
from . import prompts
from ..engine import Observation, StepResult
from ..session import Hint

HISTORY_PAIR_LIMIT = 20


class BaseAgent(Agent):
    name = "base"

    def __init__(self, chat: ChatModel, model: str, temperature: float = 0.0):
        self._chat = chat
        self._model = model
        self._temperature = temperature
        self._history: list[tuple[str, str]] = []  # (caption, action) pairs

    def begin_episode(self, room_id: str, seed: int) -> None:
        self._history = []

    def build_prompt(self, observation: Observation, hint: Optional[Hint]) -> ChatRequest:
        if not self._history:
            prompt = prompts.react_initial_prompt(
                observation.direction, observation.caption, observation.available_actions
            )
        else:
            window = self._history[-HISTORY_PAIR_LIMIT:]
            lines = []
            for caption, action in window:
                lines.append(f"Observation: {caption}")
                lines.append(f"Action: {action}")
            prompt = prompts.base_step_prompt(
                history="\n".join(lines),
                direction=observation.direction,
                scene_desc=observation.caption,
                actions=observation.available_actions,
                puzzle_mode=observation.puzzle_mode,
                hint=hint,
            )
        return user_request(self._model, prompt, self._temperature)

    def decide(self, observation: Observation, hint: Optional[Hint]) -> str:
        request = self.build_prompt(observation, hint)
        for _ in range(2):
            parsed = parse_react(self._chat.send(request).text)
            if isinstance(parsed, ReactOutput):
                return parsed.action
        return observation.available_actions[0]

    def observe(self, observation: Observation, action: str, result: StepResult) -> Optional[str]:
        self._history.append((observation.caption, action))
        return None
