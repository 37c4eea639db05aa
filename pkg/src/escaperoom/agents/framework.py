"""The modular exploration agent: Memory + Feedback + ReAct wired together.

Each module sees only what it needs: Memory digests the last N logs into
structured sections, Feedback turns each before/after caption pair into a
one-line effect analysis, and ReAct folds memory, salient actions, recent
actions, and the previous thought into the next decision.

Ablation switches: with the memory module disabled the prompt instead
enumerates every unique observation seen so far; with exploration memory
disabled the inspected/uninspected sections are omitted from the rendered
memory.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .base import Agent
from .chat import ChatModel
from .feedback import FALLBACK_ANALYSIS, FeedbackModule
from .memory import AgentMemory, MalformedMemory, MemoryModule, serialize_memory
from .parsing import render_react
from .react import ReactModule
from ..engine import Observation, StepResult
from ..session import Hint

logger = logging.getLogger(__name__)

RECENT_ACTION_WINDOW = 10


@dataclass(frozen=True)
class SalientEntry:
    action: str
    analysis: str


class ExplorerAgent(Agent):
    """Memory + Feedback + ReAct agent over a chat model."""

    name = "explorer"

    def __init__(
        self,
        chat: ChatModel,
        model: str,
        *,
        temperature: float = 0.0,
        memory_enabled: bool = True,
        exploration_memory_enabled: bool = True,
        feedback_enabled: bool = True,
        memory_refresh_interval: int = 10,
    ):
        self._react = ReactModule(chat, model, temperature)
        self._memory_module = MemoryModule(chat, model, temperature)
        self._feedback = FeedbackModule(chat, model, temperature)
        self.memory_enabled = memory_enabled
        self.exploration_memory_enabled = exploration_memory_enabled
        self.feedback_enabled = feedback_enabled
        self.memory_refresh_interval = memory_refresh_interval
        self._reset()

    def _reset(self) -> None:
        self.memory: Optional[AgentMemory] = None
        self.salient_log: list[SalientEntry] = []
        self._episode_logs: list[dict] = []  # {scene, action, analysis} per step
        self._previous_react: Optional[str] = None
        self._unique_captions: dict[str, None] = {}
        self._steps = 0

    def begin_episode(self, room_id: str, seed: int) -> None:
        self._reset()

    # -- prompt slots ------------------------------------------------------

    def memory_text(self) -> str:
        if not self.memory_enabled:
            if not self._unique_captions:
                return "(no observations yet)"
            lines = [
                f"{i}. {caption}" for i, caption in enumerate(self._unique_captions, start=1)
            ]
            return "Unique observations so far (from oldest to latest):\n" + "\n".join(lines)
        if self.memory is None:
            return "(no memory yet)"
        return serialize_memory(self.memory, include_exploration=self.exploration_memory_enabled)

    def _salient_text(self) -> str:
        if not self.salient_log:
            return "(none)"
        return "\n".join(f"{e.action} - {e.analysis}" for e in self.salient_log)

    def _recent_actions_text(self) -> str:
        actions = [log["action"] for log in self._episode_logs[-RECENT_ACTION_WINDOW:]]
        return ", ".join(actions) if actions else "(none)"

    def _previous_react_text(self) -> str:
        return self._previous_react if self._previous_react else "(none)"

    # -- agent contract ----------------------------------------------------

    def decide(self, observation: Observation, hint: Optional[Hint]) -> str:
        self._unique_captions.setdefault(observation.caption)
        if self._steps == 0:
            output = self._react.decide_initial(observation)
        else:
            output = self._react.decide(
                memory=self.memory_text(),
                salient_action_history=self._salient_text(),
                recent_actions=self._recent_actions_text(),
                observation=observation,
                previous_react=self._previous_react_text(),
                hint=hint,
            )
        self._previous_react = render_react(output)
        return output.action

    def retry(self, observation: Observation, failed_action: str, hint: Optional[Hint]) -> Optional[str]:
        return self._react.retry(
            memory=self.memory_text(),
            before_action=failed_action,
            available_actions=observation.available_actions,
            hint=hint,
        )

    def observe(self, observation: Observation, action: str, result: StepResult) -> Optional[str]:
        analysis = None
        if self.feedback_enabled:
            try:
                analysis = self._feedback.analyze(
                    observation.caption, action, result.observation.caption
                )
            except Exception:
                logger.exception("feedback analysis failed")
                analysis = FALLBACK_ANALYSIS

        self._steps += 1
        self._episode_logs.append(
            {"scene": observation.caption, "action": action, "analysis": analysis or ""}
        )
        self._unique_captions.setdefault(observation.caption)
        self._unique_captions.setdefault(result.observation.caption)

        if self._is_salient(action, result):
            self.salient_log.append(SalientEntry(action=action, analysis=analysis or ""))

        if self.memory_enabled and self._steps % self.memory_refresh_interval == 0:
            self._refresh_memory()
        return analysis

    @staticmethod
    def _is_salient(action: str, result: StepResult) -> bool:
        """Interactions, answer attempts, and anything that raised an event."""
        if action.startswith(("turn_to_", "inspect ")) or action == "back":
            return bool(result.events)
        return True

    def _refresh_memory(self) -> None:
        logs = self._episode_logs[-self.memory_refresh_interval :]
        try:
            if self.memory is None:
                self.memory = self._memory_module.construct(logs)
            else:
                self.memory = self._memory_module.update(self.memory, logs)
        except MalformedMemory:
            logger.warning("memory refresh failed twice; keeping previous memory")
