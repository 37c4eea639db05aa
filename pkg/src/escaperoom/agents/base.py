"""Agent contract and the non-LLM baselines (random choice, scripted replay)."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from ..engine import ANSWER_PLACEHOLDER, Observation, StepResult
from ..session import Hint


class AgentError(Exception):
    """An agent could not produce a decision; sessions substitute a no-op."""


class Agent:
    """Decision-maker driven by the session loop.

    decide() returns an action string from the observation's available list
    (or an <ANSWER>code</ANSWER> when a lock is faced). retry() is invoked
    once when the chosen action was unavailable; observe() sees the applied
    step and may return an analysis string for the trajectory log.
    """

    name = "agent"

    def begin_episode(self, room_id: str, seed: int) -> None:
        pass

    def decide(self, observation: Observation, hint: Optional[Hint]) -> str:
        raise NotImplementedError

    def retry(self, observation: Observation, failed_action: str, hint: Optional[Hint]) -> Optional[str]:
        return None

    def observe(self, observation: Observation, action: str, result: StepResult) -> Optional[str]:
        return None


class RandomAgent(Agent):
    """Uniform choice over available actions; codes are random 4-digit guesses."""

    name = "random"

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)

    def begin_episode(self, room_id: str, seed: int) -> None:
        self._rng = random.Random(seed)

    def decide(self, observation: Observation, hint: Optional[Hint]) -> str:
        choice = self._rng.choice(observation.available_actions)
        if choice == ANSWER_PLACEHOLDER:
            return f"<ANSWER>{self._rng.randrange(10000):04d}</ANSWER>"
        return choice


class ScriptedAgent(Agent):
    """Replays a fixed action sequence (e.g. a room's oracle trajectory)."""

    name = "scripted"

    def __init__(self, actions: Sequence[str]):
        self._actions = list(actions)
        self._next = 0

    def begin_episode(self, room_id: str, seed: int) -> None:
        self._next = 0

    def decide(self, observation: Observation, hint: Optional[Hint]) -> str:
        if self._next >= len(self._actions):
            return observation.available_actions[0]
        action = self._actions[self._next]
        self._next += 1
        return action
