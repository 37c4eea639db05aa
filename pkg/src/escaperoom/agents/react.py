"""Think-then-act decision module with a one-shot recovery path.

Unparseable output gets one re-ask; an unavailable action gets one retry
prompt. Past that, callers fall back to the first available action.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

from . import prompts
from .chat import ChatModel, user_request
from .parsing import ParseFailure, ReactOutput, parse_react, parse_single_action
from ..engine import Observation
from ..session import Hint

logger = logging.getLogger(__name__)

FALLBACK_THINK = "(fallback)"


class ReactModule:
    def __init__(self, chat: ChatModel, model: str, temperature: float = 0.0):
        self._chat = chat
        self._model = model
        self._temperature = temperature

    def _ask(self, prompt: str) -> str:
        return self._chat.send(user_request(self._model, prompt, self._temperature)).text

    def _decide_from_prompt(self, prompt: str, observation: Observation) -> ReactOutput:
        for attempt in range(2):
            result = parse_react(self._ask(prompt))
            if isinstance(result, ReactOutput):
                return result
            logger.warning("unparseable react output (attempt %d): %s", attempt + 1, result.reason)
        return ReactOutput(think=FALLBACK_THINK, action=observation.available_actions[0])

    def decide_initial(self, observation: Observation) -> ReactOutput:
        prompt = prompts.react_initial_prompt(
            observation.direction, observation.caption, observation.available_actions
        )
        return self._decide_from_prompt(prompt, observation)

    def decide(
        self,
        *,
        memory: str,
        salient_action_history: str,
        recent_actions: str,
        observation: Observation,
        previous_react: str,
        hint: Optional[Hint],
    ) -> ReactOutput:
        prompt = prompts.react_step_prompt(
            memory=memory,
            salient_action_history=salient_action_history,
            action_history=recent_actions,
            direction=observation.direction,
            scene_desc=observation.caption,
            previous_react=previous_react,
            actions=observation.available_actions,
            puzzle_mode=observation.puzzle_mode,
            hint=hint,
        )
        return self._decide_from_prompt(prompt, observation)

    def retry(
        self,
        *,
        memory: str,
        before_action: str,
        available_actions: Sequence[str],
        hint: Optional[Hint],
    ) -> Optional[str]:
        """Ask once for a substitute action; None means no usable answer."""
        prompt = prompts.react_retry_prompt(
            memory=memory, before_action=before_action, actions=available_actions, hint=hint
        )
        return parse_single_action(self._ask(prompt))
