"""Action-effect analysis: compare before/after scenes and summarize the change."""

from __future__ import annotations

import re

from . import prompts
from .chat import ChatModel, user_request

FALLBACK_ANALYSIS = "no observable change"
MAX_ANALYSIS_WORDS = 20  # hard guard; the prompt itself asks for under 10

_HEADER = re.compile(r"^\s*[*_]*\[\s*ANALYSIS\s*\][*_]*:?\s*", re.IGNORECASE)


def truncate_words(text: str, limit: int = MAX_ANALYSIS_WORDS) -> str:
    words = text.split()
    return " ".join(words[:limit])


class FeedbackModule:
    """Asks the model what one action did, given the surrounding captions."""

    def __init__(self, chat: ChatModel, model: str, temperature: float = 0.0):
        self._chat = chat
        self._model = model
        self._temperature = temperature

    def analyze(self, previous_caption: str, action: str, current_caption: str) -> str:
        prompt = prompts.feedback_prompt(previous_caption, action, current_caption)
        response = self._chat.send(user_request(self._model, prompt, self._temperature))
        text = _HEADER.sub("", response.text.strip()).strip()
        if not text:
            return FALLBACK_ANALYSIS
        return truncate_words(" ".join(text.split()))
