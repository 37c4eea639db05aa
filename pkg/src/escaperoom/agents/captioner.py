"""Image-captioning prompt builders.

In caption-mode runs there are no images and authored scene captions are
used directly, so this module is bypassed; it exists so image-input runs can
plug a vision model in without touching the agents.
"""

from __future__ import annotations

from typing import Sequence

from . import prompts
from .chat import ChatRequest, user_request

VIEW_KINDS = ("item", "receptacle", "wall")


class Captioner:
    def __init__(self, model: str, temperature: float = 0.0):
        self._model = model
        self._temperature = temperature

    def build_prompt(
        self,
        view_kind: str,
        *,
        name: str = "",
        contained: Sequence[str] = (),
        objects: Sequence[str] = (),
    ) -> ChatRequest:
        if view_kind == "item":
            prompt = prompts.caption_item_prompt(name)
        elif view_kind == "receptacle":
            prompt = prompts.caption_receptacle_prompt(name, list(contained))
        elif view_kind == "wall":
            prompt = prompts.caption_wall_prompt(list(objects))
        else:
            raise ValueError(f"unknown view kind {view_kind!r}; expected one of {VIEW_KINDS}")
        return user_request(self._model, prompt, self._temperature)
