"""Prompt construction from the versioned template files.

Templates live in templates/*.txt and use $placeholder substitution (their
bodies contain literal JSON braces, so str.format is unsuitable). Bump
TEMPLATES_VERSION whenever a template file changes so experiment records
stay auditable.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from string import Template
from typing import Optional, Sequence

from ..session import Hint

TEMPLATES_VERSION = "1"

SPATIAL_JSON_FORMAT = """{"direction 1" : {
   "objects":["object1", "object2", ...]
},
...}"""

INSPECTED_OBJECTS_JSON_FORMAT = """[{"object 1" : {
   "state":"",
   "characteristics":"",
   "additional info":""
}}, ...]"""


@lru_cache(maxsize=None)
def _template(name: str) -> Template:
    text = (
        resources.files("escaperoom.agents")
        .joinpath("templates")
        .joinpath(f"{name}.txt")
        .read_text(encoding="utf-8")
    )
    return Template(text.rstrip("\n"))


def template_text(name: str) -> str:
    return _template(name).template


def initial_preamble() -> str:
    return template_text("initial")


def render_actions(actions: Sequence[str]) -> str:
    return json.dumps(list(actions), ensure_ascii=False)


def hint_guideline_text(hint: Optional[Hint]) -> str:
    return f"Hint message: {hint.text}" if hint is not None else ""


def puzzle_text(puzzle_mode: bool) -> str:
    return template_text("puzzle") if puzzle_mode else ""


def observation_desc(direction: str, caption: str) -> tuple[str, str]:
    return direction, caption


def react_initial_prompt(direction: str, scene_desc: str, actions: Sequence[str]) -> str:
    return _template("react_initial").substitute(
        initial_prompt=initial_preamble(),
        direction=direction,
        current_scene_desc=scene_desc,
        available_actions=render_actions(actions),
    )


def react_step_prompt(
    *,
    memory: str,
    salient_action_history: str,
    action_history: str,
    direction: str,
    scene_desc: str,
    previous_react: str,
    actions: Sequence[str],
    puzzle_mode: bool,
    hint: Optional[Hint],
) -> str:
    return _template("react_step").substitute(
        initial_prompt=initial_preamble(),
        memory=memory,
        salient_action_history=salient_action_history,
        action_history=action_history,
        direction=direction,
        current_scene_desc=scene_desc,
        previous_react=previous_react,
        available_actions=render_actions(actions),
        puzzle_text=puzzle_text(puzzle_mode),
        hint_guideline_text=hint_guideline_text(hint),
    )


def react_retry_prompt(
    *, memory: str, before_action: str, actions: Sequence[str], hint: Optional[Hint]
) -> str:
    return _template("react_retry").substitute(
        initial_prompt=initial_preamble(),
        memory=memory,
        before_action=before_action,
        available_actions=render_actions(actions),
        hint_guideline_text=hint_guideline_text(hint),
    )


def base_step_prompt(
    *,
    history: str,
    direction: str,
    scene_desc: str,
    actions: Sequence[str],
    puzzle_mode: bool,
    hint: Optional[Hint],
) -> str:
    return _template("base_step").substitute(
        initial_prompt=initial_preamble(),
        history=history,
        direction=direction,
        current_scene_desc=scene_desc,
        available_actions=render_actions(actions),
        puzzle_text=puzzle_text(puzzle_mode),
        hint_guideline_text=hint_guideline_text(hint),
    )


def render_history_logs(logs: Sequence[dict]) -> str:
    """One log per turn: the observed scene, then the action with its effect analysis."""
    lines = []
    for log in logs:
        analysis = log.get("analysis") or ""
        lines.append(f"Observation: [{log['scene']}]")
        lines.append(f"Action: [{log['action']}]-{analysis}")
    return "\n".join(lines)


def memory_construct_prompt(logs: Sequence[dict]) -> str:
    return _template("memory_construct").substitute(
        initial_prompt=initial_preamble(),
        last_10_history=render_history_logs(logs),
        spatial_json_format=SPATIAL_JSON_FORMAT,
        inspected_objects_json_format=INSPECTED_OBJECTS_JSON_FORMAT,
    )


def memory_update_prompt(current_memory: str, logs: Sequence[dict]) -> str:
    return _template("memory_update").substitute(
        initial_prompt=initial_preamble(),
        current_memory=current_memory,
        last_10_history=render_history_logs(logs),
        spatial_json_format=SPATIAL_JSON_FORMAT,
        inspected_objects_json_format=INSPECTED_OBJECTS_JSON_FORMAT,
    )


def feedback_prompt(previous_scene_desc: str, previous_action: str, current_scene_desc: str) -> str:
    return _template("feedback").substitute(
        initial_prompt=initial_preamble(),
        previous_scene_desc=previous_scene_desc,
        previous_action=previous_action,
        current_scene_desc=current_scene_desc,
    )


def caption_item_prompt(item_name: str) -> str:
    return _template("caption_item").substitute(item_name=item_name)


def caption_receptacle_prompt(object_type: str, item_names: Sequence[str]) -> str:
    items_str = ", ".join(f'"{n}"' for n in item_names) if item_names else "(none)"
    return _template("caption_receptacle").substitute(object_type=object_type, items_str=items_str)


def caption_wall_prompt(object_names: Sequence[str]) -> str:
    objects = ", ".join(f'"{n}"' for n in object_names)
    return _template("caption_wall").substitute(objects=objects)
