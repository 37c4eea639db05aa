"""Structured agent memory: spatial map, exploration sets, and free notes.

The wire format is four bracketed sections ([SPATIAL MEMORY], [INSPECTED
OBJECTS], [UNINSPECTED OBJECTS], [ADDITIONAL MEMORY]) with JSON-ish bodies.
parse_memory keeps every section it can read and reports the rest; a text
with no recognizable section at all raises MalformedMemory.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import prompts
from .chat import ChatModel, user_request
from .parsing import split_sections

logger = logging.getLogger(__name__)

MEMORY_SECTIONS = ("SPATIAL MEMORY", "INSPECTED OBJECTS", "UNINSPECTED OBJECTS", "ADDITIONAL MEMORY")


class MalformedMemory(Exception):
    """No memory section header could be found in the model output."""


@dataclass
class AgentMemory:
    """Three memory stores plus free-form notes."""

    spatial: dict[str, list[str]] = field(default_factory=dict)  # direction -> object ids
    inspected: dict[str, dict[str, str]] = field(default_factory=dict)  # object -> notes
    uninspected: list[str] = field(default_factory=list)
    additional: list[str] = field(default_factory=list)

    def copy(self) -> "AgentMemory":
        return AgentMemory(
            spatial={d: list(objs) for d, objs in self.spatial.items()},
            inspected={o: dict(notes) for o, notes in self.inspected.items()},
            uninspected=list(self.uninspected),
            additional=list(self.additional),
        )


def serialize_memory(memory: AgentMemory, *, include_exploration: bool = True) -> str:
    """Render memory in the section format parse_memory reads back verbatim."""
    spatial = {d: {"objects": list(objs)} for d, objs in memory.spatial.items()}
    inspected = [{obj: dict(notes)} for obj, notes in memory.inspected.items()]
    lines = [f"[SPATIAL MEMORY] {json.dumps(spatial, ensure_ascii=False)}"]
    if include_exploration:
        lines.append(f"[INSPECTED OBJECTS] {json.dumps(inspected, ensure_ascii=False)}")
        lines.append(f"[UNINSPECTED OBJECTS] {json.dumps(list(memory.uninspected), ensure_ascii=False)}")
    lines.append(f"[ADDITIONAL MEMORY] {json.dumps(list(memory.additional), ensure_ascii=False)}")
    return "\n".join(lines)


_FENCE = re.compile(r"```[a-zA-Z]*")
_NUMBERED = re.compile(r"\b\d+\.\s*")


def _json_body(raw: str):
    """Best-effort JSON extraction: strip fences/prose around the first JSON value."""
    cleaned = _FENCE.sub("", raw).strip()
    for opener, closer in (("{", "}"), ("[", "]")):
        start = cleaned.find(opener)
        end = cleaned.rfind(closer)
        if start != -1 and end > start:
            try:
                return json.loads(cleaned[start : end + 1])
            except json.JSONDecodeError:
                continue
    try:
        return json.loads(cleaned)
    except json.JSONDecodeError:
        return None


def _parse_spatial(raw: str) -> Optional[dict[str, list[str]]]:
    body = _json_body(raw)
    if not isinstance(body, dict):
        return None
    spatial: dict[str, list[str]] = {}
    for direction, value in body.items():
        if isinstance(value, dict):
            objs = value.get("objects", [])
        elif isinstance(value, list):
            objs = value
        else:
            objs = [value]
        spatial[str(direction)] = [str(o) for o in objs]
    return spatial


def _parse_inspected(raw: str) -> Optional[dict[str, dict[str, str]]]:
    body = _json_body(raw)
    inspected: dict[str, dict[str, str]] = {}
    entries: Iterable
    if isinstance(body, dict):
        entries = [body]
    elif isinstance(body, list):
        entries = body
    else:
        return None
    for entry in entries:
        if isinstance(entry, str):
            inspected.setdefault(entry, {})
            continue
        if not isinstance(entry, dict):
            continue
        for obj, notes in entry.items():
            if isinstance(notes, dict):
                inspected[str(obj)] = {str(k): str(v) for k, v in notes.items()}
            else:
                inspected[str(obj)] = {"notes": str(notes)}
    return inspected


def _parse_string_list(raw: str) -> Optional[list[str]]:
    body = _json_body(raw)
    if isinstance(body, list):
        return [str(x) for x in body]
    text = _FENCE.sub("", raw).strip().strip("[]").strip()
    if not text:
        return []
    if _NUMBERED.search(text):
        parts = [p.strip(" ,") for p in _NUMBERED.split(text)]
        return [p for p in parts if p]
    return [p.strip().strip("\"'") for p in text.split(",") if p.strip()]


def parse_memory(text: str) -> tuple[AgentMemory, list[str]]:
    """Extract the four sections; returns (memory, missing-section names)."""
    sections = split_sections(text or "", MEMORY_SECTIONS)
    if not sections:
        raise MalformedMemory("no memory section headers found")
    memory = AgentMemory()
    missing: list[str] = []

    raw = sections.get("SPATIAL MEMORY")
    spatial = _parse_spatial(raw) if raw is not None else None
    if spatial is None:
        missing.append("SPATIAL MEMORY")
    else:
        memory.spatial = spatial

    raw = sections.get("INSPECTED OBJECTS")
    inspected = _parse_inspected(raw) if raw is not None else None
    if inspected is None:
        missing.append("INSPECTED OBJECTS")
    else:
        memory.inspected = inspected

    raw = sections.get("UNINSPECTED OBJECTS")
    uninspected = _parse_string_list(raw) if raw is not None else None
    if uninspected is None:
        missing.append("UNINSPECTED OBJECTS")
    else:
        memory.uninspected = uninspected

    raw = sections.get("ADDITIONAL MEMORY")
    additional = _parse_string_list(raw) if raw is not None else None
    if additional is None:
        missing.append("ADDITIONAL MEMORY")
    else:
        memory.additional = additional

    return memory, missing


def reconcile(memory: AgentMemory, inspected_ids: Iterable[str]) -> AgentMemory:
    """Enforce the exploration invariants after a parse.

    Objects the logs show were actually inspected move to the inspected set;
    the two sets are made disjoint (inspected wins); spatial objects missing
    from both are appended to uninspected.
    """
    out = memory.copy()
    for obj in inspected_ids:
        out.inspected.setdefault(obj, {})
    out.uninspected = [o for o in dict.fromkeys(out.uninspected) if o not in out.inspected]
    for objs in out.spatial.values():
        for obj in objs:
            if obj not in out.inspected and obj not in out.uninspected:
                out.uninspected.append(obj)
    return out


_INSPECT_ACTION = re.compile(r"^inspect\s+(.+)$")


def inspected_from_logs(logs: Sequence[dict]) -> list[str]:
    ids = []
    for log in logs:
        m = _INSPECT_ACTION.match(str(log.get("action", "")).strip())
        if m:
            ids.append(m.group(1).strip())
    return list(dict.fromkeys(ids))


class MemoryModule:
    """LLM-backed construction and refresh of the structured memory."""

    def __init__(self, chat: ChatModel, model: str, temperature: float = 0.0):
        self._chat = chat
        self._model = model
        self._temperature = temperature

    def _ask(self, prompt: str, logs: Sequence[dict]) -> AgentMemory:
        """One call plus one retry on malformed output, then reconciliation."""
        last_error: Optional[Exception] = None
        for _ in range(2):
            response = self._chat.send(user_request(self._model, prompt, self._temperature))
            try:
                memory, missing = parse_memory(response.text)
            except MalformedMemory as exc:
                last_error = exc
                continue
            if missing:
                logger.warning("memory output missing sections: %s", ", ".join(missing))
            return reconcile(memory, inspected_from_logs(logs))
        raise MalformedMemory(str(last_error))

    def construct(self, logs: Sequence[dict]) -> AgentMemory:
        return self._ask(prompts.memory_construct_prompt(logs), logs)

    def update(self, memory: AgentMemory, logs: Sequence[dict]) -> AgentMemory:
        prompt = prompts.memory_update_prompt(serialize_memory(memory), logs)
        return self._ask(prompt, logs)
