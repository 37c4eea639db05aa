"""Parsers for model output grammars: [THINK]/[ACTION] and <ANSWER>codes.

Parsers are total: any input yields either a value or a typed failure,
never an exception. Section headers match case-insensitively and tolerate
markdown emphasis/fences and surrounding prose, because real model outputs
drift.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

_ANSWER_RE = re.compile(r"<answer>(.*?)</answer>", re.IGNORECASE | re.DOTALL)
_FENCE_RE = re.compile(r"^```[a-zA-Z]*\s*$", re.MULTILINE)


@dataclass(frozen=True)
class ReactOutput:
    think: str
    action: str  # canonical action string; answers rendered as <ANSWER>code</ANSWER>


@dataclass(frozen=True)
class ParseFailure:
    reason: str
    text: str


def _strip_decor(s: str) -> str:
    s = _FENCE_RE.sub("", s)
    return s.strip().strip("`").strip()


def _section_pattern(name: str) -> re.Pattern:
    # Accept [NAME], **[NAME]**, [NAME]: etc.
    return re.compile(r"[*_]*\[\s*" + re.escape(name) + r"\s*\][*_]*:?", re.IGNORECASE)


def split_sections(text: str, names: tuple[str, ...]) -> dict[str, str]:
    """Split text into bracket-headed sections; absent headers are simply missing."""
    hits = []
    for name in names:
        m = _section_pattern(name).search(text)
        if m:
            hits.append((m.start(), m.end(), name.upper()))
    hits.sort()
    sections: dict[str, str] = {}
    for i, (_, body_start, name) in enumerate(hits):
        body_end = hits[i + 1][0] if i + 1 < len(hits) else len(text)
        sections[name] = text[body_start:body_end].strip()
    return sections


def extract_answer(text: str) -> Optional[str]:
    """The code inside <ANSWER>…</ANSWER>; empty payloads do not count."""
    m = _ANSWER_RE.search(text)
    if m is None:
        return None
    code = m.group(1).strip()
    return code or None


def _clean_action(raw: str) -> str:
    answer = extract_answer(raw)
    if answer is not None:
        return f"<ANSWER>{answer}</ANSWER>"
    line = ""
    for candidate in _strip_decor(raw).splitlines():
        candidate = candidate.strip().strip("\"'").strip()
        if candidate:
            line = candidate
            break
    return line.lower()


def parse_react(text: str) -> Union[ReactOutput, ParseFailure]:
    """Parse a [THINK]/[ACTION] response; an <ANSWER> tag alone also counts as an action."""
    if not isinstance(text, str) or not text.strip():
        return ParseFailure("empty output", text if isinstance(text, str) else "")
    sections = split_sections(text, ("THINK", "ACTION"))
    think = sections.get("THINK", "").strip()
    action_raw = sections.get("ACTION")
    if action_raw is None or not action_raw.strip():
        answer = extract_answer(text)
        if answer is not None:
            return ReactOutput(think=think, action=f"<ANSWER>{answer}</ANSWER>")
        return ParseFailure("no [ACTION] section found", text)
    action = _clean_action(action_raw)
    if not action:
        return ParseFailure("empty [ACTION] section", text)
    return ReactOutput(think=think, action=action)


def render_react(output: ReactOutput) -> str:
    return f"[THINK] {output.think}\n[ACTION] {output.action}"


def parse_single_action(text: str) -> Optional[str]:
    """Parse a retry-style response: a lone action, with or without an [ACTION] header."""
    if not isinstance(text, str) or not text.strip():
        return None
    sections = split_sections(text, ("ACTION",))
    raw = sections.get("ACTION", text)
    action = _clean_action(raw)
    return action or None
