"""Room certification: oracle replay and full state-space reachability.

Problems are reported, not thrown — a ValidationReport collects everything
wrong with a room so authors can fix all of it in one pass.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from . import engine
from .model import RoomSpec
from .engine import Answer, GameState


@dataclass
class ReplayResult:
    """Outcome of driving the engine through a room's oracle trajectory."""

    success: bool
    steps: int
    checkpoints_achieved: tuple[str, ...]
    visited_scene_keys: tuple[str, ...]  # pre-action scene of every step, in order
    failure_index: Optional[int] = None
    failure_action: Optional[str] = None
    failure_reason: Optional[str] = None


@dataclass
class ValidationReport:
    room_id: str
    oracle_ok: bool
    oracle_length: int
    checkpoint_count: int
    reachable_scene_count: int
    unreachable_checkpoints: list[str] = field(default_factory=list)
    missing_captions: list[str] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.oracle_ok
            and not self.unreachable_checkpoints
            and not self.missing_captions
            and not self.problems
        )

    def render(self) -> str:
        lines = [
            f"room {self.room_id}: {'OK' if self.ok else 'INVALID'}",
            f"  oracle: {'replays to escape' if self.oracle_ok else 'FAILS'} ({self.oracle_length} steps)",
            f"  checkpoints: {self.checkpoint_count}",
            f"  reachable scenes: {self.reachable_scene_count}",
        ]
        for cp in self.unreachable_checkpoints:
            lines.append(f"  unreachable checkpoint: {cp}")
        for key in self.missing_captions:
            lines.append(f"  missing caption: {key}")
        for p in self.problems:
            lines.append(f"  problem: {p}")
        return "\n".join(lines)


def replay_oracle(spec: RoomSpec) -> ReplayResult:
    """Replay the declared oracle from the initial state through the engine."""
    state = engine.initial_state(spec)
    achieved: list[str] = []
    scenes: list[str] = []
    for i, action_text in enumerate(spec.oracle):
        scenes.append(engine.scene_key(spec, state))
        try:
            result = engine.transition(spec, state, engine.parse_action(action_text))
        except engine.UnavailableAction as exc:
            return ReplayResult(
                success=False,
                steps=i,
                checkpoints_achieved=tuple(achieved),
                visited_scene_keys=tuple(scenes),
                failure_index=i,
                failure_action=action_text,
                failure_reason=str(exc),
            )
        achieved.extend(result.newly_achieved_checkpoints)
        state = result.new_state
    return ReplayResult(
        success=state.escaped,
        steps=state.step_count,
        checkpoints_achieved=tuple(achieved),
        visited_scene_keys=tuple(scenes),
        failure_reason=None if state.escaped else "oracle exhausted without escaping",
    )


@dataclass
class ReachabilityResult:
    states_visited: int
    scene_keys: set[str]
    checkpoint_witnesses: dict[str, bool]


def explore_reachable(spec: RoomSpec) -> ReachabilityResult:
    """Breadth-first search over the full state space.

    Wrong answers are skipped (they change nothing but the step counter);
    the correct code is tried whenever a lock is faced.
    """
    start = engine.initial_state(spec)
    seen = {start.key()}
    scene_keys = {engine.scene_key(spec, start)}
    witnesses = {cp.id: engine.checkpoint_holds(spec, start, cp.id) for cp in spec.checkpoints}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for action in _expansion_actions(spec, state):
            result = engine.transition(spec, state, action)
            nxt = result.new_state
            if nxt.key() in seen:
                continue
            seen.add(nxt.key())
            scene_keys.add(engine.scene_key(spec, nxt))
            for cp in spec.checkpoints:
                if not witnesses[cp.id] and engine.checkpoint_holds(spec, nxt, cp.id):
                    witnesses[cp.id] = True
            queue.append(nxt)
    return ReachabilityResult(
        states_visited=len(seen), scene_keys=scene_keys, checkpoint_witnesses=witnesses
    )


def _expansion_actions(spec: RoomSpec, state: GameState):
    for action in engine.available_actions(spec, state):
        if isinstance(action, Answer):
            lock = spec.lock_on(state.view.receptacle_id)
            yield Answer(lock.answer)
        else:
            yield action


def validate_room(spec: RoomSpec) -> ValidationReport:
    """Certify a loaded room: oracle solvability, checkpoint reachability, caption coverage."""
    replay = replay_oracle(spec)
    problems: list[str] = []

    oracle_ok = replay.success
    if not replay.success:
        problems.append(
            f"oracle failed at step {replay.failure_index} ({replay.failure_action!r}): {replay.failure_reason}"
            if replay.failure_index is not None
            else f"oracle did not escape: {replay.failure_reason}"
        )

    declared = [cp.id for cp in spec.checkpoints]
    if not declared:
        problems.append("room declares zero checkpoints; goal completion is undefined")
    if replay.success:
        if sorted(replay.checkpoints_achieved) != sorted(declared):
            missed = set(declared) - set(replay.checkpoints_achieved)
            problems.append("oracle does not achieve every checkpoint: missing " + ", ".join(sorted(missed)))
        dupes = [c for c in set(replay.checkpoints_achieved) if replay.checkpoints_achieved.count(c) > 1]
        if dupes:
            problems.append("checkpoints achieved more than once: " + ", ".join(sorted(dupes)))

    reach = explore_reachable(spec)
    unreachable = [cp for cp, hit in reach.checkpoint_witnesses.items() if not hit]
    missing = sorted(key for key in reach.scene_keys if key not in spec.scenes)

    return ValidationReport(
        room_id=spec.room_id,
        oracle_ok=oracle_ok,
        oracle_length=replay.steps if replay.success else len(spec.oracle),
        checkpoint_count=len(declared),
        reachable_scene_count=len(reach.scene_keys),
        unreachable_checkpoints=unreachable,
        missing_captions=missing,
        problems=problems,
    )
