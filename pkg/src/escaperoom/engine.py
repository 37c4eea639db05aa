"""Deterministic room state machine.

All functions are pure with respect to (spec, state): apply_action returns a
fresh GameState and never mutates its inputs, so identical inputs always
yield identical results and states can be shared across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .model import Condition, InteractionRule, Lock, Receptacle, RoomSpec, DIRECTIONS, CODE_LOCK_KINDS

ANSWER_PLACEHOLDER = "<ANSWER>your answer</ANSWER>"
_ANSWER_RE = re.compile(r"<answer>(.*?)</answer>", re.IGNORECASE | re.DOTALL)

INVENTORY = "inventory"
CONSUMED = "consumed"
HIDDEN = "hidden"


class UnavailableAction(Exception):
    """Raised when an action is not applicable in the current state.

    This is the agent-retry signal, not a crash: sessions catch it and run
    the retry flow.
    """

    def __init__(self, action: str, available: tuple[str, ...]):
        self.action = action
        self.available = available
        super().__init__(f"action {action!r} is not available")


class MissingCaptionError(Exception):
    """A reachable scene has no authored caption — a room configuration bug."""

    def __init__(self, scene_key: str):
        self.scene_key = scene_key
        super().__init__(f"no caption authored for reachable scene {scene_key!r}")


@dataclass(frozen=True)
class WallView:
    direction: str


@dataclass(frozen=True)
class ReceptacleView:
    receptacle_id: str


@dataclass(frozen=True)
class ItemView:
    item_id: str
    parent_receptacle_id: str


View = Union[WallView, ReceptacleView, ItemView]


@dataclass(frozen=True)
class TurnTo:
    direction: str


@dataclass(frozen=True)
class Inspect:
    object_id: str


@dataclass(frozen=True)
class Back:
    pass


@dataclass(frozen=True)
class Interact:
    verb_phrase: str


@dataclass(frozen=True)
class Answer:
    code: str


Action = Union[TurnTo, Inspect, Back, Interact, Answer]


@dataclass(frozen=True)
class GameState:
    """Mutable episode state, represented immutably; engine copies on write."""

    view: View
    receptacle_states: dict[str, str]
    item_locations: dict[str, str]  # receptacle id | inventory | consumed | hidden
    solved_locks: tuple[str, ...]
    achieved_checkpoints: tuple[str, ...]
    step_count: int
    escaped: bool

    @property
    def inventory(self) -> tuple[str, ...]:
        return tuple(i for i, loc in self.item_locations.items() if loc == INVENTORY)

    def key(self) -> tuple:
        """Hashable identity ignoring step_count and checkpoint bookkeeping."""
        return (
            self.view,
            tuple(sorted(self.receptacle_states.items())),
            tuple(sorted(self.item_locations.items())),
            frozenset(self.solved_locks),
            self.escaped,
        )


@dataclass(frozen=True)
class GameEvent:
    kind: str  # state_changed | item_revealed | item_acquired | item_consumed | lock_opened | wrong_answer | escaped | agent_failure
    target: str = ""

    def __str__(self) -> str:
        return f"{self.kind}:{self.target}" if self.target else self.kind


@dataclass(frozen=True)
class Observation:
    """What the agent sees at one step."""

    scene_key: str
    caption: str
    direction: str
    available_actions: tuple[str, ...]
    inventory_captions: tuple[str, ...]
    image_ref: Optional[str] = None

    @property
    def puzzle_mode(self) -> bool:
        return ANSWER_PLACEHOLDER in self.available_actions


@dataclass(frozen=True)
class Transition:
    """A state change without its rendered observation (captions not required)."""

    new_state: GameState
    events: tuple[GameEvent, ...]
    newly_achieved_checkpoints: tuple[str, ...]


@dataclass(frozen=True)
class StepResult:
    new_state: GameState
    observation: Observation
    events: tuple[GameEvent, ...]
    newly_achieved_checkpoints: tuple[str, ...]


def initial_state(spec: RoomSpec) -> GameState:
    """North wall view, declared initial receptacle states, empty inventory."""
    locations = {}
    for item in spec.items:
        locations[item.id] = HIDDEN if item.initial_location is None else item.initial_location.receptacle
    return GameState(
        view=WallView("north"),
        receptacle_states={r.id: r.initial_state for r in spec.receptacles},
        item_locations=locations,
        solved_locks=(),
        achieved_checkpoints=(),
        step_count=0,
        escaped=False,
    )


def visible_items(spec: RoomSpec, state: GameState, rid: str) -> tuple[str, ...]:
    """Items currently visible in a receptacle: listed for its state and still located there."""
    r = spec.receptacle(rid)
    listed = r.contained_items.get(state.receptacle_states[rid], ())
    return tuple(i for i in listed if state.item_locations.get(i) == rid)


def view_direction(spec: RoomSpec, view: View) -> str:
    """The wall a view belongs to (an item view inherits its receptacle's wall)."""
    if isinstance(view, WallView):
        return view.direction
    if isinstance(view, ReceptacleView):
        return spec.receptacle(view.receptacle_id).wall
    return spec.receptacle(view.parent_receptacle_id).wall


def scene_key(spec: RoomSpec, state: GameState) -> str:
    """Canonical scene identity: view focus plus the facts visible in that view."""
    view = state.view
    if isinstance(view, WallView):
        facts = ",".join(f"{rid}={state.receptacle_states[rid]}" for rid in spec.walls[view.direction])
        return f"wall:{view.direction}|{facts}"
    if isinstance(view, ReceptacleView):
        rid = view.receptacle_id
        items = "+".join(visible_items(spec, state, rid))
        return f"recep:{rid}|{state.receptacle_states[rid]}|{items}"
    return f"item:{view.item_id}"


def _condition_holds(cond: Condition, state: GameState) -> bool:
    if cond.kind == "state":
        return state.receptacle_states.get(cond.receptacle) == cond.state
    if cond.kind == "lock_solved":
        return cond.lock in state.solved_locks
    if cond.kind == "lock_unsolved":
        return cond.lock not in state.solved_locks
    if cond.kind == "item_acquired":
        return state.item_locations.get(cond.item) in (INVENTORY, CONSUMED)
    if cond.kind == "escaped":
        return state.escaped
    raise ValueError(f"unknown condition kind {cond.kind!r}")


def checkpoint_holds(spec: RoomSpec, state: GameState, checkpoint_id: str) -> bool:
    cp = next(c for c in spec.checkpoints if c.id == checkpoint_id)
    return _condition_holds(cp.condition, state)


def _rule_available(spec: RoomSpec, state: GameState, rule: InteractionRule, focus: str) -> bool:
    if rule.required_view != focus:
        return False
    inventory = set(state.inventory)
    if not set(rule.required_items) <= inventory:
        return False
    if not all(_condition_holds(c, state) for c in rule.precondition):
        return False
    # A grant is only offered while its item is visible somewhere in this view.
    for eff in rule.effects:
        if eff.kind == "give_item" and not _item_visible_here(spec, state, eff.item):
            return False
    return True


def _item_visible_here(spec: RoomSpec, state: GameState, item_id: str) -> bool:
    loc = state.item_locations.get(item_id)
    if loc in (INVENTORY, CONSUMED, HIDDEN, None):
        return False
    return item_id in visible_items(spec, state, loc)


def _focused_code_lock(spec: RoomSpec, state: GameState) -> Optional[Lock]:
    """The unsolved code lock the player is facing, if any."""
    if not isinstance(state.view, ReceptacleView):
        return None
    lock = spec.lock_on(state.view.receptacle_id)
    if lock is None or lock.kind not in CODE_LOCK_KINDS or lock.id in state.solved_locks:
        return None
    return lock


def available_actions(spec: RoomSpec, state: GameState) -> tuple[Action, ...]:
    """Deterministically ordered: navigation, inspect, interactions, answer."""
    if state.escaped:
        return ()
    view = state.view
    actions: list[Action] = []
    if isinstance(view, WallView):
        actions.extend(TurnTo(d) for d in DIRECTIONS if d != view.direction)
        actions.extend(Inspect(rid) for rid in spec.walls[view.direction])
        focus = None
    else:
        actions.extend(TurnTo(d) for d in DIRECTIONS)
        actions.append(Back())
        if isinstance(view, ReceptacleView):
            actions.extend(Inspect(iid) for iid in visible_items(spec, state, view.receptacle_id))
            focus = view.receptacle_id
        else:
            focus = view.item_id
    if focus is not None:
        for r in spec.receptacles:
            for rule in r.interactions:
                if _rule_available(spec, state, rule, focus):
                    actions.append(Interact(rule.verb_phrase))
    if _focused_code_lock(spec, state) is not None:
        actions.append(Answer(""))  # placeholder affordance; any code is accepted
    return tuple(actions)


def render_action(action: Action) -> str:
    """Canonical action string grammar (lowercase, bit-exact)."""
    if isinstance(action, TurnTo):
        return f"turn_to_{action.direction}"
    if isinstance(action, Inspect):
        return f"inspect {action.object_id}"
    if isinstance(action, Back):
        return "back"
    if isinstance(action, Interact):
        return action.verb_phrase
    if isinstance(action, Answer):
        return f"<ANSWER>{action.code}</ANSWER>" if action.code else ANSWER_PLACEHOLDER
    raise TypeError(f"not an action: {action!r}")


def parse_action(text: str) -> Action:
    """Parse one canonical action string; unknown phrases parse as Interact."""
    s = text.strip()
    m = _ANSWER_RE.search(s)
    if m:
        return Answer(m.group(1).strip())
    s = s.lower()
    if s == "back":
        return Back()
    if s.startswith("turn_to_"):
        return TurnTo(s.removeprefix("turn_to_"))
    if s.startswith("inspect "):
        return Inspect(s.removeprefix("inspect ").strip())
    return Interact(s)


def action_strings(spec: RoomSpec, state: GameState) -> tuple[str, ...]:
    return tuple(render_action(a) for a in available_actions(spec, state))


def _is_available(spec: RoomSpec, state: GameState, action: Action) -> bool:
    if isinstance(action, Answer):
        return _focused_code_lock(spec, state) is not None
    rendered = render_action(action)
    return any(render_action(a) == rendered for a in available_actions(spec, state))


def _normalize_code(code: str) -> str:
    return code.strip().casefold()


def apply_action(spec: RoomSpec, state: GameState, action: Action) -> StepResult:
    """Apply one action and render the resulting observation.

    Raises UnavailableAction when the action is not applicable (any code is
    accepted for a faced lock). Every applied action costs one step, wrong
    answers included.
    """
    t = transition(spec, state, action)
    return StepResult(
        new_state=t.new_state,
        observation=render_observation(spec, t.new_state),
        events=t.events,
        newly_achieved_checkpoints=t.newly_achieved_checkpoints,
    )


def transition(spec: RoomSpec, state: GameState, action: Action) -> Transition:
    """Apply one action; effects may touch receptacles on other walls."""
    if not _is_available(spec, state, action):
        raise UnavailableAction(render_action(action), action_strings(spec, state))

    view = state.view
    receptacle_states = dict(state.receptacle_states)
    item_locations = dict(state.item_locations)
    solved = list(state.solved_locks)
    escaped = state.escaped
    events: list[GameEvent] = []

    if isinstance(action, TurnTo):
        view = WallView(action.direction)
    elif isinstance(action, Back):
        if isinstance(view, ItemView):
            view = ReceptacleView(view.parent_receptacle_id)
        else:
            view = WallView(spec.receptacle(view.receptacle_id).wall)
    elif isinstance(action, Inspect):
        if isinstance(view, WallView):
            view = ReceptacleView(action.object_id)
        else:
            view = ItemView(action.object_id, view.receptacle_id)
    elif isinstance(action, Answer):
        lock = _focused_code_lock(spec, state)
        if _normalize_code(action.code) == _normalize_code(lock.answer):
            solved.append(lock.id)
            events.append(GameEvent("lock_opened", lock.id))
        else:
            events.append(GameEvent("wrong_answer", lock.id))
    else:
        rule = _find_rule(spec, state, action.verb_phrase)
        for eff in rule.effects:
            if eff.kind == "set_state":
                old = receptacle_states[eff.receptacle]
                if old != eff.state:
                    receptacle_states[eff.receptacle] = eff.state
                    events.append(GameEvent("state_changed", f"{eff.receptacle}={eff.state}"))
            elif eff.kind == "reveal_item":
                if item_locations[eff.item] == HIDDEN:
                    item_locations[eff.item] = eff.receptacle
                    events.append(GameEvent("item_revealed", eff.item))
            elif eff.kind == "give_item":
                item_locations[eff.item] = INVENTORY
                events.append(GameEvent("item_acquired", eff.item))
            elif eff.kind == "consume_item":
                item_locations[eff.item] = CONSUMED
                events.append(GameEvent("item_consumed", eff.item))
            elif eff.kind == "solve_lock":
                if eff.lock not in solved:
                    solved.append(eff.lock)
                    events.append(GameEvent("lock_opened", eff.lock))
            elif eff.kind == "mark_escape":
                escaped = True
                events.append(GameEvent("escaped"))

    new_state = GameState(
        view=view,
        receptacle_states=receptacle_states,
        item_locations=item_locations,
        solved_locks=tuple(solved),
        achieved_checkpoints=state.achieved_checkpoints,
        step_count=state.step_count + 1,
        escaped=escaped,
    )
    new_state = _normalize_view(spec, new_state)

    newly = tuple(
        cp.id
        for cp in spec.checkpoints
        if cp.id not in state.achieved_checkpoints and _condition_holds(cp.condition, new_state)
    )
    if newly:
        new_state = GameState(
            view=new_state.view,
            receptacle_states=new_state.receptacle_states,
            item_locations=new_state.item_locations,
            solved_locks=new_state.solved_locks,
            achieved_checkpoints=state.achieved_checkpoints + newly,
            step_count=new_state.step_count,
            escaped=new_state.escaped,
        )

    return Transition(
        new_state=new_state,
        events=tuple(events),
        newly_achieved_checkpoints=newly,
    )


def _normalize_view(spec: RoomSpec, state: GameState) -> GameState:
    """Ascend from an item view whose item is no longer visible there."""
    view = state.view
    if isinstance(view, ItemView) and not (
        state.item_locations.get(view.item_id) == view.parent_receptacle_id
        and view.item_id in visible_items(spec, state, view.parent_receptacle_id)
    ):
        return GameState(
            view=ReceptacleView(view.parent_receptacle_id),
            receptacle_states=state.receptacle_states,
            item_locations=state.item_locations,
            solved_locks=state.solved_locks,
            achieved_checkpoints=state.achieved_checkpoints,
            step_count=state.step_count,
            escaped=state.escaped,
        )
    return state


def _find_rule(spec: RoomSpec, state: GameState, verb_phrase: str) -> InteractionRule:
    view = state.view
    focus = view.receptacle_id if isinstance(view, ReceptacleView) else view.item_id
    for r in spec.receptacles:
        for rule in r.interactions:
            if rule.verb_phrase == verb_phrase and _rule_available(spec, state, rule, focus):
                return rule
    raise UnavailableAction(verb_phrase, action_strings(spec, state))


def render_observation(spec: RoomSpec, state: GameState) -> Observation:
    """Look up the authored caption for the current scene; purely a function of state."""
    key = scene_key(spec, state)
    scene = spec.scenes.get(key)
    if scene is None:
        raise MissingCaptionError(key)
    inventory_captions = tuple(
        f"{iid.replace('_', ' ')}: {spec.item(iid).caption}" for iid in state.inventory
    )
    return Observation(
        scene_key=key,
        caption=scene.caption,
        direction=view_direction(spec, state.view),
        available_actions=action_strings(spec, state),
        inventory_captions=inventory_captions,
        image_ref=scene.image_ref,
    )


def apply_action_string(spec: RoomSpec, state: GameState, text: str) -> StepResult:
    return apply_action(spec, state, parse_action(text))
