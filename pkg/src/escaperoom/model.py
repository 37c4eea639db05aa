"""Declarative room definitions: types, JSON loading, and serialization.

A room file is a single JSON document (format_version 1) with explicit ids.
See docs/room-format.md for the schema. Loaded specs are immutable by
convention and safe to share across concurrent sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DIRECTIONS = ("north", "east", "south", "west")

LOCK_KINDS = ("numeric_code", "letter_code", "key_item", "mechanism")
CODE_LOCK_KINDS = ("numeric_code", "letter_code")

CONDITION_KINDS = ("state", "lock_solved", "lock_unsolved")
CHECKPOINT_CONDITION_KINDS = ("state", "lock_solved", "item_acquired", "escaped")
EFFECT_KINDS = (
    "set_state",
    "reveal_item",
    "give_item",
    "consume_item",
    "solve_lock",
    "mark_escape",
)

FORMAT_VERSION = 1


class RoomFormatError(ValueError):
    """Structurally invalid room document. Carries a field location."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class DanglingReferenceError(RoomFormatError):
    """One or more id cross-references do not resolve."""

    def __init__(self, missing: list[str]):
        self.missing = sorted(set(missing))
        super().__init__("unresolved references: " + ", ".join(self.missing))


@dataclass(frozen=True)
class Condition:
    """A single conjunct of an interaction precondition or checkpoint."""

    kind: str
    receptacle: Optional[str] = None
    state: Optional[str] = None
    lock: Optional[str] = None
    item: Optional[str] = None

    def to_dict(self) -> dict:
        return _prune(
            {
                "kind": self.kind,
                "receptacle": self.receptacle,
                "state": self.state,
                "lock": self.lock,
                "item": self.item,
            }
        )


@dataclass(frozen=True)
class Effect:
    """One step of an interaction's outcome, applied in declaration order."""

    kind: str
    receptacle: Optional[str] = None
    state: Optional[str] = None
    item: Optional[str] = None
    lock: Optional[str] = None

    def to_dict(self) -> dict:
        return _prune(
            {
                "kind": self.kind,
                "receptacle": self.receptacle,
                "state": self.state,
                "item": self.item,
                "lock": self.lock,
            }
        )


@dataclass(frozen=True)
class InteractionRule:
    """A free-form verb phrase available in one view, with gated effects."""

    verb_phrase: str
    required_view: str
    required_items: tuple[str, ...] = ()
    precondition: tuple[Condition, ...] = ()
    effects: tuple[Effect, ...] = ()

    def to_dict(self) -> dict:
        return {
            "verb_phrase": self.verb_phrase,
            "required_view": self.required_view,
            "required_items": list(self.required_items),
            "precondition": [c.to_dict() for c in self.precondition],
            "effects": [e.to_dict() for e in self.effects],
        }


@dataclass(frozen=True)
class Receptacle:
    """A fixed in-room object with named states and optional lock."""

    id: str
    wall: str
    states: tuple[str, ...]
    initial_state: str
    lock_id: Optional[str] = None
    contained_items: dict[str, tuple[str, ...]] = field(default_factory=dict)
    interactions: tuple[InteractionRule, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "wall": self.wall,
            "states": list(self.states),
            "initial_state": self.initial_state,
            "lock_id": self.lock_id,
            "contained_items": {s: list(ids) for s, ids in self.contained_items.items()},
            "interactions": [r.to_dict() for r in self.interactions],
        }


@dataclass(frozen=True)
class ItemPlacement:
    receptacle: str
    state: str


@dataclass(frozen=True)
class Item:
    """A collectible object; starts in a receptacle or hidden."""

    id: str
    caption: str
    initial_location: Optional[ItemPlacement] = None  # None means hidden

    def to_dict(self) -> dict:
        loc = (
            "hidden"
            if self.initial_location is None
            else {"receptacle": self.initial_location.receptacle, "state": self.initial_location.state}
        )
        return {"id": self.id, "caption": self.caption, "initial_location": loc}


@dataclass(frozen=True)
class Lock:
    """A code, key, or mechanism lock attached to one receptacle."""

    id: str
    kind: str
    attached_to: str
    answer: Optional[str] = None
    key_item: Optional[str] = None
    clue_scene_keys: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "attached_to": self.attached_to,
            "answer": self.answer,
            "key_item": self.key_item,
            "clue_scene_keys": list(self.clue_scene_keys),
        }


@dataclass(frozen=True)
class Checkpoint:
    """A monotone progress milestone; achievement is latched by the engine."""

    id: str
    condition: Condition
    hint_text: str

    def to_dict(self) -> dict:
        return {"id": self.id, "condition": self.condition.to_dict(), "hint_text": self.hint_text}


@dataclass(frozen=True)
class Scene:
    caption: str
    image_ref: Optional[str] = None

    def to_dict(self) -> dict:
        return _prune({"caption": self.caption, "image_ref": self.image_ref})


@dataclass(frozen=True)
class RoomSpec:
    """A fully resolved, immutable room definition."""

    room_id: str
    walls: dict[str, tuple[str, ...]]
    receptacles: tuple[Receptacle, ...]
    items: tuple[Item, ...]
    locks: tuple[Lock, ...]
    checkpoints: tuple[Checkpoint, ...]
    oracle: tuple[str, ...]
    scenes: dict[str, Scene]
    format_version: int = FORMAT_VERSION

    def receptacle(self, rid: str) -> Receptacle:
        return self._receptacles_by_id[rid]

    def item(self, iid: str) -> Item:
        return self._items_by_id[iid]

    def lock(self, lid: str) -> Lock:
        return self._locks_by_id[lid]

    def lock_on(self, rid: str) -> Optional[Lock]:
        """The lock attached to a receptacle, if any."""
        return self._locks_by_receptacle.get(rid)

    @property
    def _receptacles_by_id(self) -> dict[str, Receptacle]:
        return {r.id: r for r in self.receptacles}

    @property
    def _items_by_id(self) -> dict[str, Item]:
        return {i.id: i for i in self.items}

    @property
    def _locks_by_id(self) -> dict[str, Lock]:
        return {l.id: l for l in self.locks}

    @property
    def _locks_by_receptacle(self) -> dict[str, Lock]:
        return {l.attached_to: l for l in self.locks}

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "room_id": self.room_id,
            "walls": {d: list(self.walls[d]) for d in DIRECTIONS},
            "receptacles": [r.to_dict() for r in self.receptacles],
            "items": [i.to_dict() for i in self.items],
            "locks": [l.to_dict() for l in self.locks],
            "checkpoints": [c.to_dict() for c in self.checkpoints],
            "oracle": list(self.oracle),
            "scenes": {k: s.to_dict() for k, s in sorted(self.scenes.items())},
        }


def _prune(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def _require(cond: bool, message: str, location: str) -> None:
    if not cond:
        raise RoomFormatError(message, location)


def _parse_condition(raw: dict, location: str, kinds: tuple[str, ...]) -> Condition:
    _require(isinstance(raw, dict), "condition must be an object", location)
    kind = raw.get("kind")
    _require(kind in kinds, f"unknown condition kind {kind!r}", location)
    if kind == "state":
        _require("receptacle" in raw and "state" in raw, "state condition needs receptacle and state", location)
    if kind in ("lock_solved", "lock_unsolved"):
        _require("lock" in raw, f"{kind} condition needs lock", location)
    if kind == "item_acquired":
        _require("item" in raw, "item_acquired condition needs item", location)
    return Condition(
        kind=kind,
        receptacle=raw.get("receptacle"),
        state=raw.get("state"),
        lock=raw.get("lock"),
        item=raw.get("item"),
    )


def _parse_effect(raw: dict, location: str) -> Effect:
    _require(isinstance(raw, dict), "effect must be an object", location)
    kind = raw.get("kind")
    _require(kind in EFFECT_KINDS, f"unknown effect kind {kind!r}", location)
    if kind == "set_state":
        _require("receptacle" in raw and "state" in raw, "set_state needs receptacle and state", location)
    if kind in ("give_item", "consume_item"):
        _require("item" in raw, f"{kind} needs item", location)
    if kind == "reveal_item":
        _require("item" in raw and "receptacle" in raw, "reveal_item needs item and receptacle", location)
    if kind == "solve_lock":
        _require("lock" in raw, "solve_lock needs lock", location)
    return Effect(
        kind=kind,
        receptacle=raw.get("receptacle"),
        state=raw.get("state"),
        item=raw.get("item"),
        lock=raw.get("lock"),
    )


def room_from_dict(doc: dict) -> RoomSpec:
    """Build and structurally validate a RoomSpec from a parsed JSON document.

    Raises RoomFormatError on malformed fields and DanglingReferenceError
    listing every unresolved id.
    """
    _require(isinstance(doc, dict), "room document must be a JSON object", "$")
    version = doc.get("format_version")
    _require(version == FORMAT_VERSION, f"unsupported format_version {version!r}", "format_version")
    room_id = doc.get("room_id")
    _require(isinstance(room_id, str) and room_id != "", "room_id must be a non-empty string", "room_id")

    raw_walls = doc.get("walls")
    _require(isinstance(raw_walls, dict), "walls must be an object", "walls")
    _require(
        sorted(raw_walls.keys()) == sorted(DIRECTIONS),
        f"exactly the four walls {list(DIRECTIONS)} are required",
        "walls",
    )
    walls = {d: tuple(raw_walls[d]) for d in DIRECTIONS}

    receptacles = []
    for i, raw in enumerate(doc.get("receptacles", [])):
        loc = f"receptacles[{i}]"
        _require(isinstance(raw.get("id"), str), "receptacle id must be a string", loc)
        states = tuple(raw.get("states", ()))
        _require(len(states) > 0, "receptacle needs at least one state", loc)
        initial = raw.get("initial_state")
        _require(initial in states, f"initial_state {initial!r} not in states", loc)
        _require(raw.get("wall") in DIRECTIONS, f"unknown wall {raw.get('wall')!r}", loc)
        contained = {
            s: tuple(ids) for s, ids in raw.get("contained_items", {}).items()
        }
        for s in contained:
            _require(s in states, f"contained_items keyed by unknown state {s!r}", loc)
        rules = tuple(
            InteractionRule(
                verb_phrase=r["verb_phrase"],
                required_view=r["required_view"],
                required_items=tuple(r.get("required_items", ())),
                precondition=tuple(
                    _parse_condition(c, f"{loc}.interactions[{j}].precondition", CONDITION_KINDS)
                    for c in r.get("precondition", ())
                ),
                effects=tuple(
                    _parse_effect(e, f"{loc}.interactions[{j}].effects") for e in r.get("effects", ())
                ),
            )
            for j, r in enumerate(raw.get("interactions", ()))
        )
        for j, rule in enumerate(rules):
            _require(
                len(rule.effects) > 0, "interaction needs at least one effect", f"{loc}.interactions[{j}]"
            )
        receptacles.append(
            Receptacle(
                id=raw["id"],
                wall=raw["wall"],
                states=states,
                initial_state=initial,
                lock_id=raw.get("lock_id"),
                contained_items=contained,
                interactions=rules,
            )
        )

    items = []
    for i, raw in enumerate(doc.get("items", [])):
        loc = f"items[{i}]"
        _require(isinstance(raw.get("id"), str), "item id must be a string", loc)
        _require(isinstance(raw.get("caption"), str), "item caption must be a string", loc)
        raw_loc = raw.get("initial_location")
        if raw_loc == "hidden":
            placement = None
        else:
            _require(
                isinstance(raw_loc, dict) and "receptacle" in raw_loc and "state" in raw_loc,
                'initial_location must be "hidden" or {receptacle, state}',
                loc,
            )
            placement = ItemPlacement(receptacle=raw_loc["receptacle"], state=raw_loc["state"])
        items.append(Item(id=raw["id"], caption=raw["caption"], initial_location=placement))

    locks = []
    for i, raw in enumerate(doc.get("locks", [])):
        loc = f"locks[{i}]"
        kind = raw.get("kind")
        _require(kind in LOCK_KINDS, f"unknown lock kind {kind!r}", loc)
        if kind in CODE_LOCK_KINDS:
            answer = raw.get("answer")
            _require(isinstance(answer, str) and answer.strip() != "", "code lock needs a non-empty answer", loc)
        if kind == "key_item":
            _require(isinstance(raw.get("key_item"), str), "key lock needs key_item", loc)
        locks.append(
            Lock(
                id=raw["id"],
                kind=kind,
                attached_to=raw["attached_to"],
                answer=raw.get("answer"),
                key_item=raw.get("key_item"),
                clue_scene_keys=tuple(raw.get("clue_scene_keys", ())),
            )
        )

    checkpoints = []
    for i, raw in enumerate(doc.get("checkpoints", [])):
        loc = f"checkpoints[{i}]"
        _require(isinstance(raw.get("id"), str), "checkpoint id must be a string", loc)
        condition = _parse_condition(raw.get("condition"), f"{loc}.condition", CHECKPOINT_CONDITION_KINDS)
        checkpoints.append(
            Checkpoint(id=raw["id"], condition=condition, hint_text=raw.get("hint_text", ""))
        )

    scenes = {}
    for key, raw in doc.get("scenes", {}).items():
        _require(isinstance(raw, dict) and isinstance(raw.get("caption"), str), "scene needs a caption", f"scenes[{key}]")
        scenes[key] = Scene(caption=raw["caption"], image_ref=raw.get("image_ref"))

    spec = RoomSpec(
        room_id=room_id,
        walls=walls,
        receptacles=tuple(receptacles),
        items=tuple(items),
        locks=tuple(locks),
        checkpoints=tuple(checkpoints),
        oracle=tuple(doc.get("oracle", ())),
        scenes=scenes,
        format_version=version,
    )
    _check_references(spec)
    _check_lock_wiring(spec)
    return spec


def _check_references(spec: RoomSpec) -> None:
    """Collect every dangling id cross-reference and raise them together."""
    rids = {r.id for r in spec.receptacles}
    iids = {i.id for i in spec.items}
    lids = {l.id for l in spec.locks}
    missing: list[str] = []

    def check(id_: Optional[str], pool: set, label: str) -> None:
        if id_ is not None and id_ not in pool:
            missing.append(f"{label} {id_!r}")

    for d in DIRECTIONS:
        for rid in spec.walls[d]:
            check(rid, rids, "receptacle")
    for r in spec.receptacles:
        check(r.lock_id, lids, "lock")
        for ids in r.contained_items.values():
            for iid in ids:
                check(iid, iids, "item")
        for rule in r.interactions:
            check(rule.required_view, rids | iids, "object")
            for iid in rule.required_items:
                check(iid, iids, "item")
            for cond in rule.precondition:
                check(cond.receptacle, rids, "receptacle")
                check(cond.lock, lids, "lock")
            for eff in rule.effects:
                check(eff.receptacle, rids, "receptacle")
                check(eff.item, iids, "item")
                check(eff.lock, lids, "lock")
    for item in spec.items:
        if item.initial_location is not None:
            check(item.initial_location.receptacle, rids, "receptacle")
    for lock in spec.locks:
        check(lock.attached_to, rids, "receptacle")
        check(lock.key_item, iids, "item")
    for cp in spec.checkpoints:
        check(cp.condition.receptacle, rids, "receptacle")
        check(cp.condition.lock, lids, "lock")
        check(cp.condition.item, iids, "item")
    if missing:
        raise DanglingReferenceError(missing)


def _check_lock_wiring(spec: RoomSpec) -> None:
    """Locks and receptacles must agree, and every lock must gate a transition."""
    for r in spec.receptacles:
        if r.lock_id is not None:
            lock = spec.lock(r.lock_id)
            _require(
                lock.attached_to == r.id,
                f"receptacle {r.id!r} names lock {lock.id!r} which is attached to {lock.attached_to!r}",
                f"receptacles[{r.id}]",
            )
    all_rules = [rule for r in spec.receptacles for rule in r.interactions]
    for lock in spec.locks:
        holder = spec.receptacle(lock.attached_to)
        _require(
            holder.lock_id == lock.id,
            f"lock {lock.id!r} attached to {holder.id!r} but that receptacle names {holder.lock_id!r}",
            f"locks[{lock.id}]",
        )
        gated = any(
            any(c.kind == "lock_solved" and c.lock == lock.id for c in rule.precondition)
            and any(e.kind == "set_state" and e.receptacle == lock.attached_to for e in rule.effects)
            for rule in all_rules
        )
        _require(
            gated,
            f"no state transition of {lock.attached_to!r} is gated on lock {lock.id!r} being solved",
            f"locks[{lock.id}]",
        )
        # Spatial separation: clues never appear in a scene of the locked receptacle.
        for key in lock.clue_scene_keys:
            _require(
                not key.startswith(f"recep:{lock.attached_to}|"),
                f"clue scene {key!r} is a view of the locked receptacle itself",
                f"locks[{lock.id}]",
            )
    # Items placed in a receptacle must be listed among its visible contents there.
    for item in spec.items:
        if item.initial_location is None:
            continue
        r = spec.receptacle(item.initial_location.receptacle)
        _require(
            item.initial_location.state in r.states,
            f"item {item.id!r} placed in unknown state {item.initial_location.state!r} of {r.id!r}",
            f"items[{item.id}]",
        )
        listed = item.id in r.contained_items.get(item.initial_location.state, ())
        _require(
            listed,
            f"item {item.id!r} placed in {r.id!r}/{item.initial_location.state!r} but not listed in contained_items",
            f"items[{item.id}]",
        )


def load_room(path: str | Path) -> RoomSpec:
    """Load a room file; parse errors carry line/column, reference errors list every missing id."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RoomFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", str(path)
        ) from exc
    return room_from_dict(doc)


def save_room(spec: RoomSpec, path: str | Path) -> None:
    Path(path).write_text(dumps_room(spec), encoding="utf-8")


def dumps_room(spec: RoomSpec) -> str:
    return json.dumps(spec.to_dict(), indent=2, ensure_ascii=False) + "\n"
