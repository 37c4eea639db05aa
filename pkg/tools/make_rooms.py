#!/usr/bin/env python3
"""Regenerate the shipped sample rooms under rooms/.

Rooms are hand-designed here as Python data; this script enumerates every
reachable scene through the engine, composes a caption for each from the
per-room phrase tables, validates the result, and writes the JSON files.
The output is deterministic, so reruns leave committed files unchanged.

Usage: python tools/make_rooms.py [output_dir]
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from escaperoom.model import RoomSpec, Scene, room_from_dict, save_room
from escaperoom.validate import explore_reachable, validate_room


@dataclass
class CaptionTables:
    wall_intro: dict[str, str]
    recep_on_wall: dict[tuple[str, str], str]
    recep_view: dict[tuple[str, str], str]
    item_in_recep: dict[str, str]
    item_view: dict[str, str]
    item_frame: dict[str, str] = field(default_factory=dict)  # rid -> "Visible here: {items}."
    empty_text: str = "It is empty."


def compose_caption(tables: CaptionTables, spec: RoomSpec, key: str) -> str:
    kind, rest = key.split(":", 1)
    if kind == "wall":
        direction, facts = rest.split("|", 1)
        parts = [tables.wall_intro[direction]]
        for fact in facts.split(","):
            rid, state = fact.split("=")
            parts.append(tables.recep_on_wall[(rid, state)])
        return " ".join(parts)
    if kind == "recep":
        rid, state, items = rest.split("|", 2)
        text = tables.recep_view[(rid, state)]
        ids = items.split("+") if items else []
        if ids:
            listed = ", ".join(tables.item_in_recep[i] for i in ids)
            frame = tables.item_frame.get(rid, "Visible here: {items}.")
            text += " " + frame.format(items=listed)
        elif state in spec.receptacle(rid).contained_items:
            text += " " + tables.empty_text
        return text
    return tables.item_view[rest]


def build_room(doc: dict, tables: CaptionTables) -> RoomSpec:
    spec = room_from_dict(doc)
    reachable = explore_reachable(spec)
    scenes = {key: {"caption": compose_caption(tables, spec, key)} for key in reachable.scene_keys}
    doc = dict(doc)
    doc["scenes"] = scenes
    return room_from_dict(doc)


def _interaction(verb, view, effects, precondition=(), required_items=()):
    return {
        "verb_phrase": verb,
        "required_view": view,
        "required_items": list(required_items),
        "precondition": list(precondition),
        "effects": list(effects),
    }


def _state_is(rid, state):
    return {"kind": "state", "receptacle": rid, "state": state}


def _solved(lock):
    return {"kind": "lock_solved", "lock": lock}


def _set(rid, state):
    return {"kind": "set_state", "receptacle": rid, "state": state}


def _give(item):
    return {"kind": "give_item", "item": item}


# ---------------------------------------------------------------------------
# room01 "study": poster/book clue -> desk keypad -> knife -> bread -> brass
# key -> cabinet -> note clue -> door keypad -> escape.
# ---------------------------------------------------------------------------

ROOM01 = {
    "format_version": 1,
    "room_id": "room01",
    "walls": {
        "north": ["door", "poster"],
        "east": ["desk", "bookshelf"],
        "south": ["cabinet"],
        "west": ["bread"],
    },
    "receptacles": [
        {
            "id": "door",
            "wall": "north",
            "states": ["closed", "open"],
            "initial_state": "closed",
            "lock_id": "door_keypad",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "open door",
                    "door",
                    effects=[_set("door", "open"), {"kind": "mark_escape"}],
                    precondition=[_state_is("door", "closed"), _solved("door_keypad")],
                ),
            ],
        },
        {
            "id": "poster",
            "wall": "north",
            "states": ["plain"],
            "initial_state": "plain",
            "contained_items": {},
            "interactions": [],
        },
        {
            "id": "desk",
            "wall": "east",
            "states": ["closed", "open"],
            "initial_state": "closed",
            "lock_id": "drawer_keypad",
            "contained_items": {"open": ["knife", "coin"]},
            "interactions": [
                _interaction(
                    "open drawer",
                    "desk",
                    effects=[_set("desk", "open")],
                    precondition=[_state_is("desk", "closed"), _solved("drawer_keypad")],
                ),
                _interaction("take knife", "desk", [_give("knife")], [_state_is("desk", "open")]),
                _interaction("take coin", "desk", [_give("coin")], [_state_is("desk", "open")]),
            ],
        },
        {
            "id": "bookshelf",
            "wall": "east",
            "states": ["plain"],
            "initial_state": "plain",
            "contained_items": {"plain": ["book"]},
            "interactions": [
                _interaction("take book", "book", [_give("book")]),
            ],
        },
        {
            "id": "cabinet",
            "wall": "south",
            "states": ["locked", "unlocked", "open"],
            "initial_state": "locked",
            "lock_id": "cabinet_lock",
            "contained_items": {"open": ["note"]},
            "interactions": [
                _interaction(
                    "unlock cabinet with brass key",
                    "cabinet",
                    effects=[{"kind": "solve_lock", "lock": "cabinet_lock"}, _set("cabinet", "unlocked")],
                    precondition=[_state_is("cabinet", "locked")],
                    required_items=["brass_key"],
                ),
                _interaction(
                    "open cabinet",
                    "cabinet",
                    effects=[_set("cabinet", "open")],
                    precondition=[_state_is("cabinet", "unlocked"), _solved("cabinet_lock")],
                ),
                _interaction("take note", "note", [_give("note")], [_state_is("cabinet", "open")]),
            ],
        },
        {
            "id": "bread",
            "wall": "west",
            "states": ["whole", "cut"],
            "initial_state": "whole",
            "contained_items": {"cut": ["brass_key"]},
            "interactions": [
                _interaction(
                    "cut bread with knife",
                    "bread",
                    effects=[_set("bread", "cut")],
                    precondition=[_state_is("bread", "whole")],
                    required_items=["knife"],
                ),
                _interaction("take brass key", "bread", [_give("brass_key")], [_state_is("bread", "cut")]),
            ],
        },
    ],
    "items": [
        {
            "id": "book",
            "caption": "a slim reference book bound in red cloth",
            "initial_location": {"receptacle": "bookshelf", "state": "plain"},
        },
        {
            "id": "knife",
            "caption": "a small paring knife with a worn wooden handle",
            "initial_location": {"receptacle": "desk", "state": "open"},
        },
        {
            "id": "coin",
            "caption": "a heavy old coin stamped with a crown",
            "initial_location": {"receptacle": "desk", "state": "open"},
        },
        {
            "id": "brass_key",
            "caption": "a small brass key, still dusted with crumbs",
            "initial_location": {"receptacle": "bread", "state": "cut"},
        },
        {
            "id": "note",
            "caption": "a folded note in neat handwriting",
            "initial_location": {"receptacle": "cabinet", "state": "open"},
        },
    ],
    "locks": [
        {
            "id": "drawer_keypad",
            "kind": "numeric_code",
            "answer": "4815",
            "attached_to": "desk",
            "clue_scene_keys": ["recep:poster|plain|", "item:book"],
        },
        {
            "id": "door_keypad",
            "kind": "numeric_code",
            "answer": "9273",
            "attached_to": "door",
            "clue_scene_keys": ["item:note"],
        },
        {
            "id": "cabinet_lock",
            "kind": "key_item",
            "key_item": "brass_key",
            "attached_to": "cabinet",
            "clue_scene_keys": [],
        },
    ],
    "checkpoints": [
        {
            "id": "cp_drawer_lock",
            "condition": _solved("drawer_keypad"),
            "hint_text": "Find the four-digit code for the desk drawer: the poster's colored circles pair with the digits listed in the red book on the bookshelf.",
        },
        {
            "id": "cp_knife",
            "condition": {"kind": "item_acquired", "item": "knife"},
            "hint_text": "Open the desk drawer and take the paring knife.",
        },
        {
            "id": "cp_bread_cut",
            "condition": _state_is("bread", "cut"),
            "hint_text": "Use the knife on the loaf of bread on the west wall.",
        },
        {
            "id": "cp_brass_key",
            "condition": {"kind": "item_acquired", "item": "brass_key"},
            "hint_text": "Take the brass key hidden inside the cut bread.",
        },
        {
            "id": "cp_cabinet_lock",
            "condition": _solved("cabinet_lock"),
            "hint_text": "Unlock the cabinet on the south wall with the brass key.",
        },
        {
            "id": "cp_note",
            "condition": {"kind": "item_acquired", "item": "note"},
            "hint_text": "Open the cabinet and take the folded note inside.",
        },
        {
            "id": "cp_door_lock",
            "condition": _solved("door_keypad"),
            "hint_text": "Enter the code written on the note into the door keypad.",
        },
        {
            "id": "cp_escape",
            "condition": {"kind": "escaped"},
            "hint_text": "Open the door and walk out.",
        },
    ],
    "oracle": [
        "inspect poster",
        "back",
        "turn_to_east",
        "inspect bookshelf",
        "inspect book",
        "back",
        "back",
        "inspect desk",
        "<ANSWER>4815</ANSWER>",
        "open drawer",
        "take knife",
        "take coin",
        "turn_to_west",
        "inspect bread",
        "cut bread with knife",
        "take brass key",
        "turn_to_south",
        "inspect cabinet",
        "unlock cabinet with brass key",
        "open cabinet",
        "inspect note",
        "take note",
        "back",
        "turn_to_north",
        "inspect door",
        "<ANSWER>9273</ANSWER>",
        "open door",
    ],
    "scenes": {},
}

ROOM01_TABLES = CaptionTables(
    wall_intro={
        "north": "The north wall of a quiet study.",
        "east": "The east wall of the study.",
        "south": "The south wall of the study.",
        "west": "The west wall of the study.",
    },
    recep_on_wall={
        ("door", "closed"): 'A heavy steel "door" with a glowing keypad stands shut.',
        ("door", "open"): 'The steel "door" hangs wide open.',
        ("poster", "plain"): 'Beside it hangs a faded "poster" of four colored circles.',
        ("desk", "closed"): 'A wooden "desk" sits here, its drawer shut with a keypad lock.',
        ("desk", "open"): 'A wooden "desk" sits here, its drawer pulled open.',
        ("bookshelf", "plain"): 'A tall "bookshelf" leans against the wall.',
        ("cabinet", "locked"): 'A narrow "cabinet" stands here, held shut by a brass padlock.',
        ("cabinet", "unlocked"): 'A narrow "cabinet" stands here, its brass padlock hanging open.',
        ("cabinet", "open"): 'A narrow "cabinet" stands here with its doors swung open.',
        ("bread", "whole"): 'On a side table rests a whole loaf of "bread".',
        ("bread", "cut"): 'On a side table the loaf of "bread" lies split in two.',
    },
    recep_view={
        ("door", "closed"): 'Close-up of the steel "door". A keypad with worn digit buttons waits for a four-digit code.',
        ("door", "open"): 'The "door" stands open onto a bright hallway. You are free.',
        ("poster", "plain"): 'The "poster" shows four colored circles in a row: a red circle, a blue circle, a green circle, then a yellow circle. No digits anywhere.',
        ("desk", "closed"): 'The "desk" drawer is shut. A small keypad on the drawer face asks for a four-digit code.',
        ("desk", "open"): 'The "desk" drawer stands open.',
        ("bookshelf", "plain"): 'Rows of dusty spines fill the "bookshelf".',
        ("cabinet", "locked"): 'The "cabinet" is locked: a brass padlock with a keyhole holds the doors shut.',
        ("cabinet", "unlocked"): 'The padlock is off; the "cabinet" doors rest closed but unlocked.',
        ("cabinet", "open"): 'The "cabinet" doors are open.',
        ("bread", "whole"): 'A dense, uncut loaf of "bread". Something feels oddly heavy about it.',
        ("bread", "cut"): 'The "bread" has been cut cleanly in half.',
    },
    item_in_recep={
        "book": 'a slim red "book"',
        "knife": 'a paring "knife"',
        "coin": 'an old "coin"',
        "brass_key": 'a glinting "brass_key" among the crumbs',
        "note": 'a folded "note"',
    },
    item_view={
        "book": 'The red "book" lies open to a page of color keys: red means 4, blue means 8, green means 1, yellow means 5.',
        "knife": 'A small paring "knife" with a worn wooden handle, sharp enough to cut.',
        "coin": 'The old "coin" is stamped with a crown and the year 1897.',
        "brass_key": 'A small "brass_key" with a clover-shaped bow, sized for a padlock.',
        "note": 'The "note" reads, in neat handwriting: "the door answers to 9273".',
    },
    item_frame={
        "desk": "In the drawer: {items}.",
        "bookshelf": "At eye level: {items}.",
        "cabinet": "On the shelf inside: {items}.",
        "bread": "Inside the loaf: {items}.",
    },
)

# ---------------------------------------------------------------------------
# room02 "workshop": hourglass clue -> power box keypad -> main switch ->
# pegboard button opens a wall panel across the room -> nippers -> cut the
# locker chain -> keycard + photo clue -> letter code + swipe -> escape.
# ---------------------------------------------------------------------------

ROOM02 = {
    "format_version": 1,
    "room_id": "room02",
    "walls": {
        "north": ["power_box", "pegboard"],
        "east": ["locker", "hourglass"],
        "south": ["steel_door"],
        "west": ["wall_panel"],
    },
    "receptacles": [
        {
            "id": "power_box",
            "wall": "north",
            "states": ["locked", "on"],
            "initial_state": "locked",
            "lock_id": "power_keypad",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "flip main switch",
                    "power_box",
                    effects=[_set("power_box", "on")],
                    precondition=[_state_is("power_box", "locked"), _solved("power_keypad")],
                ),
            ],
        },
        {
            "id": "pegboard",
            "wall": "north",
            "states": ["plain"],
            "initial_state": "plain",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "press red button",
                    "pegboard",
                    effects=[_set("wall_panel", "open")],
                    precondition=[_state_is("power_box", "on"), _state_is("wall_panel", "shut")],
                ),
            ],
        },
        {
            "id": "locker",
            "wall": "east",
            "states": ["chained", "unchained", "open"],
            "initial_state": "chained",
            "contained_items": {"open": ["keycard", "photo", "oilcan"]},
            "interactions": [
                _interaction(
                    "cut chain with nippers",
                    "locker",
                    effects=[_set("locker", "unchained"), {"kind": "consume_item", "item": "nippers"}],
                    precondition=[_state_is("locker", "chained")],
                    required_items=["nippers"],
                ),
                _interaction(
                    "open locker", "locker", [_set("locker", "open")], [_state_is("locker", "unchained")]
                ),
                _interaction("take keycard", "locker", [_give("keycard")], [_state_is("locker", "open")]),
                _interaction("take photo", "photo", [_give("photo")], [_state_is("locker", "open")]),
                _interaction("take oilcan", "locker", [_give("oilcan")], [_state_is("locker", "open")]),
            ],
        },
        {
            "id": "hourglass",
            "wall": "east",
            "states": ["upright", "flipped"],
            "initial_state": "upright",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "flip hourglass", "hourglass", [_set("hourglass", "flipped")], [_state_is("hourglass", "upright")]
                ),
                _interaction(
                    "flip hourglass", "hourglass", [_set("hourglass", "upright")], [_state_is("hourglass", "flipped")]
                ),
            ],
        },
        {
            "id": "steel_door",
            "wall": "south",
            "states": ["sealed", "unlatched", "open"],
            "initial_state": "sealed",
            "lock_id": "door_wordlock",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "swipe keycard",
                    "steel_door",
                    effects=[_set("steel_door", "unlatched")],
                    precondition=[_state_is("steel_door", "sealed"), _solved("door_wordlock")],
                    required_items=["keycard"],
                ),
                _interaction(
                    "open steel door",
                    "steel_door",
                    effects=[_set("steel_door", "open"), {"kind": "mark_escape"}],
                    precondition=[_state_is("steel_door", "unlatched")],
                ),
            ],
        },
        {
            "id": "wall_panel",
            "wall": "west",
            "states": ["shut", "open"],
            "initial_state": "shut",
            "contained_items": {"open": ["nippers", "spring"]},
            "interactions": [
                _interaction("take nippers", "wall_panel", [_give("nippers")], [_state_is("wall_panel", "open")]),
                _interaction("take spring", "wall_panel", [_give("spring")], [_state_is("wall_panel", "open")]),
            ],
        },
    ],
    "items": [
        {
            "id": "nippers",
            "caption": "a pair of long-handled nippers with hardened jaws",
            "initial_location": {"receptacle": "wall_panel", "state": "open"},
        },
        {
            "id": "spring",
            "caption": "a stiff coil spring of no obvious use",
            "initial_location": {"receptacle": "wall_panel", "state": "open"},
        },
        {
            "id": "keycard",
            "caption": "a gray keycard with a magnetic stripe",
            "initial_location": {"receptacle": "locker", "state": "open"},
        },
        {
            "id": "photo",
            "caption": "a creased photograph of a refrigerator door",
            "initial_location": {"receptacle": "locker", "state": "open"},
        },
        {
            "id": "oilcan",
            "caption": "a dented oilcan, mostly empty",
            "initial_location": {"receptacle": "locker", "state": "open"},
        },
    ],
    "locks": [
        {
            "id": "power_keypad",
            "kind": "numeric_code",
            "answer": "3842",
            "attached_to": "power_box",
            "clue_scene_keys": ["recep:hourglass|flipped|"],
        },
        {
            "id": "door_wordlock",
            "kind": "letter_code",
            "answer": "mint",
            "attached_to": "steel_door",
            "clue_scene_keys": ["item:photo"],
        },
    ],
    "checkpoints": [
        {
            "id": "cp_power_code",
            "condition": _solved("power_keypad"),
            "hint_text": "The power box takes a four-digit code. Flip the hourglass on the east wall and read the digits that settle in the sand.",
        },
        {
            "id": "cp_power_on",
            "condition": _state_is("power_box", "on"),
            "hint_text": "Flip the main switch on the power box.",
        },
        {
            "id": "cp_nippers",
            "condition": {"kind": "item_acquired", "item": "nippers"},
            "hint_text": "Press the red button on the pegboard, then collect the nippers from the wall panel that pops open on the west wall.",
        },
        {
            "id": "cp_chain_cut",
            "condition": _state_is("locker", "unchained"),
            "hint_text": "Cut the locker chain with the nippers.",
        },
        {
            "id": "cp_keycard",
            "condition": {"kind": "item_acquired", "item": "keycard"},
            "hint_text": "Open the locker and take the keycard.",
        },
        {
            "id": "cp_door_code",
            "condition": _solved("door_wordlock"),
            "hint_text": "The steel door expects a word. The photograph in the locker shows it spelled in fridge magnets.",
        },
        {
            "id": "cp_unlatched",
            "condition": _state_is("steel_door", "unlatched"),
            "hint_text": "Swipe the keycard at the steel door.",
        },
        {
            "id": "cp_escape",
            "condition": {"kind": "escaped"},
            "hint_text": "Open the steel door.",
        },
    ],
    "oracle": [
        "turn_to_east",
        "inspect hourglass",
        "flip hourglass",
        "turn_to_north",
        "inspect power_box",
        "<ANSWER>3842</ANSWER>",
        "flip main switch",
        "back",
        "inspect pegboard",
        "press red button",
        "turn_to_west",
        "inspect wall_panel",
        "take nippers",
        "turn_to_east",
        "inspect locker",
        "cut chain with nippers",
        "open locker",
        "inspect photo",
        "back",
        "take keycard",
        "turn_to_south",
        "inspect steel_door",
        "<ANSWER>mint</ANSWER>",
        "swipe keycard",
        "open steel door",
    ],
    "scenes": {},
}

ROOM02_TABLES = CaptionTables(
    wall_intro={
        "north": "The north wall of a cluttered workshop.",
        "east": "The east wall of the workshop.",
        "south": "The south wall of the workshop.",
        "west": "The west wall of the workshop.",
    },
    recep_on_wall={
        ("power_box", "locked"): 'A gray "power_box" is bolted to the wall, its cover locked behind a keypad.',
        ("power_box", "on"): 'The "power_box" hums, its main switch thrown and a green lamp lit.',
        ("pegboard", "plain"): 'A "pegboard" of hand tools hangs here with a large red button mounted at its corner.',
        ("locker", "chained"): 'A tall steel "locker" stands wrapped in heavy chain.',
        ("locker", "unchained"): 'The chain lies in pieces at the foot of the "locker".',
        ("locker", "open"): 'The "locker" door hangs open.',
        ("hourglass", "upright"): 'An oversized "hourglass" rests upright on a shelf.',
        ("hourglass", "flipped"): 'The big "hourglass" sits flipped, sand streaming down.',
        ("steel_door", "sealed"): 'A windowless "steel_door" with a letter-dial lock and a card reader seals the exit.',
        ("steel_door", "unlatched"): 'The "steel_door" reader glows green; the bolts have drawn back.',
        ("steel_door", "open"): 'The "steel_door" stands open.',
        ("wall_panel", "shut"): 'A flush "wall_panel" sits almost invisibly in the plaster.',
        ("wall_panel", "open"): 'The sprung "wall_panel" hangs open, revealing a shallow recess.',
    },
    recep_view={
        ("power_box", "locked"): 'Close-up of the "power_box": a keypad guards the cover and a dead main switch. It wants a four-digit code.',
        ("power_box", "on"): 'The "power_box" cover is open and the main switch is flipped; the workshop circuits are live.',
        ("pegboard", "plain"): 'Rows of tools on the "pegboard", all welded in place as decoration. Only the fat red button at the corner moves.',
        ("locker", "chained"): 'The "locker" is wrapped in chain too thick to snap by hand. The links could be cut with the right tool.',
        ("locker", "unchained"): 'The cut chain has fallen away; the "locker" door sits loose on its hinges.',
        ("locker", "open"): 'The "locker" stands open.',
        ("hourglass", "upright"): 'The "hourglass" sand lies settled in the bottom bulb. Faint etching on the glass is unreadable this way up.',
        ("hourglass", "flipped"): 'With the "hourglass" flipped, the falling sand exposes etched digits on the inner glass: 3 8 4 2.',
        ("steel_door", "sealed"): 'The "steel_door" has a four-letter dial lock above a card reader. Both must be satisfied to leave.',
        ("steel_door", "unlatched"): 'The card reader on the "steel_door" shows green and the handle turns freely now.',
        ("steel_door", "open"): 'The "steel_door" is open to the loading dock. You are out.',
        ("wall_panel", "shut"): 'A hairline seam outlines the "wall_panel". There is no handle and no visible hinge.',
        ("wall_panel", "open"): 'The "wall_panel" has popped open on a spring latch.',
    },
    item_in_recep={
        "nippers": 'a pair of "nippers"',
        "spring": 'a coil "spring"',
        "keycard": 'a gray "keycard"',
        "photo": 'a creased "photo"',
        "oilcan": 'a dented "oilcan"',
    },
    item_view={
        "nippers": 'Long-handled "nippers" with hardened jaws, made for cutting chain and wire.',
        "spring": 'A stiff coil "spring". Nothing in the room seems to be missing one.',
        "keycard": 'A gray "keycard" with a magnetic stripe and no markings.',
        "photo": 'The "photo" shows a refrigerator door with four magnet letters arranged in a row: M, I, N, T.',
        "oilcan": 'A dented "oilcan". A few drops slosh inside.',
    },
    item_frame={
        "locker": "Inside the locker: {items}.",
        "wall_panel": "In the recess: {items}.",
    },
)

# ---------------------------------------------------------------------------
# room03 "gallery": triptych clue -> floor safe -> crank -> statue mechanism
# opens a sealed alcove across the room -> ledger clue -> hatch word lock ->
# wheel -> escape.
# ---------------------------------------------------------------------------

ROOM03 = {
    "format_version": 1,
    "room_id": "room03",
    "walls": {
        "north": ["triptych", "alcove"],
        "east": ["floor_safe", "pedestal"],
        "south": ["exit_hatch"],
        "west": ["statue"],
    },
    "receptacles": [
        {
            "id": "triptych",
            "wall": "north",
            "states": ["plain"],
            "initial_state": "plain",
            "contained_items": {},
            "interactions": [],
        },
        {
            "id": "alcove",
            "wall": "north",
            "states": ["sealed", "open"],
            "initial_state": "sealed",
            "lock_id": "alcove_mechanism",
            "contained_items": {"open": ["ledger"]},
            "interactions": [
                _interaction("take ledger", "alcove", [_give("ledger")], [_state_is("alcove", "open")]),
            ],
        },
        {
            "id": "floor_safe",
            "wall": "east",
            "states": ["locked", "open"],
            "initial_state": "locked",
            "lock_id": "safe_dial",
            "contained_items": {"open": ["crank", "rag"]},
            "interactions": [
                _interaction(
                    "open safe",
                    "floor_safe",
                    effects=[_set("floor_safe", "open")],
                    precondition=[_state_is("floor_safe", "locked"), _solved("safe_dial")],
                ),
                _interaction("take crank", "floor_safe", [_give("crank")], [_state_is("floor_safe", "open")]),
                _interaction("take rag", "floor_safe", [_give("rag")], [_state_is("floor_safe", "open")]),
            ],
        },
        {
            "id": "pedestal",
            "wall": "east",
            "states": ["plain"],
            "initial_state": "plain",
            "contained_items": {"plain": ["gem", "matchbox"]},
            "interactions": [
                _interaction("take gem", "gem", [_give("gem")]),
                _interaction("take matchbox", "pedestal", [_give("matchbox")]),
            ],
        },
        {
            "id": "exit_hatch",
            "wall": "south",
            "states": ["sealed", "unsealed", "open"],
            "initial_state": "sealed",
            "lock_id": "hatch_wordlock",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "turn wheel",
                    "exit_hatch",
                    effects=[_set("exit_hatch", "unsealed")],
                    precondition=[_state_is("exit_hatch", "sealed"), _solved("hatch_wordlock")],
                ),
                _interaction(
                    "open hatch",
                    "exit_hatch",
                    effects=[_set("exit_hatch", "open"), {"kind": "mark_escape"}],
                    precondition=[_state_is("exit_hatch", "unsealed")],
                ),
            ],
        },
        {
            "id": "statue",
            "wall": "west",
            "states": ["plain", "cranked", "rotated"],
            "initial_state": "plain",
            "contained_items": {},
            "interactions": [
                _interaction(
                    "insert crank into statue",
                    "statue",
                    effects=[{"kind": "solve_lock", "lock": "alcove_mechanism"}, _set("statue", "cranked")],
                    precondition=[_state_is("statue", "plain")],
                    required_items=["crank"],
                ),
                _interaction(
                    "rotate statue",
                    "statue",
                    effects=[_set("statue", "rotated"), _set("alcove", "open")],
                    precondition=[_state_is("statue", "cranked"), _solved("alcove_mechanism")],
                ),
            ],
        },
    ],
    "items": [
        {
            "id": "crank",
            "caption": "an iron crank handle with a square socket end",
            "initial_location": {"receptacle": "floor_safe", "state": "open"},
        },
        {
            "id": "rag",
            "caption": "an oily rag that smells of turpentine",
            "initial_location": {"receptacle": "floor_safe", "state": "open"},
        },
        {
            "id": "gem",
            "caption": "a glass gem, pretty but worthless",
            "initial_location": {"receptacle": "pedestal", "state": "plain"},
        },
        {
            "id": "matchbox",
            "caption": "a matchbox from a hotel that closed decades ago",
            "initial_location": {"receptacle": "pedestal", "state": "plain"},
        },
        {
            "id": "ledger",
            "caption": "a worn shipping ledger with a stamped cover",
            "initial_location": {"receptacle": "alcove", "state": "open"},
        },
    ],
    "locks": [
        {
            "id": "safe_dial",
            "kind": "numeric_code",
            "answer": "7063",
            "attached_to": "floor_safe",
            "clue_scene_keys": ["recep:triptych|plain|"],
        },
        {
            "id": "hatch_wordlock",
            "kind": "letter_code",
            "answer": "acme",
            "attached_to": "exit_hatch",
            "clue_scene_keys": ["item:ledger"],
        },
        {
            "id": "alcove_mechanism",
            "kind": "mechanism",
            "attached_to": "alcove",
            "clue_scene_keys": [],
        },
    ],
    "checkpoints": [
        {
            "id": "cp_safe_code",
            "condition": _solved("safe_dial"),
            "hint_text": "The floor safe code is painted across the triptych: read the four clock faces left to right.",
        },
        {
            "id": "cp_crank",
            "condition": {"kind": "item_acquired", "item": "crank"},
            "hint_text": "Open the floor safe and take the crank handle.",
        },
        {
            "id": "cp_statue_crank",
            "condition": _state_is("statue", "cranked"),
            "hint_text": "Fit the crank into the socket on the statue's base.",
        },
        {
            "id": "cp_alcove_open",
            "condition": _state_is("alcove", "open"),
            "hint_text": "Rotate the statue; something is linked to it across the room.",
        },
        {
            "id": "cp_ledger",
            "condition": {"kind": "item_acquired", "item": "ledger"},
            "hint_text": "Take the shipping ledger from the opened alcove.",
        },
        {
            "id": "cp_hatch_code",
            "condition": _solved("hatch_wordlock"),
            "hint_text": "Enter the word stamped on the ledger into the hatch's letter lock.",
        },
        {
            "id": "cp_unsealed",
            "condition": _state_is("exit_hatch", "unsealed"),
            "hint_text": "Turn the wheel on the exit hatch.",
        },
        {
            "id": "cp_escape",
            "condition": {"kind": "escaped"},
            "hint_text": "Open the hatch and climb out.",
        },
    ],
    "oracle": [
        "inspect triptych",
        "back",
        "turn_to_east",
        "inspect floor_safe",
        "<ANSWER>7063</ANSWER>",
        "open safe",
        "take crank",
        "turn_to_west",
        "inspect statue",
        "insert crank into statue",
        "rotate statue",
        "turn_to_north",
        "inspect alcove",
        "inspect ledger",
        "back",
        "take ledger",
        "turn_to_south",
        "inspect exit_hatch",
        "<ANSWER>acme</ANSWER>",
        "turn wheel",
        "open hatch",
    ],
    "scenes": {},
}

ROOM03_TABLES = CaptionTables(
    wall_intro={
        "north": "The north wall of a small private gallery.",
        "east": "The east wall of the gallery.",
        "south": "The south wall of the gallery.",
        "west": "The west wall of the gallery.",
    },
    recep_on_wall={
        ("triptych", "plain"): 'A painted "triptych" of clock faces dominates the wall.',
        ("alcove", "sealed"): 'Beside it, a rectangular seam traces a sealed "alcove" in the plaster.',
        ("alcove", "open"): 'Beside it, the "alcove" yawns open where the plaster seam used to be.',
        ("floor_safe", "locked"): 'A squat "floor_safe" with a digit dial sits flush with the boards.',
        ("floor_safe", "open"): 'The "floor_safe" lid is raised.',
        ("pedestal", "plain"): 'A marble "pedestal" displays small curios.',
        ("exit_hatch", "sealed"): 'A round "exit_hatch" with a locking wheel and a letter dial is set into the wall.',
        ("exit_hatch", "unsealed"): 'The wheel on the "exit_hatch" has spun free; the seal is broken.',
        ("exit_hatch", "open"): 'The "exit_hatch" stands open.',
        ("statue", "plain"): 'A bronze "statue" of a dancer stands on a round base.',
        ("statue", "cranked"): 'The bronze "statue" now has an iron crank jutting from its base.',
        ("statue", "rotated"): 'The bronze "statue" faces the wall, turned a half revolution.',
    },
    recep_view={
        ("triptych", "plain"): 'The "triptych" panels each show painted clock faces. Left to right the hands read 7 o\'clock, 0, 6 o\'clock, 3 o\'clock.',
        ("alcove", "sealed"): 'The "alcove" seam is tight; no tool fits in the gap and nothing here will pry it.',
        ("alcove", "open"): 'The "alcove" is open, a shallow niche behind the plaster.',
        ("floor_safe", "locked"): 'The "floor_safe" dial waits on a four-digit code.',
        ("floor_safe", "open"): 'The "floor_safe" is open.',
        ("pedestal", "plain"): 'The marble "pedestal" has a felt top.',
        ("exit_hatch", "sealed"): 'The "exit_hatch" is sealed: a four-letter dial sits above the locking wheel.',
        ("exit_hatch", "unsealed"): 'The letter dial shows the right word and the wheel hangs loose; the "exit_hatch" only needs a push.',
        ("exit_hatch", "open"): 'The "exit_hatch" is open to the night air. You are out.',
        ("statue", "plain"): 'Under the "statue" is a round base with a square crank socket.',
        ("statue", "cranked"): 'The crank seats firmly in the "statue" base, ready to turn.',
        ("statue", "rotated"): 'The "statue" has been rotated fully; somewhere in the room something shifted.',
    },
    item_in_recep={
        "crank": 'an iron "crank"',
        "rag": 'an oily "rag"',
        "gem": 'a glass "gem"',
        "matchbox": 'an old "matchbox"',
        "ledger": 'a worn "ledger"',
    },
    item_view={
        "crank": 'An iron "crank" handle with a square socket end, heavy and cold.',
        "rag": 'An oily "rag". It smells of turpentine.',
        "gem": 'The glass "gem" throws colored light but is clearly costume junk.',
        "matchbox": 'The "matchbox" is from the Hotel Meridian; two matches rattle inside.',
        "ledger": 'The "ledger" cover is stamped over and over with the supplier name: ACME.',
    },
    item_frame={
        "floor_safe": "Inside the safe: {items}.",
        "pedestal": "On the felt: {items}.",
        "alcove": "In the niche: {items}.",
    },
)


ROOMS = [
    (ROOM01, ROOM01_TABLES),
    (ROOM02, ROOM02_TABLES),
    (ROOM03, ROOM03_TABLES),
]


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "rooms"
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for doc, tables in ROOMS:
        spec = build_room(doc, tables)
        report = validate_room(spec)
        print(report.render())
        if not report.ok:
            status = 1
            continue
        path = out_dir / f"{spec.room_id}.json"
        save_room(spec, path)
        print(f"  wrote {path}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
