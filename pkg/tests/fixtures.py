"""Synthetic rooms for focused engine tests."""

from __future__ import annotations

from escaperoom.model import RoomSpec, room_from_dict
from escaperoom.validate import explore_reachable


def with_auto_captions(doc: dict) -> RoomSpec:
    """Fill scenes with placeholder captions for every reachable scene."""
    spec = room_from_dict({**doc, "scenes": {}})
    reachable = explore_reachable(spec)
    scenes = {key: {"caption": f"scene for {key}"} for key in reachable.scene_keys}
    return room_from_dict({**doc, "scenes": scenes})


def nonlocal_room_doc() -> dict:
    """Pressing a button on the north wall opens a panel on the south wall."""
    return {
        "format_version": 1,
        "room_id": "fixture_nonlocal",
        "walls": {"north": ["button"], "east": [], "south": ["panel"], "west": []},
        "receptacles": [
            {
                "id": "button",
                "wall": "north",
                "states": ["idle"],
                "initial_state": "idle",
                "contained_items": {},
                "interactions": [
                    {
                        "verb_phrase": "press button",
                        "required_view": "button",
                        "required_items": [],
                        "precondition": [{"kind": "state", "receptacle": "panel", "state": "shut"}],
                        "effects": [{"kind": "set_state", "receptacle": "panel", "state": "open"}],
                    }
                ],
            },
            {
                "id": "panel",
                "wall": "south",
                "states": ["shut", "open"],
                "initial_state": "shut",
                "contained_items": {"open": ["token"]},
                "interactions": [
                    {
                        "verb_phrase": "take token",
                        "required_view": "panel",
                        "required_items": [],
                        "precondition": [{"kind": "state", "receptacle": "panel", "state": "open"}],
                        "effects": [{"kind": "give_item", "item": "token"}],
                    },
                    {
                        "verb_phrase": "leave through panel",
                        "required_view": "panel",
                        "required_items": ["token"],
                        "precondition": [{"kind": "state", "receptacle": "panel", "state": "open"}],
                        "effects": [{"kind": "mark_escape"}],
                    },
                ],
            },
        ],
        "items": [
            {
                "id": "token",
                "caption": "a stamped token",
                "initial_location": {"receptacle": "panel", "state": "open"},
            }
        ],
        "locks": [],
        "checkpoints": [
            {
                "id": "cp_panel",
                "condition": {"kind": "state", "receptacle": "panel", "state": "open"},
                "hint_text": "Press the button on the north wall.",
            },
            {
                "id": "cp_token",
                "condition": {"kind": "item_acquired", "item": "token"},
                "hint_text": "Take the token from the panel.",
            },
            {
                "id": "cp_out",
                "condition": {"kind": "escaped"},
                "hint_text": "Leave through the panel.",
            },
        ],
        "oracle": [
            "inspect button",
            "press button",
            "turn_to_south",
            "inspect panel",
            "take token",
            "leave through panel",
        ],
        "scenes": {},
    }


def reveal_room_doc() -> dict:
    """A hidden charm is revealed into the bowl by shaking it, then consumed."""
    return {
        "format_version": 1,
        "room_id": "fixture_reveal",
        "walls": {"north": ["bowl"], "east": [], "south": ["gate"], "west": []},
        "receptacles": [
            {
                "id": "bowl",
                "wall": "north",
                "states": ["still", "shaken"],
                "initial_state": "still",
                "contained_items": {"shaken": ["charm"]},
                "interactions": [
                    {
                        "verb_phrase": "shake bowl",
                        "required_view": "bowl",
                        "required_items": [],
                        "precondition": [{"kind": "state", "receptacle": "bowl", "state": "still"}],
                        "effects": [
                            {"kind": "set_state", "receptacle": "bowl", "state": "shaken"},
                            {"kind": "reveal_item", "item": "charm", "receptacle": "bowl"},
                        ],
                    },
                    {
                        "verb_phrase": "take charm",
                        "required_view": "bowl",
                        "required_items": [],
                        "precondition": [{"kind": "state", "receptacle": "bowl", "state": "shaken"}],
                        "effects": [{"kind": "give_item", "item": "charm"}],
                    },
                ],
            },
            {
                "id": "gate",
                "wall": "south",
                "states": ["closed", "open"],
                "initial_state": "closed",
                "contained_items": {},
                "interactions": [
                    {
                        "verb_phrase": "feed charm to gate",
                        "required_view": "gate",
                        "required_items": ["charm"],
                        "precondition": [{"kind": "state", "receptacle": "gate", "state": "closed"}],
                        "effects": [
                            {"kind": "consume_item", "item": "charm"},
                            {"kind": "set_state", "receptacle": "gate", "state": "open"},
                            {"kind": "mark_escape"},
                        ],
                    }
                ],
            },
        ],
        "items": [{"id": "charm", "caption": "a silver charm", "initial_location": "hidden"}],
        "locks": [],
        "checkpoints": [
            {
                "id": "cp_charm",
                "condition": {"kind": "item_acquired", "item": "charm"},
                "hint_text": "Shake the bowl.",
            },
            {"id": "cp_out", "condition": {"kind": "escaped"}, "hint_text": "Feed the gate."},
        ],
        "oracle": [
            "inspect bowl",
            "shake bowl",
            "take charm",
            "turn_to_south",
            "inspect gate",
            "feed charm to gate",
        ],
        "scenes": {},
    }
