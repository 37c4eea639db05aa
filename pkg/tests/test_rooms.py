"""Room loading, validation, oracle replay, and serialization round-trips."""

from __future__ import annotations

import json

import pytest

from escaperoom.model import (
    DanglingReferenceError,
    RoomFormatError,
    dumps_room,
    load_room,
    room_from_dict,
)
from escaperoom.validate import explore_reachable, replay_oracle, validate_room

from fixtures import nonlocal_room_doc, with_auto_captions


def test_room01_shape(room01):
    assert sorted(room01.walls) == ["east", "north", "south", "west"]
    assert len(room01.receptacles) == 6
    assert len(room01.items) == 5
    assert len(room01.checkpoints) == 8
    assert len(room01.oracle) == 27


def test_all_rooms_scale(all_specs):
    assert len(all_specs) >= 3
    for spec in all_specs.values():
        assert 5 <= len(spec.receptacles) <= 6
        assert len(spec.items) == 5
        code_locks = [l for l in spec.locks if l.kind in ("numeric_code", "letter_code")]
        assert 1 <= len(code_locks) <= 2
        assert len(spec.checkpoints) == 8


def test_dangling_reference_lists_every_missing_id(room01):
    doc = json.loads(dumps_room(room01))
    doc["receptacles"][2]["lock_id"] = "L9"
    doc["locks"][0]["attached_to"] = "ghost_shelf"
    with pytest.raises(DanglingReferenceError) as exc:
        room_from_dict(doc)
    assert "'L9'" in str(exc.value)
    assert "'ghost_shelf'" in str(exc.value)


def test_empty_file_is_a_parse_error(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    with pytest.raises(RoomFormatError) as exc:
        load_room(path)
    assert "line 1" in str(exc.value)


def test_parse_error_carries_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"format_version": 1,\n  "room_id": }')
    with pytest.raises(RoomFormatError) as exc:
        load_room(path)
    assert "line 2" in str(exc.value)


def test_wrong_wall_count_rejected(room01):
    doc = json.loads(dumps_room(room01))
    del doc["walls"]["west"]
    with pytest.raises(RoomFormatError, match="four walls"):
        room_from_dict(doc)


def test_initial_state_must_be_declared(room01):
    doc = json.loads(dumps_room(room01))
    doc["receptacles"][0]["initial_state"] = "ajar"
    with pytest.raises(RoomFormatError, match="initial_state"):
        room_from_dict(doc)


def test_code_lock_requires_answer(room01):
    doc = json.loads(dumps_room(room01))
    doc["locks"][0]["answer"] = "  "
    with pytest.raises(RoomFormatError, match="answer"):
        room_from_dict(doc)


def test_lock_must_gate_a_transition(room01):
    doc = json.loads(dumps_room(room01))
    for receptacle in doc["receptacles"]:
        if receptacle["id"] == "desk":
            receptacle["interactions"][0]["precondition"] = [
                {"kind": "state", "receptacle": "desk", "state": "closed"}
            ]
    with pytest.raises(RoomFormatError, match="gated"):
        room_from_dict(doc)


def test_clue_must_not_sit_on_the_locked_receptacle(room01):
    doc = json.loads(dumps_room(room01))
    doc["locks"][0]["clue_scene_keys"] = ["recep:desk|closed|"]
    with pytest.raises(RoomFormatError, match="clue scene"):
        room_from_dict(doc)


def test_validate_room01(room01):
    report = validate_room(room01)
    assert report.ok
    assert report.oracle_ok
    assert report.oracle_length == 27
    assert report.checkpoint_count == 8
    assert report.unreachable_checkpoints == []
    assert report.missing_captions == []
    assert report.reachable_scene_count > 20


def test_validate_reports_unreachable_checkpoint():
    # The cabinet's only key is locked inside the cabinet itself.
    doc = nonlocal_room_doc()
    doc["receptacles"][0]["interactions"][0]["required_items"] = ["token"]
    doc["oracle"] = []
    spec = with_auto_captions(doc)
    report = validate_room(spec)
    assert not report.ok
    assert "cp_panel" in report.unreachable_checkpoints
    assert "cp_token" in report.unreachable_checkpoints


def test_validate_flags_zero_checkpoints():
    doc = nonlocal_room_doc()
    doc["checkpoints"] = []
    spec = with_auto_captions(doc)
    report = validate_room(spec)
    assert not report.ok
    assert any("zero checkpoints" in p for p in report.problems)


def test_replay_reports_failing_step(room01):
    doc = json.loads(dumps_room(room01))
    doc["oracle"][5] = "open sesame"
    spec = room_from_dict(doc)
    result = replay_oracle(spec)
    assert not result.success
    assert result.failure_index == 5
    assert result.failure_action == "open sesame"


def test_empty_oracle_fails_without_checkpoints(room01):
    doc = json.loads(dumps_room(room01))
    doc["oracle"] = []
    spec = room_from_dict(doc)
    result = replay_oracle(spec)
    assert not result.success
    assert result.steps == 0
    assert result.checkpoints_achieved == ()


def test_oracle_achieves_every_checkpoint_exactly_once(all_specs):
    for spec in all_specs.values():
        result = replay_oracle(spec)
        assert result.success, spec.room_id
        assert sorted(result.checkpoints_achieved) == sorted(cp.id for cp in spec.checkpoints)
        assert len(set(result.checkpoints_achieved)) == len(result.checkpoints_achieved)


def test_oracle_achieves_checkpoints_in_declared_order(all_specs):
    for spec in all_specs.values():
        result = replay_oracle(spec)
        assert list(result.checkpoints_achieved) == [cp.id for cp in spec.checkpoints]


def test_reachable_scenes_superset_of_oracle_scenes(all_specs):
    for spec in all_specs.values():
        reach = explore_reachable(spec)
        oracle_scenes = set(replay_oracle(spec).visited_scene_keys)
        assert oracle_scenes <= reach.scene_keys


def test_clue_scenes_exist_and_are_reachable(all_specs):
    for spec in all_specs.values():
        reach = explore_reachable(spec)
        for lock in spec.locks:
            for key in lock.clue_scene_keys:
                assert key in spec.scenes, (spec.room_id, key)
                assert key in reach.scene_keys, (spec.room_id, key)


def test_round_trip_load_serialize_reload(all_specs, tmp_path):
    for name, spec in all_specs.items():
        path = tmp_path / f"{name}.json"
        path.write_text(dumps_room(spec))
        again = load_room(path)
        assert again == spec
        assert dumps_room(again) == dumps_room(spec)


def test_shipped_files_match_canonical_serialization(rooms_dir, all_specs):
    # Committed room files are exactly what the serializer emits (diffable).
    for name, spec in all_specs.items():
        on_disk = (rooms_dir / f"{name}.json").read_text(encoding="utf-8")
        assert on_disk == dumps_room(spec)
