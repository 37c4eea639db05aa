"""State machine semantics: action availability, effects, determinism,
conservation, and observation rendering."""

from __future__ import annotations

import copy
import random

import pytest
from hypothesis import given, settings, strategies as st

from escaperoom import engine
from escaperoom.engine import (
    Answer,
    Back,
    Inspect,
    Interact,
    ItemView,
    ReceptacleView,
    TurnTo,
    UnavailableAction,
    WallView,
)
from escaperoom.validate import explore_reachable

from fixtures import nonlocal_room_doc, reveal_room_doc, with_auto_captions


@pytest.fixture(scope="module")
def nonlocal_spec():
    return with_auto_captions(nonlocal_room_doc())


@pytest.fixture(scope="module")
def reveal_spec():
    return with_auto_captions(reveal_room_doc())


def play(spec, *actions):
    state = engine.initial_state(spec)
    result = None
    for text in actions:
        result = engine.apply_action_string(spec, state, text)
        state = result.new_state
    return state, result


def test_initial_state(room01):
    state = engine.initial_state(room01)
    assert state.view == WallView("north")
    assert state.step_count == 0
    assert state.achieved_checkpoints == ()
    assert state.inventory == ()
    assert not state.escaped


def test_wall_action_order(room01):
    state, _ = play(room01, "turn_to_east")
    actions = engine.action_strings(room01, state)
    assert actions == (
        "turn_to_north",
        "turn_to_south",
        "turn_to_west",
        "inspect desk",
        "inspect bookshelf",
    )


def test_interaction_requires_held_item(room01):
    state, _ = play(room01, "turn_to_west", "inspect bread")
    assert "cut bread with knife" not in engine.action_strings(room01, state)

    # With the knife in hand the cut becomes available.
    state, _ = play(
        room01,
        "turn_to_east",
        "inspect desk",
        "<ANSWER>4815</ANSWER>",
        "open drawer",
        "take knife",
        "turn_to_west",
        "inspect bread",
    )
    assert "cut bread with knife" in engine.action_strings(room01, state)


def test_answer_affordance_only_on_unsolved_code_lock(room01):
    state, _ = play(room01, "turn_to_east", "inspect desk")
    assert engine.ANSWER_PLACEHOLDER in engine.action_strings(room01, state)
    state, _ = play(room01, "turn_to_east", "inspect desk", "<ANSWER>4815</ANSWER>")
    assert engine.ANSWER_PLACEHOLDER not in engine.action_strings(room01, state)


def test_wrong_answer_changes_nothing_but_the_step_counter(room01):
    before, _ = play(room01, "turn_to_east", "inspect desk")
    result = engine.apply_action(room01, before, Answer("0000"))
    after = result.new_state
    assert [str(e) for e in result.events] == ["wrong_answer:drawer_keypad"]
    assert after.step_count == before.step_count + 1
    assert after.receptacle_states == before.receptacle_states
    assert after.item_locations == before.item_locations
    assert after.solved_locks == before.solved_locks
    assert after.view == before.view
    assert result.observation.scene_key == engine.scene_key(room01, before)


def test_correct_answer_always_opens_the_lock(all_specs):
    # Drive each room to every code lock via its oracle prefix, then answer.
    for spec in all_specs.values():
        for lock in spec.locks:
            if lock.kind not in ("numeric_code", "letter_code"):
                continue
            state = engine.initial_state(spec)
            for text in spec.oracle:
                if engine.ANSWER_PLACEHOLDER in engine.action_strings(spec, state):
                    faced = spec.lock_on(state.view.receptacle_id)
                    if faced.id == lock.id:
                        result = engine.apply_action(spec, state, Answer(lock.answer))
                        assert f"lock_opened:{lock.id}" in [str(e) for e in result.events]
                        break
                state = engine.apply_action_string(spec, state, text).new_state
            else:
                pytest.fail(f"never faced {lock.id} in {spec.room_id}")


def test_answer_is_trimmed_and_case_insensitive(room02):
    state, _ = play(room02, "turn_to_south", "inspect steel_door")
    result = engine.apply_action(room02, state, Answer("  MiNt \n"))
    assert "lock_opened:door_wordlock" in [str(e) for e in result.events]


def test_nonlocal_effect_changes_remote_wall_only(nonlocal_spec):
    state, _ = play(nonlocal_spec, "inspect button")
    before_key = engine.scene_key(nonlocal_spec, state)
    result = engine.apply_action(nonlocal_spec, state, Interact("press button"))
    # The current observation is unchanged while the remote receptacle moved.
    assert result.observation.scene_key == before_key
    assert result.new_state.receptacle_states["panel"] == "open"
    assert "state_changed:panel=open" in [str(e) for e in result.events]

    south, _ = play(nonlocal_spec, "inspect button", "press button", "turn_to_south")
    assert engine.scene_key(nonlocal_spec, south) == "wall:south|panel=open"


def test_reveal_and_consume_lifecycle(reveal_spec):
    state = engine.initial_state(reveal_spec)
    assert state.item_locations["charm"] == engine.HIDDEN

    state, result = play(reveal_spec, "inspect bowl", "shake bowl")
    assert state.item_locations["charm"] == "bowl"
    assert "item_revealed:charm" in [str(e) for e in result.events]

    state, result = play(reveal_spec, "inspect bowl", "shake bowl", "take charm")
    assert state.item_locations["charm"] == engine.INVENTORY
    assert state.inventory == ("charm",)

    state, result = play(
        reveal_spec, "inspect bowl", "shake bowl", "take charm",
        "turn_to_south", "inspect gate", "feed charm to gate",
    )
    assert state.item_locations["charm"] == engine.CONSUMED
    assert state.escaped
    assert state.inventory == ()


def test_taking_viewed_item_ascends_to_its_receptacle(room01):
    state, result = play(
        room01,
        "turn_to_east",
        "inspect desk",
        "<ANSWER>4815</ANSWER>",
        "open drawer",
        "take knife",
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
    )
    assert state.view == ReceptacleView("cabinet")
    assert "item_acquired:note" in [str(e) for e in result.events]


def test_back_walks_up_the_view_stack(room01):
    state, _ = play(room01, "turn_to_east", "inspect bookshelf", "inspect book")
    assert state.view == ItemView("book", "bookshelf")
    state, _ = play(room01, "turn_to_east", "inspect bookshelf", "inspect book", "back")
    assert state.view == ReceptacleView("bookshelf")
    state, _ = play(room01, "turn_to_east", "inspect bookshelf", "inspect book", "back", "back")
    assert state.view == WallView("east")


def test_turning_is_allowed_from_item_views(room01):
    state, _ = play(room01, "turn_to_east", "inspect bookshelf", "inspect book", "turn_to_south")
    assert state.view == WallView("south")


def test_back_is_not_available_on_walls(room01):
    state = engine.initial_state(room01)
    assert "back" not in engine.action_strings(room01, state)
    with pytest.raises(UnavailableAction) as exc:
        engine.apply_action(room01, state, Back())
    assert exc.value.available == engine.action_strings(room01, state)


def test_unavailable_action_raises_with_alternatives(room01):
    state = engine.initial_state(room01)
    with pytest.raises(UnavailableAction):
        engine.apply_action(room01, state, Interact("open drawer"))
    with pytest.raises(UnavailableAction):
        engine.apply_action(room01, state, Answer("4815"))  # no lock faced on the wall


def test_take_disappears_once_item_is_held(room01):
    state, _ = play(
        room01, "turn_to_east", "inspect desk", "<ANSWER>4815</ANSWER>", "open drawer"
    )
    assert "take knife" in engine.action_strings(room01, state)
    state, _ = play(
        room01, "turn_to_east", "inspect desk", "<ANSWER>4815</ANSWER>", "open drawer", "take knife"
    )
    assert "take knife" not in engine.action_strings(room01, state)


def test_escaped_state_offers_no_actions(room01):
    state, result = play(room01, *room01.oracle)
    assert state.escaped
    assert engine.available_actions(room01, state) == ()
    assert result.observation.available_actions == ()


def test_apply_action_never_mutates_inputs(room01):
    state, _ = play(room01, "turn_to_east", "inspect desk")
    snapshot = copy.deepcopy(state)
    engine.apply_action(room01, state, Answer("4815"))
    assert state == snapshot


def test_determinism_same_inputs_same_outputs(room01):
    state, _ = play(room01, "turn_to_east", "inspect desk")
    a = engine.apply_action(room01, state, Answer("4815"))
    b = engine.apply_action(room01, state, Answer("4815"))
    assert a == b


def test_render_observation_is_deterministic(room01):
    state = engine.initial_state(room01)
    assert engine.render_observation(room01, state) == engine.render_observation(room01, state)


def test_missing_caption_names_the_scene(room01):
    import dataclasses

    stripped = {k: v for k, v in room01.scenes.items() if not k.startswith("wall:east")}
    spec = dataclasses.replace(room01, scenes=stripped)
    state = engine.initial_state(spec)
    with pytest.raises(engine.MissingCaptionError, match="wall:east"):
        engine.apply_action(spec, state, TurnTo("east"))


def test_parse_render_round_trip_for_available_actions(all_specs):
    for spec in all_specs.values():
        state = engine.initial_state(spec)
        for text in spec.oracle:
            for action_str in engine.action_strings(spec, state):
                assert engine.render_action(engine.parse_action(action_str)) == action_str
            state = engine.apply_action_string(spec, state, text).new_state


def test_parse_action_variants():
    assert engine.parse_action("turn_to_north") == TurnTo("north")
    assert engine.parse_action(" Inspect desk ") == Inspect("desk")
    assert engine.parse_action("BACK") == Back()
    assert engine.parse_action("<answer> 42 </answer>") == Answer("42")
    assert engine.parse_action("Cut Bread With Knife") == Interact("cut bread with knife")


def _random_walk(spec, seed, steps):
    """Uniform random walk; correct answers only occasionally, like an agent."""
    rng = random.Random(seed)
    state = engine.initial_state(spec)
    scenes = {engine.scene_key(spec, state)}
    for _ in range(steps):
        actions = engine.available_actions(spec, state)
        if not actions:
            break
        action = rng.choice(actions)
        if isinstance(action, Answer):
            lock = spec.lock_on(state.view.receptacle_id)
            code = lock.answer if rng.random() < 0.3 else str(rng.randrange(10000))
            action = Answer(code)
        result = engine.apply_action(spec, state, action)
        state = result.new_state
        scenes.add(result.observation.scene_key)
        # Conservation: every item sits in exactly one tracked location.
        locations = state.item_locations
        assert set(locations) == {i.id for i in spec.items}
        valid = {r.id for r in spec.receptacles} | {engine.INVENTORY, engine.CONSUMED, engine.HIDDEN}
        assert set(locations.values()) <= valid
        assert set(state.inventory) == {i for i, loc in locations.items() if loc == engine.INVENTORY}
    return scenes


def test_random_walk_conservation_and_reachability(all_specs):
    for spec in all_specs.values():
        reachable = explore_reachable(spec).scene_keys
        for seed in range(3):
            scenes = _random_walk(spec, seed, 1200)
            assert scenes <= reachable, spec.room_id


def test_ten_thousand_step_walk_stays_within_reachable_scenes(room01):
    reachable = explore_reachable(room01).scene_keys
    scenes = _random_walk(room01, seed=99, steps=10_000)
    assert scenes <= reachable


def test_monotonicity_of_locks_and_checkpoints(room01):
    rng = random.Random(5)
    state = engine.initial_state(room01)
    for _ in range(400):
        actions = engine.available_actions(room01, state)
        if not actions:
            break
        action = rng.choice(actions)
        if isinstance(action, Answer):
            action = Answer(str(rng.randrange(10000)))
        new_state = engine.apply_action(room01, state, action).new_state
        assert set(state.solved_locks) <= set(new_state.solved_locks)
        assert new_state.achieved_checkpoints[: len(state.achieved_checkpoints)] == state.achieved_checkpoints
        state = new_state


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_walk_determinism_property(seed):
    # Two identical walks over the fixture room produce identical states.
    spec = with_auto_captions(nonlocal_room_doc())

    def walk(seed):
        rng = random.Random(seed)
        state = engine.initial_state(spec)
        for _ in range(60):
            actions = engine.available_actions(spec, state)
            if not actions:
                break
            state = engine.apply_action(spec, state, rng.choice(actions)).new_state
        return state

    assert walk(seed) == walk(seed)
