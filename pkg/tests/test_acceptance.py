"""Acceptance suite: one test per release criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. Every tolerance is pinned here; nothing is deferred.
"""

from __future__ import annotations

import io
import random
import time

import pytest

from escaperoom import engine
from escaperoom.agents import (
    AgentMemory,
    BaseAgent,
    ExplorerAgent,
    RandomAgent,
    ScriptedAgent,
    parse_memory,
    parse_react,
    serialize_memory,
)
from escaperoom.agents.parsing import ParseFailure, ReactOutput
from escaperoom.cli import main as cli_main
from escaperoom.metrics import (
    EntityFact,
    caption_accuracy,
    episode_metrics,
    essential_scene_coverage,
    repetition_histogram,
)
from escaperoom.session import ExperimentConfig, TerminationReason, run_episode
from escaperoom.validate import replay_oracle

from scripted_chat import ScriptedChatModel, room01_plan
from test_agents import FakeChat, REACT_FAIL_CASES, REACT_OK_CASES, obs as make_obs
from test_metrics import CORPUS, FakeSpec, brute_force_histogram, make_trajectory, metric_cases

BASE = ExperimentConfig(mode="exp_base")
HINTED = ExperimentConfig(mode="exp_hint")


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: {status}{suffix}")
    assert ok, f"{name} failed: {detail}"


def test_oracle_solvability(all_specs, rooms_dir):
    """Every shipped room validates and a scripted oracle scores perfectly, in < 5 s."""
    started = time.monotonic()
    ok = len(all_specs) >= 3
    detail = []
    assert cli_main(["validate", "--rooms", str(rooms_dir)]) == 0
    for spec in all_specs.values():
        trajectory = run_episode(spec, ScriptedAgent(spec.oracle), BASE, clock=lambda: 0.0)
        scores = episode_metrics(trajectory, spec, BASE)
        room_ok = (
            scores.success
            and abs(scores.gc - 1.0) < 1e-12
            and abs(scores.spl - 1.0) < 1e-12
            and scores.steps == len(spec.oracle)
        )
        detail.append(f"{spec.room_id}: steps={scores.steps}")
        ok = ok and room_ok
    elapsed = time.monotonic() - started
    ok = ok and elapsed < 5.0
    report("oracle-solvability", ok, f"{'; '.join(detail)}; {elapsed:.2f}s")


def test_random_baseline_floor(all_specs):
    """Random agent, 10 seeds x all rooms, exp_base: SR = 0 and mean GC < 10%, in < 60 s."""
    started = time.monotonic()
    gcs = []
    successes = 0
    for spec in all_specs.values():
        for seed in range(10):
            trajectory = run_episode(spec, RandomAgent(), BASE, seed=seed, clock=lambda: 0.0)
            scores = episode_metrics(trajectory, spec, BASE)
            successes += scores.success
            gcs.append(scores.gc)
    mean_gc = sum(gcs) / len(gcs)
    elapsed = time.monotonic() - started
    ok = successes == 0 and mean_gc < 0.10 and elapsed < 60.0
    report(
        "random-baseline-floor",
        ok,
        f"episodes={len(gcs)} SR=0/{len(gcs)} meanGC={mean_gc * 100:.2f}% {elapsed:.1f}s",
    )


class _Staller:
    name = "staller"

    def __init__(self):
        self.hints = []
        self._flip = False

    def begin_episode(self, room_id, seed):
        pass

    def decide(self, observation, hint):
        self.hints.append(hint)
        self._flip = not self._flip
        return "turn_to_east" if self._flip else "turn_to_north"

    def retry(self, observation, failed_action, hint):
        return None

    def observe(self, observation, action, result):
        return None


def _slow_plan():
    plan = ["turn_to_east", "turn_to_north"] * 47
    plan += ["turn_to_east", "inspect desk", "<ANSWER>4815</ANSWER>"]
    plan += ["back"] + ["turn_to_north", "turn_to_east"] * 47
    plan += ["inspect desk", "open drawer", "take knife"]
    plan += ["back"] + ["turn_to_north", "turn_to_west"] * 46
    plan += ["inspect bread", "cut bread with knife"]
    plan += ["back"] + ["turn_to_north", "turn_to_west"] * 10
    return plan


def test_protocol_exactness(room01):
    """Hint fires at stall 30 (exp_hint only); NoProgress at exactly 100; StepCap at exactly 300."""
    hint_agent = _Staller()
    hint_run = run_episode(room01, hint_agent, HINTED, clock=lambda: 0.0)
    hint_at_30 = (
        hint_agent.hints[:30] == [None] * 30
        and hint_agent.hints[30] is not None
        and hint_agent.hints[30].checkpoint_id == room01.checkpoints[0].id
    )

    base_agent = _Staller()
    base_run = run_episode(room01, base_agent, BASE, clock=lambda: 0.0)
    never_in_base = all(h is None for h in base_agent.hints) and all(
        r.hint_active is None for r in base_run.records
    )

    no_progress_exact = (
        base_run.termination == TerminationReason.NO_PROGRESS and base_run.steps == 100
    )

    capped = run_episode(room01, ScriptedAgent(_slow_plan()), BASE, clock=lambda: 0.0)
    step_cap_exact = capped.termination == TerminationReason.STEP_CAP and capped.steps == 300

    ok = hint_at_30 and never_in_base and no_progress_exact and step_cap_exact
    report(
        "protocol-exactness",
        ok,
        f"hint@30={hint_at_30} base-hintless={never_in_base} "
        f"noprogress@{base_run.steps} stepcap@{capped.steps}",
    )


def test_metric_formulas():
    """Hand-computed SPL/GC/HCR on 10 constructed trajectories, tolerance 1e-9."""
    cases = metric_cases()
    ok = len(cases) == 10
    for trajectory, spec, success, gc, spl, hcr in cases:
        config = HINTED if trajectory.mode == "exp_hint" else BASE
        m = episode_metrics(trajectory, spec, config)
        ok = (
            ok
            and m.success == success
            and abs(m.gc - gc) < 1e-9
            and abs(m.spl - spl) < 1e-9
            and abs(m.hcr - hcr) < 1e-9
        )
    report("metric-formulas", ok, f"{len(cases)} trajectories at 1e-9")


def test_nonlocal_effects(room02):
    """An action on one wall changes a receptacle on another; the current view is unchanged."""
    state = engine.initial_state(room02)
    for action in ["turn_to_east", "inspect hourglass", "flip hourglass", "turn_to_north",
                   "inspect power_box", "<ANSWER>3842</ANSWER>", "flip main switch", "back",
                   "inspect pegboard"]:
        state = engine.apply_action_string(room02, state, action).new_state
    before_key = engine.scene_key(room02, state)
    before_caption = engine.render_observation(room02, state).caption
    assert state.receptacle_states["wall_panel"] == "shut"

    result = engine.apply_action_string(room02, state, "press red button")
    unchanged_here = (
        result.observation.scene_key == before_key
        and result.observation.caption == before_caption
    )
    changed_there = result.new_state.receptacle_states["wall_panel"] == "open"

    west = engine.apply_action_string(room02, result.new_state, "turn_to_west")
    differs_later = west.observation.scene_key == "wall:west|wall_panel=open"

    ok = unchanged_here and changed_there and differs_later
    report(
        "non-local-effects",
        ok,
        f"pegboard scene stable={unchanged_here} remote panel opened={changed_there}",
    )


def test_parser_suite():
    """30+ grammar fixtures, memory round-trip, and the 20-pair history cap."""
    total = len(REACT_OK_CASES) + len(REACT_FAIL_CASES)
    grammar_ok = total >= 30
    for text, expected in REACT_OK_CASES:
        out = parse_react(text)
        grammar_ok = grammar_ok and isinstance(out, ReactOutput) and out.action == expected
    for text in REACT_FAIL_CASES:
        grammar_ok = grammar_ok and isinstance(parse_react(text), ParseFailure)

    memory = AgentMemory(
        spatial={"north": ["door", "poster"], "west": ["bread"]},
        inspected={"poster": {"state": "plain", "characteristics": "circles", "additional info": ""}},
        uninspected=["door", "bread"],
        additional=["code 4815 opens the drawer"],
    )
    parsed, missing = parse_memory(serialize_memory(memory))
    round_trip_ok = parsed == memory and missing == []

    cap_ok = True
    for n in (0, 3, 20, 25, 60):
        agent = BaseAgent(FakeChat(["x"]), "m")
        for i in range(n):
            agent.observe(make_obs(caption=f"scene-{i}"), f"action-{i}", None)
        text = agent.build_prompt(make_obs(), None).messages[-1].content
        cap_ok = cap_ok and text.count("Observation: ") <= 20

    ok = grammar_ok and round_trip_ok and cap_ok
    report(
        "parser-suite",
        ok,
        f"fixtures={total} round-trip={round_trip_ok} history-cap={cap_ok}",
    )


def test_mock_end_to_end(room01):
    """Full modular agent escapes with byte-identical logs; memory ablation degrades."""

    def run_full():
        chat = ScriptedChatModel(plan=room01_plan())
        agent = ExplorerAgent(chat, "scripted-endpoint")
        stream = io.StringIO()
        trajectory = run_episode(
            room01, agent, BASE, seed=5, clock=lambda: 0.0, log_stream=stream
        )
        return trajectory, stream.getvalue()

    first, log_a = run_full()
    second, log_b = run_full()
    escaped = first.termination == TerminationReason.ESCAPED
    identical = log_a == log_b and log_a != ""

    ablated_chat = ScriptedChatModel(plan=room01_plan())
    ablated_agent = ExplorerAgent(ablated_chat, "scripted-endpoint", memory_enabled=False)
    ablated = run_episode(room01, ablated_agent, BASE, seed=5, clock=lambda: 0.0)
    degraded = (not ablated.escaped) or ablated.steps > first.steps

    ok = escaped and identical and degraded
    report(
        "mock-end-to-end",
        ok,
        f"full: escaped in {first.steps} steps, logs identical={identical}; "
        f"ablated: {ablated.termination.value} at {ablated.steps} steps",
    )


def test_analysis_operations(room01):
    """Histogram, caption accuracy, and scene coverage match brute force on 5 cases each."""
    rng = random.Random(2024)

    hist_ok = True
    for _ in range(5):
        n = rng.randrange(4, 80)
        actions = [f"a{rng.randrange(5)}" for _ in range(n)]
        scenes = [f"s{rng.randrange(4)}" for _ in range(n)]
        t = make_trajectory(steps=n, checkpoints={}, actions=actions, scenes=scenes)
        expected = brute_force_histogram(list(zip(scenes, actions)))
        got = repetition_histogram(t)
        hist_ok = hist_ok and all(abs(got[k] - expected[k]) < 1e-12 for k in expected)

    def brute_caption(caption, facts):
        import re

        words = {w for w in re.split(r"[^a-z0-9]+", caption.lower()) if w}

        def present(term):
            parts = [w for w in re.split(r"[^a-z0-9]+", term.lower()) if w]
            return bool(parts) and all(p in words for p in parts)

        for fact in facts:
            if not any(present(n) for n in (fact.entity_id,) + fact.aliases):
                return False
            for other in fact.other_states:
                if fact.state and other != fact.state and present(other):
                    return False
        return True

    corpus5 = CORPUS[:5] + CORPUS[-5:]
    caption_ok = all(
        caption_accuracy(c, facts) == brute_caption(c, facts) == expected
        for c, facts, expected in corpus5
    )

    essential = list(dict.fromkeys(replay_oracle(room01).visited_scene_keys))
    coverage_ok = True
    for k in range(5):
        take = (k * len(essential)) // 4 if k < 4 else len(essential)
        visited = essential[:take] + ["noise"] * 3
        t = make_trajectory(
            steps=len(visited),
            checkpoints={},
            scenes=visited,
            actions=[f"a{i}" for i in range(len(visited))],
        )
        expected = len(set(essential[:take])) / len(set(essential))
        coverage_ok = coverage_ok and abs(
            essential_scene_coverage(t, room01, first_n=len(visited)) - expected
        ) < 1e-12

    ok = hist_ok and caption_ok and coverage_ok
    report(
        "analysis-operations",
        ok,
        f"histogram={hist_ok} caption={caption_ok} coverage={coverage_ok}",
    )
