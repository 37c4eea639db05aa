"""Episode execution: the agent/engine loop, hint protocol, termination
rules, and append-only trajectory logs.

Logs are line-delimited JSON with a schema version header line, one record
per step, and a final summary line; every line is flushed as written so a
crash loses at most the in-flight step.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, IO, Optional

from . import engine
from .engine import Action, Answer, GameEvent, GameState, Observation, TurnTo
from .model import RoomSpec

logger = logging.getLogger(__name__)

TRAJECTORY_SCHEMA = "trajectory/v1"


class TerminationReason(str, Enum):
    ESCAPED = "escaped"
    NO_PROGRESS = "no_progress"
    STEP_CAP = "step_cap"


@dataclass(frozen=True)
class ExperimentConfig:
    """Experiment protocol knobs; defaults follow the evaluation protocol."""

    mode: str = "exp_base"  # exp_base | exp_hint
    hint_stall_threshold: int = 30
    no_progress_limit: int = 100
    step_cap: int = 300
    trials_per_room: int = 3
    random_seed: int = 0
    memory_refresh_interval: int = 10
    gc_curve_window: int = 100
    coverage_window: int = 100

    def __post_init__(self):
        if self.mode not in ("exp_base", "exp_hint"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if min(self.hint_stall_threshold, self.no_progress_limit, self.step_cap) <= 0:
            raise ValueError("thresholds must be positive")
        if not (self.hint_stall_threshold < self.no_progress_limit <= self.step_cap):
            raise ValueError("require hint_stall_threshold < no_progress_limit <= step_cap")


@dataclass(frozen=True)
class Hint:
    checkpoint_id: str
    text: str


@dataclass
class TrajectoryRecord:
    """One step of an episode as written to the log."""

    step: int
    scene_key: str
    caption: str
    action: str
    analysis: Optional[str] = None
    hint_active: Optional[str] = None
    events: tuple[str, ...] = ()
    new_checkpoints: tuple[str, ...] = ()
    duration_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "scene_key": self.scene_key,
            "caption": self.caption,
            "action": self.action,
            "analysis": self.analysis,
            "hint_active": self.hint_active,
            "events": list(self.events),
            "new_checkpoints": list(self.new_checkpoints),
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrajectoryRecord":
        return cls(
            step=d["step"],
            scene_key=d["scene_key"],
            caption=d["caption"],
            action=d["action"],
            analysis=d.get("analysis"),
            hint_active=d.get("hint_active"),
            events=tuple(d.get("events", ())),
            new_checkpoints=tuple(d.get("new_checkpoints", ())),
            duration_ms=d.get("duration_ms", 0),
        )


@dataclass
class Trajectory:
    room_id: str
    agent_name: str
    mode: str
    seed: int
    records: list[TrajectoryRecord]
    termination: Optional[TerminationReason]
    total_checkpoints: int

    @property
    def steps(self) -> int:
        return len(self.records)

    @property
    def escaped(self) -> bool:
        return self.termination == TerminationReason.ESCAPED

    @property
    def checkpoint_steps(self) -> dict[str, int]:
        """Step index at which each checkpoint was achieved."""
        return {cp: r.step for r in self.records for cp in r.new_checkpoints}

    @property
    def achieved_checkpoints(self) -> tuple[str, ...]:
        return tuple(cp for r in self.records for cp in r.new_checkpoints)

    @property
    def hint_assisted_checkpoints(self) -> tuple[str, ...]:
        """Checkpoints achieved while a hint targeting them was active."""
        return tuple(
            cp for r in self.records for cp in r.new_checkpoints if r.hint_active == cp
        )

    @property
    def duration_ms(self) -> int:
        return sum(r.duration_ms for r in self.records)

    def summary_dict(self) -> dict:
        return {
            "termination": self.termination.value if self.termination else None,
            "escaped": self.escaped,
            "steps": self.steps,
            "achieved_checkpoints": list(self.achieved_checkpoints),
            "total_checkpoints": self.total_checkpoints,
            "checkpoint_steps": self.checkpoint_steps,
            "hint_assisted": list(self.hint_assisted_checkpoints),
            "duration_ms": self.duration_ms,
        }


def check_termination(
    escaped: bool, steps: int, steps_since_checkpoint: int, config: ExperimentConfig
) -> Optional[TerminationReason]:
    """Pure termination rule: escape, stalled progress, or the step cap."""
    if escaped:
        return TerminationReason.ESCAPED
    if steps_since_checkpoint >= config.no_progress_limit:
        return TerminationReason.NO_PROGRESS
    if steps >= config.step_cap:
        return TerminationReason.STEP_CAP
    return None


def hint_controller(
    spec: RoomSpec, state: GameState, stall_counter: int, config: ExperimentConfig
) -> Optional[Hint]:
    """Emit the earliest unachieved checkpoint's guideline once stalled.

    Active from stall_counter == hint_stall_threshold until the targeted
    checkpoint is achieved (achievement resets the stall counter).
    """
    if config.mode != "exp_hint" or stall_counter < config.hint_stall_threshold:
        return None
    for cp in spec.checkpoints:
        if cp.id not in state.achieved_checkpoints:
            return Hint(checkpoint_id=cp.id, text=cp.hint_text)
    return None


class TrajectoryWriter:
    """Append-only, flush-per-line JSONL writer. Deterministic byte output."""

    def __init__(self, stream: IO[str], header: dict):
        self._stream = stream
        self._write({"schema": TRAJECTORY_SCHEMA, **header})

    def _write(self, obj: dict) -> None:
        self._stream.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
        self._stream.flush()

    def write_record(self, record: TrajectoryRecord) -> None:
        self._write(record.to_dict())

    def write_summary(self, trajectory: Trajectory) -> None:
        self._write({"summary": trajectory.summary_dict()})


def write_trajectory(trajectory: Trajectory, path: str | Path) -> None:
    """Dump a finished trajectory to a log file in one go."""
    with open(path, "w", encoding="utf-8") as f:
        writer = TrajectoryWriter(
            f,
            {
                "room_id": trajectory.room_id,
                "agent": trajectory.agent_name,
                "mode": trajectory.mode,
                "seed": trajectory.seed,
            },
        )
        for record in trajectory.records:
            writer.write_record(record)
        writer.write_summary(trajectory)


def load_trajectory(path: str | Path) -> Trajectory:
    """Read a trajectory log back; raises ValueError if the summary line is missing."""
    header = None
    records: list[TrajectoryRecord] = []
    summary = None
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "schema" in obj:
                if obj["schema"] != TRAJECTORY_SCHEMA:
                    raise ValueError(f"unsupported trajectory schema {obj['schema']!r}")
                header = obj
            elif "summary" in obj:
                summary = obj["summary"]
            else:
                records.append(TrajectoryRecord.from_dict(obj))
    if header is None:
        raise ValueError(f"{path}: missing schema header line")
    if summary is None:
        raise ValueError(f"{path}: incomplete trajectory (no summary line)")
    return Trajectory(
        room_id=header["room_id"],
        agent_name=header["agent"],
        mode=header["mode"],
        seed=header["seed"],
        records=records,
        termination=TerminationReason(summary["termination"]) if summary["termination"] else None,
        total_checkpoints=summary["total_checkpoints"],
    )


def is_complete_trajectory(path: str | Path) -> bool:
    try:
        load_trajectory(path)
        return True
    except (OSError, ValueError, KeyError, json.JSONDecodeError):
        return False


@dataclass
class DriverStep:
    record: TrajectoryRecord
    result: engine.StepResult
    termination: Optional[TerminationReason]


class EpisodeDriver:
    """Stepwise episode state shared by run_episode and the HTTP service.

    Owns the game state, stall counter, hint lifecycle, record list, and the
    optional streaming log writer.
    """

    def __init__(
        self,
        spec: RoomSpec,
        config: ExperimentConfig,
        *,
        agent_name: str,
        seed: int = 0,
        clock: Callable[[], float] = time.monotonic,
        log_stream: Optional[IO[str]] = None,
    ):
        self.spec = spec
        self.config = config
        self.clock = clock
        self.state = engine.initial_state(spec)
        self.stall = 0
        self.records: list[TrajectoryRecord] = []
        self.termination: Optional[TerminationReason] = None
        self._trajectory = Trajectory(
            room_id=spec.room_id,
            agent_name=agent_name,
            mode=config.mode,
            seed=seed,
            records=self.records,
            termination=None,
            total_checkpoints=len(spec.checkpoints),
        )
        self._writer = (
            TrajectoryWriter(
                log_stream,
                {"room_id": spec.room_id, "agent": agent_name, "mode": config.mode, "seed": seed},
            )
            if log_stream is not None
            else None
        )

    @property
    def done(self) -> bool:
        return self.termination is not None

    def current_hint(self) -> Optional[Hint]:
        if self.config.mode != "exp_hint":
            return None
        return hint_controller(self.spec, self.state, self.stall, self.config)

    def observe(self) -> Observation:
        return engine.render_observation(self.spec, self.state)

    def step(
        self,
        action: Action,
        *,
        observation: Optional[Observation] = None,
        hint: Optional[Hint] = None,
        analyze: Optional[Callable[[Observation, str, engine.StepResult], Optional[str]]] = None,
        extra_events: tuple[GameEvent, ...] = (),
        started_at: Optional[float] = None,
    ) -> DriverStep:
        """Apply one action, log it, and evaluate termination."""
        if self.done:
            raise RuntimeError("episode already terminated")
        obs = observation if observation is not None else self.observe()
        t0 = started_at if started_at is not None else self.clock()
        result = engine.apply_action(self.spec, self.state, action)
        action_str = engine.render_action(action)
        analysis = None
        if analyze is not None:
            try:
                analysis = analyze(obs, action_str, result)
            except Exception:
                logger.exception("analysis hook failed; continuing without it")
        duration_ms = int(round((self.clock() - t0) * 1000))
        record = TrajectoryRecord(
            step=result.new_state.step_count,
            scene_key=obs.scene_key,
            caption=obs.caption,
            action=action_str,
            analysis=analysis,
            hint_active=hint.checkpoint_id if hint else None,
            events=tuple(str(e) for e in (extra_events + result.events)),
            new_checkpoints=result.newly_achieved_checkpoints,
            duration_ms=duration_ms,
        )
        self.records.append(record)
        if self._writer is not None:
            self._writer.write_record(record)
        self.state = result.new_state
        self.stall = 0 if result.newly_achieved_checkpoints else self.stall + 1
        self.termination = check_termination(
            self.state.escaped, self.state.step_count, self.stall, self.config
        )
        if self.termination is not None:
            self._trajectory.termination = self.termination
            if self._writer is not None:
                self._writer.write_summary(self._trajectory)
        return DriverStep(record=record, result=result, termination=self.termination)

    def trajectory(self) -> Trajectory:
        return self._trajectory


def _action_available(observation: Observation, action: Action) -> bool:
    if isinstance(action, Answer):
        return engine.ANSWER_PLACEHOLDER in observation.available_actions
    return engine.render_action(action) in observation.available_actions


def run_episode(
    spec: RoomSpec,
    agent,
    config: ExperimentConfig,
    *,
    seed: int = 0,
    clock: Callable[[], float] = time.monotonic,
    log_stream: Optional[IO[str]] = None,
) -> Trajectory:
    """Run one full episode: observe, decide, apply, analyze, log, terminate.

    Agent failures (exceptions or malformed output past the retry budget)
    are logged and replaced by the first available action — the episode
    never aborts. With a fixed clock and a deterministic agent the produced
    log is byte-identical across runs.
    """
    driver = EpisodeDriver(
        spec, config, agent_name=agent.name, seed=seed, clock=clock, log_stream=log_stream
    )
    agent.begin_episode(spec.room_id, seed)
    while not driver.done:
        observation = driver.observe()
        hint = driver.current_hint()
        t0 = driver.clock()
        failed = False
        try:
            proposed = agent.decide(observation, hint)
        except Exception:
            logger.exception("agent %s failed to decide; substituting a turn", agent.name)
            proposed = None
            failed = True

        action = engine.parse_action(proposed) if proposed is not None else None
        if action is None or not _action_available(observation, action):
            if action is not None:
                retried = None
                try:
                    retried = agent.retry(observation, engine.render_action(action), hint)
                except Exception:
                    logger.exception("agent %s retry failed", agent.name)
                    failed = True
                if retried is not None:
                    action = engine.parse_action(retried)
            if action is None or not _action_available(observation, action):
                action = engine.parse_action(observation.available_actions[0])

        def analyze(obs, action_str, result):
            return agent.observe(obs, action_str, result)

        driver.step(
            action,
            observation=observation,
            hint=hint,
            analyze=analyze,
            extra_events=(GameEvent("agent_failure"),) if failed else (),
            started_at=t0,
        )
    return driver.trajectory()
