"""HTTP session service for the play UI and remote agents.

Sessions live in memory with durable per-session trajectory logs on disk; a
restart loses only in-flight sessions. Per-session request handling is
serialized with a lock; different sessions never share state.
"""

from __future__ import annotations

import threading
import time
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import engine
from .metrics import episode_metrics
from .model import RoomSpec
from .session import EpisodeDriver, ExperimentConfig, Trajectory


class CreateSessionRequest(BaseModel):
    room_id: str
    mode: str = "human"  # human | agent
    hints: bool = False
    # experiment-protocol caps by default for agent sessions; human sessions
    # get roomier limits so players are not cut off mid-think
    step_cap: Optional[int] = None
    no_progress_limit: Optional[int] = None


class ActionRequest(BaseModel):
    action: str


class GameSession:
    """One live episode behind the HTTP API."""

    def __init__(
        self,
        session_id: str,
        spec: RoomSpec,
        mode: str,
        config: ExperimentConfig,
        log_path: Optional[Path],
        clock,
    ):
        self.session_id = session_id
        self.spec = spec
        self.mode = mode
        self.lock = threading.Lock()
        self.clock = clock
        self.started_at = clock()
        self.started_wall = time.time()
        self._last_step_end = self.started_at
        self._log_file = open(log_path, "w", encoding="utf-8") if log_path else None
        self.driver = EpisodeDriver(
            spec,
            config,
            agent_name=mode,
            seed=0,
            clock=clock,
            log_stream=self._log_file,
        )

    @property
    def status(self) -> str:
        return self.driver.termination.value if self.driver.done else "active"

    def observation_payload(self) -> dict:
        obs = self.driver.observe()
        hint = self.driver.current_hint()
        state = self.driver.state
        return {
            "session_id": self.session_id,
            "room_id": self.spec.room_id,
            "mode": self.mode,
            "status": self.status,
            "step_count": state.step_count,
            "scene_key": obs.scene_key,
            "caption": obs.caption,
            "direction": obs.direction,
            "image_ref": obs.image_ref,
            "available_actions": list(obs.available_actions),
            "inventory": list(obs.inventory_captions),
            "puzzle_mode": obs.puzzle_mode,
            "hint": hint.text if hint else None,
            "achieved_checkpoints": len(state.achieved_checkpoints),
            "total_checkpoints": len(self.spec.checkpoints),
            "elapsed_s": round(self.clock() - self.started_at, 3),
        }

    def envelope(self) -> dict:
        return {
            "session_id": self.session_id,
            "room_id": self.spec.room_id,
            "mode": self.mode,
            "status": self.status,
            "step_count": self.driver.state.step_count,
            "started_at": self.started_wall,
        }

    def summary_payload(self) -> Optional[dict]:
        if not self.driver.done:
            return None
        trajectory = self.driver.trajectory()
        scores = episode_metrics(trajectory, self.spec, self.driver.config)
        return {
            "termination": trajectory.termination.value,
            "escaped": trajectory.escaped,
            "steps": trajectory.steps,
            "duration_s": round(trajectory.duration_ms / 1000.0, 3),
            "gc": scores.gc,
            "spl": scores.spl,
            "achieved_checkpoints": len(trajectory.achieved_checkpoints),
            "total_checkpoints": trajectory.total_checkpoints,
        }

    def apply(self, action_text: str) -> dict:
        if self.driver.done:
            raise HTTPException(
                status_code=409,
                detail={"error": "session_terminal", "summary": self.summary_payload()},
            )
        observation = self.driver.observe()
        hint = self.driver.current_hint()
        action = engine.parse_action(action_text)
        available = (
            engine.ANSWER_PLACEHOLDER in observation.available_actions
            if isinstance(action, engine.Answer)
            else engine.render_action(action) in observation.available_actions
        )
        if not available:
            raise HTTPException(
                status_code=409,
                detail={
                    "error": "unavailable_action",
                    "action": action_text,
                    "available_actions": list(observation.available_actions),
                },
            )
        # Step duration spans from the previous step's end, so the summed
        # record durations reproduce the player's wall-clock time.
        outcome = self.driver.step(
            action, observation=observation, hint=hint, started_at=self._last_step_end
        )
        self._last_step_end = self.clock()
        if self.driver.done and self._log_file is not None:
            self._log_file.close()
            self._log_file = None
        return {
            "observation": self.observation_payload(),
            "events": list(outcome.record.events),
            "new_checkpoints": list(outcome.record.new_checkpoints),
            "terminal": self.driver.done,
            "termination": outcome.termination.value if outcome.termination else None,
            "summary": self.summary_payload(),
        }

    def trajectory_payload(self) -> dict:
        trajectory: Trajectory = self.driver.trajectory()
        return {
            "room_id": trajectory.room_id,
            "mode": trajectory.mode,
            "records": [r.to_dict() for r in trajectory.records],
            "summary": trajectory.summary_dict() if self.driver.done else None,
        }


def create_app(
    rooms: dict[str, RoomSpec],
    *,
    log_dir: Optional[Path] = None,
    ui_dir: Optional[Path] = None,
    clock=time.monotonic,
) -> FastAPI:
    app = FastAPI(title="escaperoom service")
    sessions: dict[str, GameSession] = {}
    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)

    def get_session(session_id: str) -> GameSession:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail={"error": "unknown_session"})
        return session

    @app.get("/rooms")
    def list_rooms() -> list[dict]:
        return [
            {
                "room_id": spec.room_id,
                "receptacles": len(spec.receptacles),
                "items": len(spec.items),
                "checkpoints": len(spec.checkpoints),
                "oracle_length": len(spec.oracle),
            }
            for _, spec in sorted(rooms.items())
        ]

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest) -> dict:
        spec = rooms.get(request.room_id)
        if spec is None:
            raise HTTPException(status_code=404, detail={"error": "unknown_room"})
        if request.mode not in ("human", "agent"):
            raise HTTPException(status_code=422, detail={"error": "unknown_mode"})
        session_id = uuid.uuid4().hex[:12]
        human = request.mode == "human"
        config = ExperimentConfig(
            mode="exp_hint" if request.hints else "exp_base",
            step_cap=request.step_cap or (1000 if human else 300),
            no_progress_limit=request.no_progress_limit or (900 if human else 100),
        )
        log_path = (
            log_dir / f"session-{spec.room_id}-{session_id}.jsonl" if log_dir is not None else None
        )
        session = GameSession(session_id, spec, request.mode, config, log_path, clock)
        sessions[session_id] = session
        return {**session.envelope(), "observation": session.observation_payload()}

    @app.get("/sessions/{session_id}")
    def get_envelope(session_id: str) -> dict:
        return get_session(session_id).envelope()

    @app.get("/sessions/{session_id}/observation")
    def get_observation(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return session.observation_payload()

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, request: ActionRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            return session.apply(request.action)

    @app.get("/sessions/{session_id}/trajectory")
    def get_trajectory(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return session.trajectory_payload()

    if ui_dir is not None and ui_dir.exists():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
