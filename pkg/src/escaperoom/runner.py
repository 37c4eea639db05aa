"""Experiment orchestration: room loading, trial loops, resume, and reports.

A run executes trials_per_room episodes per room, streams each trajectory to
its own log file, and skips any trial whose completed log is already on
disk, so interrupted runs resume per room. Endpoint failures surface as
agent failures inside episodes; the run itself continues.
"""

from __future__ import annotations

import logging
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import metrics as metrics_mod
from .agents import make_agent
from .agents.chat import ChatModel, HttpChatClient, DEFAULT_API_KEY_ENV
from .model import RoomSpec, load_room
from .session import ExperimentConfig, Trajectory, load_trajectory, run_episode
from .validate import validate_room

logger = logging.getLogger(__name__)


@dataclass
class RunManifest:
    """Everything one experiment run needs, validated before any episode starts."""

    room_paths: list[Path]
    agent_kind: str
    out_dir: Path
    config: ExperimentConfig = field(default_factory=ExperimentConfig)
    endpoint: Optional[str] = None
    model: str = ""
    temperature: float = 0.0
    api_key_env: str = DEFAULT_API_KEY_ENV
    memory_enabled: bool = True
    exploration_memory_enabled: bool = True
    feedback_enabled: bool = True


def collect_room_paths(entries: Sequence[str | Path]) -> list[Path]:
    """Expand files and directories into a sorted list of room files."""
    paths: list[Path] = []
    for entry in entries:
        p = Path(entry)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.json")))
        else:
            paths.append(p)
    return paths


def load_rooms(paths: Sequence[Path]) -> dict[str, RoomSpec]:
    """Load and certify every room; any failure aborts before episodes start."""
    rooms: dict[str, RoomSpec] = {}
    for path in paths:
        if not path.exists():
            raise FileNotFoundError(f"room file not found: {path}")
        spec = load_room(path)
        report = validate_room(spec)
        if not report.ok:
            raise ValueError(f"room {spec.room_id} failed validation:\n{report.render()}")
        rooms[spec.room_id] = spec
    if not rooms:
        raise ValueError("no room files given")
    return rooms


def derive_seed(base_seed: int, room_id: str, trial: int) -> int:
    """Stable per-episode seed (crc32, deterministic across processes)."""
    return zlib.crc32(f"{base_seed}:{room_id}:{trial}".encode()) & 0x7FFFFFFF


def trajectory_path(out_dir: Path, room_id: str, agent: str, mode: str, trial: int) -> Path:
    return out_dir / "trajectories" / f"{room_id}__{agent}__{mode}__trial{trial}.jsonl"


def _build_agent(manifest: RunManifest, spec: RoomSpec, chat: Optional[ChatModel]):
    return make_agent(
        manifest.agent_kind,
        oracle=spec.oracle,
        chat=chat,
        model=manifest.model,
        temperature=manifest.temperature,
        memory_enabled=manifest.memory_enabled,
        exploration_memory_enabled=manifest.exploration_memory_enabled,
        feedback_enabled=manifest.feedback_enabled,
        memory_refresh_interval=manifest.config.memory_refresh_interval,
    )


def run_manifest(
    manifest: RunManifest,
    *,
    chat: Optional[ChatModel] = None,
    clock: Callable[[], float] = time.monotonic,
    echo: Callable[[str], None] = logger.info,
) -> metrics_mod.MetricsReport:
    """Execute a full run and write trajectory logs plus report files."""
    rooms = load_rooms(manifest.room_paths)
    config = manifest.config
    out_dir = manifest.out_dir
    (out_dir / "trajectories").mkdir(parents=True, exist_ok=True)

    if chat is None and manifest.agent_kind in ("base", "explorer"):
        if not manifest.endpoint:
            raise ValueError(f"agent {manifest.agent_kind!r} needs --endpoint (or an injected chat model)")
        chat = HttpChatClient(manifest.endpoint, api_key_env=manifest.api_key_env)

    runs: list[tuple[str, Trajectory, metrics_mod.EpisodeMetrics]] = []
    for room_id, spec in sorted(rooms.items()):
        for trial in range(config.trials_per_room):
            path = trajectory_path(out_dir, room_id, manifest.agent_kind, config.mode, trial)
            if path.exists():
                try:
                    trajectory = load_trajectory(path)
                    echo(f"{room_id} trial {trial}: resumed from {path.name}")
                    runs.append((room_id, trajectory, metrics_mod.episode_metrics(trajectory, spec, config)))
                    continue
                except ValueError:
                    echo(f"{room_id} trial {trial}: incomplete log, re-running")
            seed = derive_seed(config.random_seed, room_id, trial)
            agent = _build_agent(manifest, spec, chat)
            with open(path, "w", encoding="utf-8") as stream:
                trajectory = run_episode(
                    spec, agent, config, seed=seed, clock=clock, log_stream=stream
                )
            episode = metrics_mod.episode_metrics(trajectory, spec, config)
            echo(
                f"{room_id} trial {trial}: {trajectory.termination.value} "
                f"steps={episode.steps} gc={episode.gc:.2f}"
            )
            runs.append((room_id, trajectory, episode))

    report = metrics_mod.build_report(
        runs, mode=config.mode, agent=manifest.agent_kind, gc_window=config.gc_curve_window
    )
    write_report_files(report, out_dir)
    return report


def write_report_files(report: metrics_mod.MetricsReport, out_dir: Path) -> None:
    import json

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out_dir / "report.txt").write_text(report.render_table() + "\n", encoding="utf-8")
    lines = ["step,mean_gc"] + [f"{step},{gc:.6f}" for step, gc in report.gc_curve]
    (out_dir / "gc_curve.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
