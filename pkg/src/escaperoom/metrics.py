"""Episode and aggregate metrics: SR, GC, SPL, Step, HCR, plus the analysis
statistics (action repetition, caption accuracy, essential-scene coverage,
repeated-answer attempts)."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import RoomSpec
from .session import ExperimentConfig, Trajectory
from .validate import replay_oracle

REPETITION_BUCKETS = tuple(str(n) for n in range(2, 10)) + ("10+",)


class ZeroCheckpointError(ValueError):
    """GC is undefined for a room with no checkpoints (validation prevents this)."""


@dataclass(frozen=True)
class EpisodeMetrics:
    success: bool
    gc: float
    spl: float
    steps: int
    hcr: float
    termination: str

    def as_dict(self) -> dict:
        return {
            "success": self.success,
            "gc": self.gc,
            "spl": self.spl,
            "steps": self.steps,
            "hcr": self.hcr,
            "termination": self.termination,
        }


def episode_metrics(trajectory: Trajectory, spec: RoomSpec, config: ExperimentConfig) -> EpisodeMetrics:
    """Score one finished episode.

    gc = achieved/total checkpoints; spl = success * min(1, oracle/agent)
    (0 on failure); hcr = hint-assisted achieved / achieved (0 when nothing
    was achieved).
    """
    total = len(spec.checkpoints)
    if total == 0:
        raise ZeroCheckpointError(f"room {spec.room_id} declares no checkpoints")
    achieved = len(trajectory.achieved_checkpoints)
    success = trajectory.escaped
    steps = trajectory.steps
    gc = achieved / total
    spl = min(1.0, len(spec.oracle) / steps) if success and steps > 0 else 0.0
    assisted = len(trajectory.hint_assisted_checkpoints)
    hcr = assisted / achieved if achieved else 0.0
    return EpisodeMetrics(
        success=success,
        gc=gc,
        spl=spl,
        steps=steps,
        hcr=hcr,
        termination=trajectory.termination.value if trajectory.termination else "unknown",
    )


@dataclass(frozen=True)
class MetricsRow:
    """Mean metrics over a group of episodes (one room, or all rooms)."""

    sr: float
    gc: float
    spl: float
    steps: float
    hcr: float
    episodes: int

    def as_dict(self) -> dict:
        return {
            "sr": self.sr,
            "gc": self.gc,
            "spl": self.spl,
            "steps": self.steps,
            "hcr": self.hcr,
            "episodes": self.episodes,
        }


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _row_from_episodes(episodes: Sequence[EpisodeMetrics]) -> MetricsRow:
    return MetricsRow(
        sr=_mean([1.0 if e.success else 0.0 for e in episodes]),
        gc=_mean([e.gc for e in episodes]),
        spl=_mean([e.spl for e in episodes]),
        steps=_mean([float(e.steps) for e in episodes]),
        hcr=_mean([e.hcr for e in episodes]),
        episodes=len(episodes),
    )


@dataclass
class MetricsReport:
    mode: str
    agent: str
    per_room: dict[str, MetricsRow]
    overall: MetricsRow
    gc_curve: list[tuple[int, float]] = field(default_factory=list)  # (step, mean prefix GC)
    repetition_histogram: dict[str, float] = field(default_factory=dict)
    answer_stats: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "agent": self.agent,
            "per_room": {room: row.as_dict() for room, row in sorted(self.per_room.items())},
            "overall": self.overall.as_dict(),
            "gc_curve": [[step, gc] for step, gc in self.gc_curve],
            "repetition_histogram": self.repetition_histogram,
            "answer_stats": self.answer_stats,
        }

    def render_table(self) -> str:
        """Text table with percentage columns rendered to one decimal."""
        with_hints = self.mode == "exp_hint"
        headers = ["Room", "SR(%)", "GC(%)", "SPL(%)", "Step"] + (["HCR(%)"] if with_hints else [])

        def cells(label: str, row: MetricsRow) -> list[str]:
            out = [
                label,
                f"{row.sr * 100:.1f}",
                f"{row.gc * 100:.1f}",
                f"{row.spl * 100:.1f}",
                f"{row.steps:.1f}",
            ]
            if with_hints:
                out.append(f"{row.hcr * 100:.1f}")
            return out

        rows = [cells(room, row) for room, row in sorted(self.per_room.items())]
        rows.append(cells("overall", self.overall))
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
        lines = [
            "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
            "  ".join("-" * w for w in widths),
        ]
        lines += ["  ".join(c.ljust(widths[i]) for i, c in enumerate(r)) for r in rows]
        return "\n".join(lines)


def aggregate(episodes_by_room: dict[str, Sequence[EpisodeMetrics]]) -> tuple[dict[str, MetricsRow], MetricsRow]:
    """Mean over trials per room, then the mean of room means."""
    if not episodes_by_room or not any(episodes_by_room.values()):
        raise ValueError("no episodes to aggregate")
    per_room = {room: _row_from_episodes(eps) for room, eps in episodes_by_room.items() if eps}
    rows = list(per_room.values())
    overall = MetricsRow(
        sr=_mean([r.sr for r in rows]),
        gc=_mean([r.gc for r in rows]),
        spl=_mean([r.spl for r in rows]),
        steps=_mean([r.steps for r in rows]),
        hcr=_mean([r.hcr for r in rows]),
        episodes=sum(r.episodes for r in rows),
    )
    return per_room, overall


def gc_at_step(trajectory: Trajectory, step: int) -> float:
    """Prefix GC: fraction of checkpoints achieved by the end of `step`."""
    if not trajectory.total_checkpoints:
        return 0.0
    achieved = sum(len(r.new_checkpoints) for r in trajectory.records if r.step <= step)
    return achieved / trajectory.total_checkpoints


def gc_curve(trajectories: Sequence[Trajectory], window: int = 100) -> list[tuple[int, float]]:
    """Mean prefix-GC per step over a group of episodes (finished runs hold their value)."""
    return [
        (step, _mean([gc_at_step(t, step) for t in trajectories]))
        for step in range(1, window + 1)
    ]


def repetition_histogram(
    trajectory: Trajectory, *, key_on_scene: bool = True
) -> dict[str, float]:
    """Share of actions that are repeats, bucketed by how often their
    (scene, action) pair occurs; pairs seen 10+ times share one bucket."""
    counts = Counter(
        (r.scene_key, r.action) if key_on_scene else r.action for r in trajectory.records
    )
    total = len(trajectory.records)
    hist = {bucket: 0.0 for bucket in REPETITION_BUCKETS}
    if total == 0:
        return hist
    for _, count in counts.items():
        if count >= 2:
            bucket = "10+" if count >= 10 else str(count)
            hist[bucket] += count / total
    return hist


_WORD_SPLIT = re.compile(r"[^a-z0-9]+")


def _mentions(caption_words: set[str], term: str) -> bool:
    words = [w for w in _WORD_SPLIT.split(term.lower()) if w]
    if not words:
        return False
    return all(w in caption_words for w in words)


@dataclass(frozen=True)
class EntityFact:
    """Ground truth for one visible object in a scene."""

    entity_id: str
    aliases: tuple[str, ...] = ()
    state: Optional[str] = None
    other_states: tuple[str, ...] = ()


def caption_accuracy(caption: str, ground_truth: Sequence[EntityFact]) -> bool:
    """True iff every ground-truth entity is mentioned (by id or alias) and no
    contradicting state word appears."""
    caption_words = {w for w in _WORD_SPLIT.split(caption.lower()) if w}
    for fact in ground_truth:
        names = (fact.entity_id,) + fact.aliases
        if not any(_mentions(caption_words, n) for n in names):
            return False
        for other in fact.other_states:
            if fact.state is not None and other != fact.state and _mentions(caption_words, other):
                return False
    return True


def essential_scene_coverage(trajectory: Trajectory, spec: RoomSpec, first_n: int = 100) -> float:
    """Fraction of oracle-visited scenes the agent observed in its first N steps."""
    essential = set(replay_oracle(spec).visited_scene_keys)
    if not essential:
        return 0.0
    seen = {r.scene_key for r in trajectory.records[:first_n]}
    return len(essential & seen) / len(essential)


def answer_statistics(trajectories: Sequence[Trajectory]) -> dict[str, float]:
    """Automated repeated-answer statistic over a run.

    Counts every answer submission; a submission is "repeated" when the same
    code was already tried at the same scene earlier in that episode.
    """
    total = 0
    wrong = 0
    repeated = 0
    for t in trajectories:
        tried: set[tuple[str, str]] = set()
        for r in t.records:
            if not r.action.startswith("<ANSWER>"):
                continue
            total += 1
            if any(e.startswith("wrong_answer") for e in r.events):
                wrong += 1
            key = (r.scene_key, r.action)
            if key in tried:
                repeated += 1
            tried.add(key)
    return {
        "answer_attempts": float(total),
        "wrong_answers": float(wrong),
        "repeated_attempt_ratio": repeated / total if total else 0.0,
    }


def build_report(
    runs: Sequence[tuple[str, Trajectory, EpisodeMetrics]],
    *,
    mode: str,
    agent: str,
    gc_window: int = 100,
) -> MetricsReport:
    """Full run report: aggregated means plus the analysis statistics."""
    episodes_by_room: dict[str, list[EpisodeMetrics]] = {}
    trajectories = []
    for room_id, trajectory, metrics in runs:
        episodes_by_room.setdefault(room_id, []).append(metrics)
        trajectories.append(trajectory)
    per_room, overall = aggregate(episodes_by_room)

    hist = {bucket: 0.0 for bucket in REPETITION_BUCKETS}
    for t in trajectories:
        for bucket, ratio in repetition_histogram(t).items():
            hist[bucket] += ratio / len(trajectories)

    return MetricsReport(
        mode=mode,
        agent=agent,
        per_room=per_room,
        overall=overall,
        gc_curve=gc_curve(trajectories, gc_window),
        repetition_histogram=hist,
        answer_stats=answer_statistics(trajectories),
    )
