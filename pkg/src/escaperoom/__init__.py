"""Room-escape game-graph engine, agent framework, and evaluation harness."""

from .engine import (
    Action,
    Answer,
    Back,
    GameState,
    Inspect,
    Interact,
    Observation,
    StepResult,
    TurnTo,
    UnavailableAction,
    apply_action,
    available_actions,
    initial_state,
    parse_action,
    render_action,
    render_observation,
    scene_key,
)
from .model import RoomSpec, load_room, save_room
from .session import (
    ExperimentConfig,
    Hint,
    TerminationReason,
    Trajectory,
    TrajectoryRecord,
    check_termination,
    hint_controller,
    load_trajectory,
    run_episode,
)
from .validate import ReplayResult, ValidationReport, replay_oracle, validate_room

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Answer",
    "Back",
    "ExperimentConfig",
    "GameState",
    "Hint",
    "Inspect",
    "Interact",
    "Observation",
    "ReplayResult",
    "RoomSpec",
    "StepResult",
    "TerminationReason",
    "Trajectory",
    "TrajectoryRecord",
    "TurnTo",
    "UnavailableAction",
    "ValidationReport",
    "apply_action",
    "available_actions",
    "check_termination",
    "hint_controller",
    "initial_state",
    "load_room",
    "load_trajectory",
    "parse_action",
    "render_action",
    "render_observation",
    "replay_oracle",
    "run_episode",
    "save_room",
    "scene_key",
    "validate_room",
    "__version__",
]
