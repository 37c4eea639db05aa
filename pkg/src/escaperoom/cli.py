"""Command-line entry points: validate rooms, run experiments, serve sessions."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .agents.chat import DEFAULT_API_KEY_ENV
from .model import RoomFormatError, load_room
from .runner import RunManifest, collect_room_paths, load_rooms, run_manifest
from .session import ExperimentConfig, load_trajectory
from .validate import validate_room


def _add_room_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--rooms",
        nargs="+",
        required=True,
        metavar="PATH",
        help="room files or directories containing *.json rooms",
    )


def cmd_validate(args: argparse.Namespace) -> int:
    """Load, validate, and oracle-replay each room; nonzero exit iff any is invalid.

    Valid rooms get a one-line confirmation; full diagnostics print only for
    the invalid ones.
    """
    status = 0
    for path in collect_room_paths(args.rooms):
        try:
            spec = load_room(path)
        except (OSError, RoomFormatError) as exc:
            print(f"room {path}: INVALID\n  load error: {exc}")
            status = 1
            continue
        report = validate_room(spec)
        if report.ok:
            print(
                f"room {report.room_id}: OK (oracle {report.oracle_length} steps, "
                f"{report.checkpoint_count} checkpoints, {report.reachable_scene_count} scenes)"
            )
        else:
            print(report.render())
            status = 1
    return status


def cmd_run(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        mode=args.mode,
        hint_stall_threshold=args.hint_stall_threshold,
        no_progress_limit=args.no_progress_limit,
        step_cap=args.step_cap,
        trials_per_room=args.trials,
        random_seed=args.seed,
    )
    manifest = RunManifest(
        room_paths=collect_room_paths(args.rooms),
        agent_kind=args.agent,
        out_dir=Path(args.out),
        config=config,
        endpoint=args.endpoint,
        model=args.model,
        temperature=args.temperature,
        api_key_env=args.api_key_env,
        memory_enabled=not args.ablate_memory,
        exploration_memory_enabled=not args.ablate_exploration_memory,
        feedback_enabled=not args.no_feedback,
    )
    report = run_manifest(manifest, echo=print)
    print()
    print(report.render_table())
    print(f"\nreport files written to {manifest.out_dir}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    rooms = load_rooms(collect_room_paths(args.rooms))
    ui_dir = Path(args.ui) if args.ui else _default_ui_dir()
    app = create_app(rooms, log_dir=Path(args.logs), ui_dir=ui_dir)
    if ui_dir is not None and ui_dir.exists():
        print(f"play UI at http://{args.host}:{args.port}/ui/")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _default_ui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    return candidate if candidate.exists() else None


def cmd_report(args: argparse.Namespace) -> int:
    """Recompute a metrics report from trajectory logs on disk."""
    from . import metrics as metrics_mod
    from .runner import write_report_files

    rooms = load_rooms(collect_room_paths(args.rooms))
    out_dir = Path(args.out)
    logs = sorted((out_dir / "trajectories").glob("*.jsonl"))
    if not logs:
        print(f"no trajectory logs under {out_dir / 'trajectories'}", file=sys.stderr)
        return 1
    runs = []
    config = ExperimentConfig(mode=args.mode)
    for path in logs:
        trajectory = load_trajectory(path)
        spec = rooms.get(trajectory.room_id)
        if spec is None:
            print(f"skipping {path.name}: unknown room {trajectory.room_id}", file=sys.stderr)
            continue
        runs.append(
            (trajectory.room_id, trajectory, metrics_mod.episode_metrics(trajectory, spec, config))
        )
    report = metrics_mod.build_report(
        runs, mode=args.mode, agent=runs[0][1].agent_name if runs else "unknown"
    )
    write_report_files(report, out_dir)
    print(report.render_table())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="escaperoom", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate room files and replay their oracles")
    _add_room_arg(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run an experiment over rooms and trials")
    _add_room_arg(p_run)
    p_run.add_argument("--agent", choices=["random", "base", "explorer", "scripted"], default="random")
    p_run.add_argument("--mode", choices=["exp_base", "exp_hint"], default="exp_base")
    p_run.add_argument("--trials", type=int, default=3)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", default="runs/latest", help="output directory for logs and reports")
    p_run.add_argument("--endpoint", default=None, help="chat-completion base URL")
    p_run.add_argument("--model", default="", help="model name sent to the endpoint")
    p_run.add_argument("--temperature", type=float, default=0.0)
    p_run.add_argument(
        "--api-key-env",
        default=DEFAULT_API_KEY_ENV,
        help=f"environment variable holding the API key (default {DEFAULT_API_KEY_ENV})",
    )
    p_run.add_argument("--hint-stall-threshold", type=int, default=30)
    p_run.add_argument("--no-progress-limit", type=int, default=100)
    p_run.add_argument("--step-cap", type=int, default=300)
    p_run.add_argument("--ablate-memory", action="store_true", help="replace memory with raw unique observations")
    p_run.add_argument("--ablate-exploration-memory", action="store_true")
    p_run.add_argument("--no-feedback", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_serve = sub.add_parser("serve", help="serve the session HTTP API (and play UI if built)")
    _add_room_arg(p_serve)
    p_serve.add_argument("--logs", default="runs/sessions", help="directory for session logs")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui", default=None, help="path to the built play UI (frontend/dist)")
    p_serve.set_defaults(func=cmd_serve)

    p_report = sub.add_parser("report", help="recompute the report from logs on disk")
    _add_room_arg(p_report)
    p_report.add_argument("--out", default="runs/latest")
    p_report.add_argument("--mode", choices=["exp_base", "exp_hint"], default="exp_base")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
