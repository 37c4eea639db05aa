from __future__ import annotations

from pathlib import Path

import pytest

from escaperoom.model import RoomSpec, load_room

ROOMS_DIR = Path(__file__).resolve().parent.parent / "rooms"


@pytest.fixture(scope="session")
def rooms_dir() -> Path:
    return ROOMS_DIR


@pytest.fixture(scope="session")
def all_specs() -> dict[str, RoomSpec]:
    return {p.stem: load_room(p) for p in sorted(ROOMS_DIR.glob("*.json"))}


@pytest.fixture(scope="session")
def room01(all_specs) -> RoomSpec:
    return all_specs["room01"]


@pytest.fixture(scope="session")
def room02(all_specs) -> RoomSpec:
    return all_specs["room02"]


@pytest.fixture(scope="session")
def room03(all_specs) -> RoomSpec:
    return all_specs["room03"]


@pytest.fixture
def fixed_clock():
    """A fake monotonic clock advancing 1ms per call; keeps logs deterministic."""

    class _Clock:
        def __init__(self):
            self.now = 0.0

        def __call__(self) -> float:
            self.now += 0.001
            return self.now

    return _Clock()
