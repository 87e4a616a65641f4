"""Access to the bundled example problem files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

_FIXTURE_DIR = "fixtures"


def list_bundled() -> list[str]:
    """Names of the bundled problem files, without extension."""
    root = resources.files(__package__) / _FIXTURE_DIR
    return sorted(
        entry.name[: -len(".json")]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def bundled_problem(name: str) -> Path:
    """Filesystem path of a bundled problem file.

    Accepts the bare name (e.g. "rotation_2d") or the full file name.
    """
    if not name.endswith(".json"):
        name = name + ".json"
    entry = resources.files(__package__) / _FIXTURE_DIR / name
    path = Path(str(entry))
    if not path.exists():
        raise FileNotFoundError(
            f"no bundled problem named {name!r}; available: {list_bundled()}"
        )
    return path
