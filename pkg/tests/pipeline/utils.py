"""Tests utilities.

Contains dataset editing helpers.
"""


import json
from pathlib import Path
from typing import Any, Callable

SMALL_SHAPE = (8, 6)


def edit_manifest(
    manifest: Path,
    change: Callable[[dict[str, Any]], None],
) -> None:
    """Rewrite a manifest after changing its parsed content in place.

    Args:
        manifest (Path): Manifest JSON.
        change (Callable[[dict[str, Any]], None]): Mutates the content.
    """
    content = json.loads(manifest.read_text())
    change(content)
    manifest.write_text(json.dumps(content))


def person_entry(content: dict[str, Any], role: str) -> dict[str, Any]:
    """First person with a role.

    Args:
        content (dict[str, Any]): Parsed manifest.
        role (str): `training` or `target`.

    Returns:
        dict[str, Any]: The person entry.
    """
    return next(
        person for person in content['persons'] if person['role'] == role
    )


def data_files(root: Path) -> dict[str, bytes]:
    """Contents of every file under root, keyed by relative path.

    Args:
        root (Path): Directory.

    Returns:
        dict[str, bytes]: File contents.
    """
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob('*'))
        if path.is_file()
    }
