"""Service configuration: JSON file plus environment overrides.

Precedence is env > file > default.  Environment variables are
SPINEPLAN_HOST, SPINEPLAN_PORT, SPINEPLAN_DETECTOR_COMMAND,
SPINEPLAN_BBOX_DIR and SPINEPLAN_FIXTURE_ROOT; the file uses the same
names lower-cased without the prefix.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "SPINEPLAN_"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    # command template with {image} and {outdir} placeholders
    detector_command: str | None = None
    # directory of precomputed <stem>.txt files; used when no command is set
    bbox_dir: str | None = None
    # directory served as static files so the UI can display the images
    fixture_root: str | None = None


def load_config(
    path: str | Path | None = None, env: dict[str, str] | None = None
) -> ServiceConfig:
    """Build the effective config from defaults, optional file, and env."""
    if env is None:
        env = dict(os.environ)
    values: dict[str, object] = {}
    if path is not None:
        try:
            body = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as err:
            raise ValueError(f"cannot read config {path}: {err}") from err
        if not isinstance(body, dict):
            raise ValueError(f"config {path} must be a JSON object")
        known = {f.name for f in fields(ServiceConfig)}
        unknown = set(body) - known
        if unknown:
            raise ValueError(f"config {path} has unknown keys: {sorted(unknown)}")
        values.update(body)
    for f in fields(ServiceConfig):
        raw = env.get(ENV_PREFIX + f.name.upper())
        if raw is not None:
            values[f.name] = raw
    if "port" in values:
        try:
            values["port"] = int(values["port"])
        except (TypeError, ValueError):
            raise ValueError(f"port must be an integer, got {values['port']!r}") from None
    return ServiceConfig(**values)  # type: ignore[arg-type]
