"""Config Loader - key=value configuration files and run manifests."""

import json
import logging
import os
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Union

from utils.errors import ValidationError


logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TRUE_WORDS = ("1", "true", "yes", "on")
FALSE_WORDS = ("0", "false", "no", "off")


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Parse ``key = value`` lines.

    Blank lines and ``#`` comments are ignored; keys accept dashes or
    underscores.

    Raises:
        ValidationError: Unreadable file, malformed line or duplicate key.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(
            f"cannot read config file {path}: {exc}", module="cli", operation="load_config"
        ) from exc

    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValidationError(
                f"{path}:{number}: expected key = value", module="cli", operation="load_config"
            )
        key = normalize_key(key)
        if key in values:
            raise ValidationError(
                f"{path}:{number}: duplicate key '{key}'", module="cli", operation="load_config"
            )
        values[key] = value.strip()
    logger.debug(f"Loaded {len(values)} settings from {path}")
    return values


def parse_bool(text: Union[str, bool]) -> bool:
    if isinstance(text, bool):
        return text
    word = str(text).strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise ValidationError(f"not a boolean: '{text}'", module="cli", operation="load_config")


@dataclass
class RunManifest:
    """Resolved configuration and output inventory of one CLI invocation."""

    command: str
    config: Dict[str, Any]
    version: str
    started: str = field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))
    finished: str = ""
    host: str = field(default_factory=platform.node)
    python: str = field(default_factory=platform.python_version)
    outputs: List[str] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=str)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        try:
            data = json.loads(text)
            return cls(**data)
        except (json.JSONDecodeError, TypeError) as exc:
            raise ValidationError(
                f"malformed manifest: {exc}", module="cli", operation="read_manifest"
            ) from exc

    def write(self, directory: Union[str, Path]) -> Path:
        """Write (or rewrite) ``manifest.json`` into ``directory``."""
        directory = Path(directory)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / MANIFEST_NAME
            path.write_text(self.to_json(), encoding="utf-8")
        except OSError as exc:
            raise ValidationError(
                f"output directory {directory} is not writable: {exc}",
                module="cli",
                operation="write_manifest",
            ) from exc
        return path

    def complete(self, directory: Union[str, Path], outputs: List[Path]) -> Path:
        directory = Path(directory)
        self.outputs = sorted(os.path.relpath(p, directory) for p in outputs)
        self.finished = datetime.now().isoformat(timespec="seconds")
        return self.write(directory)
