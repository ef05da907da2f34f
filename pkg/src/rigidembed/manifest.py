"""Run manifests: seeded, replayable command provenance."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunManifest:
    command: str
    arguments: dict
    seed: int | None
    version: str
    started: str = field(default_factory=_now)
    finished: str | None = None
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def add_input(self, path):
        self.inputs[str(path)] = file_digest(path)

    def add_output(self, path):
        self.outputs[str(path)] = file_digest(path)

    def finish(self):
        self.finished = _now()

    def write(self, path):
        self.finish()
        Path(path).write_text(
            json.dumps(self.__dict__, indent=2, default=str) + "\n"
        )
