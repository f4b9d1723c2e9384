"""Run manifests: what ran, on which inputs, producing which artifacts.

Every CLI run writes one manifest next to its outputs. The manifest carries
the fully resolved configuration (no silent defaults), the seed, sha256
digests of every input file, and the recorded argv, which is enough to
re-run the command and reproduce its numeric outputs byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import ConfigError, DataError

MANIFEST_FORMAT = "tsgan-run-v1"


def file_digest(path: str | Path) -> str:
    path = Path(path)
    if not path.exists():
        raise DataError(f"cannot digest missing file: {path}")
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return f"sha256:{h.hexdigest()}"


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunManifest:
    def __init__(self, command: str, argv: list[str], config: dict, seed: int,
                 inputs: dict, outputs: list[str], version: str = __version__,
                 started: str | None = None, finished: str | None = None):
        self.command = command
        self.argv = list(argv)
        self.config = dict(config)
        self.seed = int(seed)
        self.inputs = dict(inputs)
        self.outputs = [str(p) for p in outputs]
        self.version = version
        self.started = started or utc_now()
        self.finished = finished

    def as_dict(self) -> dict:
        return {
            "format": MANIFEST_FORMAT,
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        if d.get("format") != MANIFEST_FORMAT:
            raise DataError(f"not a run manifest (format {d.get('format')!r})")
        return cls(d["command"], d["argv"], d["config"], d["seed"], d["inputs"],
                   d["outputs"], d.get("version", "unknown"), d.get("started"),
                   d.get("finished"))


def write_manifest(manifest: RunManifest, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(manifest.to_json())
    return path


def load_manifest(path: str | Path) -> RunManifest:
    path = Path(path)
    if not path.exists():
        raise DataError(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise DataError(f"manifest {path} is not valid JSON: {e}") from None
    return RunManifest.from_dict(doc)


def replace_out_dir(argv: list[str], out_dir: str) -> list[str]:
    """Return argv with any --out-dir pair replaced by the given directory."""
    out: list[str] = []
    skip = False
    for arg in argv:
        if skip:
            skip = False
            continue
        if arg == "--out-dir":
            skip = True
            continue
        if arg.startswith("--out-dir="):
            continue
        out.append(arg)
    return out + ["--out-dir", out_dir]


def rerun(manifest_path: str | Path, out_dir: str, runner) -> int:
    """Re-dispatch a recorded run into a fresh directory via `runner(argv)`."""
    manifest = load_manifest(manifest_path)
    if not manifest.argv:
        raise ConfigError(f"manifest {manifest_path} records no argv to re-run")
    return runner(replace_out_dir(manifest.argv, out_dir))
