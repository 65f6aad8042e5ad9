"""Reproducibility manifests and flat-key config files.

A run manifest records everything needed to reproduce a command: the resolved
configuration (after applying precedence flags > config file > defaults), the
grid, the seed, the code version, and the headline results.  Re-running the
same manifest reproduces every number bit-for-bit on the same build; wall
time is recorded for the log but takes no part in any output file.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import InvalidInputError

__all__ = ["RunManifest", "load_config_file", "write_csv"]

CODE_VERSION = "0.1.0"


@dataclass
class RunManifest:
    command: str
    options: dict
    grid_n: int
    grid_l: float
    alpha: float | None = None
    q: float | None = None
    r: float | None = None
    window: dict = field(default_factory=dict)
    seed: int | None = None
    code_version: str = CODE_VERSION
    wall_time_s: float = 0.0
    results: dict = field(default_factory=dict)
    provenance_notes: str = ""
    outputs: list = field(default_factory=list)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path

    @staticmethod
    def load(path: str | Path) -> "RunManifest":
        data = json.loads(Path(path).read_text())
        return RunManifest(**data)


def load_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"malformed config line: {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path: str | Path, rows: list[dict], manifest_name: str) -> Path:
    """UTF-8 CSV with a header row; every row names its manifest.

    A JSON file with the same stem mirrors the rows exactly.
    """
    path = Path(path)
    mirror = [{**{k: v for k, v in row.items()}, "manifest": manifest_name} for row in rows]
    path.with_suffix(".json").write_text(
        json.dumps(mirror, indent=2, default=float) + "\n", encoding="utf-8"
    )
    if not rows:
        path.write_text("manifest\n" + manifest_name + "\n", encoding="utf-8")
        return path
    keys: list[str] = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    lines = [",".join(keys + ["manifest"])]
    for row in rows:
        lines.append(",".join(_fmt(row.get(k, "")) for k in keys) + "," + manifest_name)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
