"""Result tables and run manifests for CLI output files."""

from __future__ import annotations

import csv
import hashlib
import io
import os
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__

OUTPUT_DIR_ENV = "TRIPLETCV_OUTPUT_DIR"


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        s = f"{value:.9g}"
        return "0" if s == "-0" else s
    if value is None:
        return ""
    return str(value)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_digest: str = ""
    seed: int | None = None
    version: str = __version__
    # wall-clock time would break byte-identical reruns; honour SOURCE_DATE_EPOCH only
    timestamp: str = field(default_factory=lambda: os.environ.get("SOURCE_DATE_EPOCH", "unset"))
    metadata: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [
            f"command: {self.command}",
            f"tool_version: {self.version}",
            f"config_digest: {self.config_digest or '-'}",
            f"seed: {'-' if self.seed is None else self.seed}",
            f"timestamp: {self.timestamp}",
        ]
        out += [f"meta.{k}: {fmt(v)}" for k, v in sorted(self.metadata.items())]
        return out


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    manifest: RunManifest

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row {r!r} does not match columns {self.columns}")

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [r[k] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for line in self.manifest.lines():
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    rows = list(csv.reader(body))
    return rows[0], rows[1:]


def write_output(name: str, text: str, out_dir: str | None = None) -> str | None:
    """Write text to <out_dir>/<name> when an output directory is given or set via the environment."""
    target = out_dir or os.environ.get(OUTPUT_DIR_ENV)
    if not target:
        return None
    os.makedirs(target, exist_ok=True)
    path = os.path.join(target, name)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def text_rows(labels: Sequence[str], cells: Sequence[Sequence[str]]) -> str:
    return "".join(f"{lab}: {' '.join(c)}\n" for lab, c in zip(labels, cells))
