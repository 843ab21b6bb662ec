"""Collect and deduplicate WebAssembly binaries from project trees.

Stored files are content-addressed: `<sha256>.wasm`. An `index.json`
in the dataset directory maps each hash to every origin that produced
it. Text-format modules can be converted through an external tool, and
project builds can be driven through configurable wrapper commands.
"""

from __future__ import annotations

import hashlib
import json
import os
import shlex
import shutil
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .report import SCHEMA_VERSION, canonical_json

DEFAULT_WAT2WASM = "wat2wasm --enable-all {in} -o {out}"
DEFAULT_CMAKE_WRAPPER = "emcmake cmake ."
DEFAULT_MAKE_WRAPPER = "emmake make"
DEFAULT_BUILD_TIMEOUT = 600.0
OUTPUT_TRUNCATE = 4096

INDEX_NAME = "index.json"
LOCK_NAME = ".lock"


class IntegrityError(RuntimeError):
    """A stored file's bytes no longer match its hash name."""


@dataclass
class BinaryIndex:
    # hash -> sorted list of {"repo": ..., "path": ...}
    entries: dict[str, list[dict]] = field(default_factory=dict)
    wat_converted: int = 0
    wat_unconverted: list[dict] = field(default_factory=list)  # {"path", "stderr"}

    def add_origin(self, digest: str, repo: str, path: str):
        origins = self.entries.setdefault(digest, [])
        origin = {"repo": repo, "path": path}
        if origin not in origins:
            origins.append(origin)
            origins.sort(key=lambda o: (o["repo"], o["path"]))

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "entries": [
                {"hash": h, "origins": self.entries[h]}
                for h in sorted(self.entries)
            ],
            "wat": {
                "converted": self.wat_converted,
                "unconverted": sorted(self.wat_unconverted, key=lambda u: u["path"]),
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BinaryIndex":
        idx = cls()
        for entry in d.get("entries", []):
            idx.entries[entry["hash"]] = list(entry["origins"])
        wat = d.get("wat", {})
        idx.wat_converted = wat.get("converted", 0)
        idx.wat_unconverted = list(wat.get("unconverted", []))
        return idx


def load_index(dest: Path) -> BinaryIndex:
    path = Path(dest) / INDEX_NAME
    if path.exists():
        return BinaryIndex.from_dict(json.loads(path.read_text(encoding="utf-8")))
    return BinaryIndex()


def save_index(dest: Path, index: BinaryIndex):
    path = Path(dest) / INDEX_NAME
    tmp = path.with_suffix(".json.tmp")
    tmp.write_bytes(canonical_json(index.to_dict()))
    os.replace(tmp, path)


class _DatasetLock:
    """Single-writer lock file; store_dedup runs are serialized per dest dir."""

    def __init__(self, dest: Path, timeout: float = 30.0):
        self.path = Path(dest) / LOCK_NAME
        self.timeout = timeout

    def __enter__(self):
        deadline = time.monotonic() + self.timeout
        while True:
            try:
                fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                os.close(fd)
                return self
            except FileExistsError:
                if time.monotonic() >= deadline:
                    raise TimeoutError(f"dataset lock busy: {self.path}")
                time.sleep(0.05)

    def __exit__(self, *exc):
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass


def scan_binaries(root) -> list[tuple[Path, str]]:
    """All .wasm/.wat files under root (case-insensitive), sorted by path."""
    root = Path(root)
    out = []
    for path in sorted(root.rglob("*")):
        try:
            if not path.is_file():
                continue
        except OSError as err:
            print(f"warning: cannot stat {path}: {err}", file=sys.stderr)
            continue
        suffix = path.suffix.lower()
        if suffix == ".wasm":
            out.append((path, "wasm"))
        elif suffix == ".wat":
            out.append((path, "wat"))
    return out


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def store_dedup(files, dest, repo_id: str, root=None) -> BinaryIndex:
    """Copy .wasm files into dest under their content hash; idempotent."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    with _DatasetLock(dest):
        index = load_index(dest)
        for path in files:
            path = Path(path)
            digest = sha256_file(path)
            target = dest / f"{digest}.wasm"
            if target.exists():
                if sha256_file(target) != digest:
                    raise IntegrityError(
                        f"{target} exists but its content does not hash to {digest}"
                    )
            else:
                tmp = dest / f".{digest}.tmp"
                shutil.copyfile(path, tmp)
                os.replace(tmp, target)
            rel = (
                path.relative_to(root).as_posix()
                if root is not None
                else path.as_posix()
            )
            index.add_origin(digest, repo_id, rel)
        save_index(dest, index)
    return index


@dataclass
class WatConversion:
    converted: list[Path] = field(default_factory=list)  # produced .wasm files
    unconverted: list[dict] = field(default_factory=list)  # {"path", "stderr"}
    skipped: list[Path] = field(default_factory=list)  # converter unavailable


def convert_wat(files, work_dir, converter: str | None = DEFAULT_WAT2WASM) -> WatConversion:
    """Run each .wat through the converter template; failures are data."""
    result = WatConversion()
    if converter:
        tool = shlex.split(converter.replace("{in}", "IN").replace("{out}", "OUT"))[0]
        if shutil.which(tool) is None:
            converter = None
    if not converter:
        result.skipped = [Path(f) for f in files]
        return result
    work_dir = Path(work_dir)
    work_dir.mkdir(parents=True, exist_ok=True)
    for i, path in enumerate(files):
        path = Path(path)
        out_path = work_dir / f"wat-{i}-{path.stem}.wasm"
        cmd = [
            part.replace("{in}", str(path)).replace("{out}", str(out_path))
            for part in shlex.split(converter)
        ]
        try:
            proc = subprocess.run(cmd, capture_output=True, timeout=120)
        except (OSError, subprocess.TimeoutExpired) as err:
            result.unconverted.append({"path": path.as_posix(), "stderr": str(err)})
            continue
        if proc.returncode == 0 and out_path.exists():
            result.converted.append(out_path)
        else:
            stderr = proc.stderr.decode("utf-8", errors="replace")[:OUTPUT_TRUNCATE]
            result.unconverted.append({"path": path.as_posix(), "stderr": stderr})
    return result


@dataclass
class BuildStep:
    command: str
    status: str  # ok | failed | timeout | toolchain-unavailable
    exit_code: int | None
    duration: float
    output: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "status": self.status,
            "exit_code": self.exit_code,
            "duration": round(self.duration, 3),
            "output": self.output,
        }


@dataclass
class BuildLog:
    directories: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "directories": self.directories}


def _run_step(command: str, cwd: Path, timeout: float) -> BuildStep:
    argv = shlex.split(command)
    if not argv or shutil.which(argv[0]) is None:
        return BuildStep(command, "toolchain-unavailable", None, 0.0, "")
    started = time.monotonic()
    try:
        proc = subprocess.run(argv, cwd=cwd, capture_output=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return BuildStep(command, "timeout", None, time.monotonic() - started, "")
    except OSError as err:
        return BuildStep(command, "failed", None, time.monotonic() - started, str(err))
    output = (proc.stdout + proc.stderr).decode("utf-8", errors="replace")
    return BuildStep(
        command,
        "ok" if proc.returncode == 0 else "failed",
        proc.returncode,
        time.monotonic() - started,
        output[:OUTPUT_TRUNCATE],
    )


def orchestrate_build(
    repo_root,
    cmake_wrapper: str = DEFAULT_CMAKE_WRAPPER,
    make_wrapper: str = DEFAULT_MAKE_WRAPPER,
    timeout: float = DEFAULT_BUILD_TIMEOUT,
) -> BuildLog:
    """Run wrapper builds for every CMake/Make directory under repo_root."""
    repo_root = Path(repo_root)
    log = BuildLog()
    cmake_dirs = sorted({p.parent for p in repo_root.rglob("CMakeLists.txt")})
    make_dirs = sorted(
        {p.parent for p in repo_root.rglob("*") if p.is_file() and p.name == "Makefile"}
    )
    seen = set()
    for d in cmake_dirs:
        steps = [_run_step(cmake_wrapper, d, timeout)]
        if (d / "Makefile").exists():
            steps.append(_run_step(make_wrapper, d, timeout))
        seen.add(d)
        log.directories.append(
            {
                "dir": d.relative_to(repo_root).as_posix() or ".",
                "steps": [s.to_dict() for s in steps],
            }
        )
    for d in make_dirs:
        if d in seen:
            continue
        steps = [_run_step(make_wrapper, d, timeout)]
        log.directories.append(
            {
                "dir": d.relative_to(repo_root).as_posix() or ".",
                "steps": [s.to_dict() for s in steps],
            }
        )
    if not log.directories:
        log.directories.append({"dir": ".", "status": "no-build-system", "steps": []})
    return log
