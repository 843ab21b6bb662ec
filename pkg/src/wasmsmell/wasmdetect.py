"""Classify a repository as WebAssembly-targeting.

Three textual heuristics, any one of which is decisive:
  H1: a WebAssembly compiler invoked from a build script,
  H2: an Emscripten API header included from C/C++ source,
  H3: the JavaScript WebAssembly API used from JS/TS/HTML.
"""

from __future__ import annotations

import fnmatch
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import SOURCE_EXTENSIONS
from .preprocess import preprocess_lite

BUILD_SCRIPT_PATTERNS = ("makefile*", "cmakelists.txt", "*.mk", "*.sh", "*.cmake")
JS_EXTENSIONS = (".js", ".mjs", ".ts", ".html")
WASM_HEADERS = ("emscripten.h", "html5.h")

MAX_TEXT_FILE_BYTES = 1024 * 1024  # larger files are considered binary
BINARY_SNIFF_BYTES = 8192

_H1_RE = re.compile(r"\bemcc\b|\bem\+\+|-target cheerp-wasm|--target=wasm32")
_H3_RE = re.compile(
    r"WebAssembly\.(?:instantiateStreaming|instantiate|compileStreaming|compile|Module|Instance)\b"
)


@dataclass
class Hit:
    file: str  # repo-relative, '/'-separated
    line: int  # 1-based
    text: str  # matched token

    def to_dict(self) -> dict:
        return {"file": self.file, "line": self.line, "text": self.text}


@dataclass
class RepoEvidence:
    h1_build_scripts: list[Hit] = field(default_factory=list)
    h2_headers: list[Hit] = field(default_factory=list)
    h3_js_api: list[Hit] = field(default_factory=list)

    @property
    def targeting(self) -> bool:
        return bool(self.h1_build_scripts or self.h2_headers or self.h3_js_api)

    def to_dict(self) -> dict:
        return {
            "verdict": "targeting" if self.targeting else "not-targeting",
            "h1_build_scripts": [h.to_dict() for h in self.h1_build_scripts],
            "h2_headers": [h.to_dict() for h in self.h2_headers],
            "h3_js_api": [h.to_dict() for h in self.h3_js_api],
        }


def _read_text(path: Path) -> str | None:
    """Read a file unless it looks binary; None means skip."""
    try:
        if path.stat().st_size > MAX_TEXT_FILE_BYTES:
            return None
        data = path.read_bytes()
    except OSError as err:
        print(f"warning: cannot read {path}: {err}", file=sys.stderr)
        return None
    if b"\0" in data[:BINARY_SNIFF_BYTES]:
        return None
    return data.decode("utf-8", errors="replace")


def _walk_files(root: Path) -> list[Path]:
    return sorted(p for p in root.rglob("*") if p.is_file())


def _rel(root: Path, path: Path) -> str:
    return path.relative_to(root).as_posix()


def scan_build_scripts(root: Path) -> list[Hit]:
    hits = []
    for path in _walk_files(root):
        name = path.name.lower()
        if not any(fnmatch.fnmatch(name, pat) for pat in BUILD_SCRIPT_PATTERNS):
            continue
        text = _read_text(path)
        if text is None:
            continue
        for lineno, line in enumerate(text.splitlines(), start=1):
            for m in _H1_RE.finditer(line):
                hits.append(Hit(_rel(root, path), lineno, m.group()))
    return hits


def scan_sources(root: Path) -> list[Hit]:
    hits = []
    for path in _walk_files(root):
        if path.suffix.lower() not in SOURCE_EXTENSIONS:
            continue
        text = _read_text(path)
        if text is None:
            continue
        for include in preprocess_lite(text).includes:
            final = include.target.replace("\\", "/").rsplit("/", 1)[-1]
            if final in WASM_HEADERS:
                hits.append(Hit(_rel(root, path), include.line, include.target))
    return hits


def scan_js(root: Path) -> list[Hit]:
    hits = []
    for path in _walk_files(root):
        if path.suffix.lower() not in JS_EXTENSIONS:
            continue
        text = _read_text(path)
        if text is None:
            continue
        for lineno, line in enumerate(text.splitlines(), start=1):
            for m in _H3_RE.finditer(line):
                hits.append(Hit(_rel(root, path), lineno, m.group()))
    return hits


def classify_repo(root) -> RepoEvidence:
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    evidence = RepoEvidence(
        h1_build_scripts=scan_build_scripts(root),
        h2_headers=scan_sources(root),
        h3_js_api=scan_js(root),
    )
    for hit_list in (evidence.h1_build_scripts, evidence.h2_headers, evidence.h3_js_api):
        hit_list.sort(key=lambda h: (h.file, h.line))
    return evidence
