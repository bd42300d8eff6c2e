"""Point files (one ``x,y`` pair per line) and JSON reports."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ParseError


def parse_points(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'x,y', got {line!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: not a number pair: {line!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"line {lineno}: non-finite coordinate")
        rows.append((x, y))
    if not rows:
        raise ParseError("no points in input")
    return np.array(rows)


def read_points(path) -> np.ndarray:
    return parse_points(Path(path).read_text())


def format_points(points) -> str:
    return "".join(f"{x!r},{y!r}\n" for x, y in np.asarray(points, dtype=float).tolist())


def dumps_report(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_atomic(files: dict):
    """Write ``{path: text}`` so that either every file appears or none does."""
    staged = []
    try:
        for path, text in files.items():
            path = Path(path)
            fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            staged.append((tmp, path))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)
