"""Plain-text ``name = value`` parameter files shared by the model modules."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DomainError


class ParamFileError(DomainError):
    """Malformed line, unknown key, missing key or non-finite value."""


def parse_params(text: str, keys: Iterable[str], *, required: bool = True) -> dict[str, float]:
    """Parse ``name = value`` lines; ``#`` starts a comment, blank lines are skipped."""
    keys = tuple(keys)
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name = name.strip()
        if not sep or not name:
            raise ParamFileError(f"line {lineno}: expected 'name = value', got {raw!r}")
        if name not in keys:
            raise ParamFileError(f"line {lineno}: unknown key {name!r} (allowed: {', '.join(keys)})")
        if name in out:
            raise ParamFileError(f"line {lineno}: duplicate key {name!r}")
        try:
            v = float(value)
        except ValueError:
            raise ParamFileError(f"line {lineno}: {name} = {value.strip()!r} is not a number") from None
        if not math.isfinite(v):
            raise ParamFileError(f"line {lineno}: {name} must be finite")
        out[name] = v
    if required:
        missing = [k for k in keys if k not in out]
        if missing:
            raise ParamFileError(f"missing keys: {', '.join(missing)}")
    return out


def read_param_file(path, keys: Iterable[str], *, required: bool = True) -> dict[str, float]:
    return parse_params(Path(path).read_text(), keys, required=required)


def format_params(values: Mapping[str, float]) -> str:
    return "".join(f"{k} = {v!r}\n" for k, v in values.items())


def write_param_file(path, values: Mapping[str, float]) -> None:
    Path(path).write_text(format_params(values))
