"""Deterministic rendering of nested report mappings.

Text format is an indented ``key: value`` block; lists are ``- item`` lines.
Rationals must already be strings (see :func:`abelfm.ring.format_rational`).
"""
from __future__ import annotations

import json
from fractions import Fraction

from .ring import CohClass, format_class, format_rational

FORMATS = ("text", "json")


def _plain(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, CohClass):
        return format_class(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _text(value, indent: int, lines: list[str]):
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                if not v:
                    lines.append(f"{pad}{k}: {'{}' if isinstance(v, dict) else '[]'}")
                else:
                    lines.append(f"{pad}{k}:")
                    _text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                _text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{value}")


def render(mapping: dict, fmt: str = "text") -> str:
    data = _plain(mapping)
    if fmt == "text":
        lines: list[str] = []
        _text(data, 0, lines)
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
