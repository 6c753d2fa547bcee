"""
Package command results as versioned JSON documents.

Document layout:
  {
    "schema":  "ffcount/1",
    "command": "<subcommand>",
    ...        command-specific keys
  }

`--out FILE` writes the same bytes to FILE; `--format table` renders aligned
`key : value` lines instead of JSON.
"""

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from config import SCHEMA


def _plain(value):
    """Make a result JSON-serialisable (dataclasses with to_dict, Fractions, tuples, numpy scalars)."""
    if hasattr(value, "to_dict"):
        return _plain(value.to_dict())
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, np.generic):
        return value.item()
    return value


def build_document(command: str, payload: dict) -> dict:
    document = {"schema": SCHEMA, "command": command}
    document.update(_plain(payload))
    return document


def error_document(command: str | None, exc: Exception) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }


def render_json(document: dict) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2)


def render_table(document: dict) -> str:
    """Flattened `key : value` lines; nested keys are joined with dots."""
    rows: list[tuple[str, str]] = []

    def walk(prefix: str, value):
        if isinstance(value, dict) and value:
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            rows.append((prefix, json.dumps(value, ensure_ascii=False)))

    walk("", document)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)} : {v}" for k, v in rows)


def emit(document: dict, fmt: str = "json", out_path: str | None = None) -> str:
    """Renders the document, writes it to `out_path` if given, and returns the text."""
    text = render_table(document) if fmt == "table" else render_json(document)
    if out_path:
        out = Path(out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
    return text
