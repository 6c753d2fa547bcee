"""
Run log for the verification grid.
Appends one JSONL record per check and per erratum for later analysis.
"""

import json
from datetime import datetime, timezone
from pathlib import Path

from config import METRICS_FILE


def log_result(
    kind: str,             # "check" or "erratum"
    name: str,
    inputs: dict,
    outcome: str,          # "pass", "fail", "recorded"
    expected=None,
    got=None,
    notes: str = "",
    path: str | None = None,
):
    target = path if path is not None else METRICS_FILE
    if not target:
        return
    target = Path(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    record = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "kind": kind,
        "name": name,
        "inputs": inputs,
        "outcome": outcome,
        "expected": expected,
        "got": got,
        "notes": notes,
    }
    with open(target, "a", encoding="utf-8") as f:
        f.write(json.dumps(record, ensure_ascii=False, default=str) + "\n")
