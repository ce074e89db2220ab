"""Worker-count policy. BOSEGAS_THREADS: 0 or unset = auto, else explicit."""

from __future__ import annotations

import os


def thread_count() -> int:
    raw = os.environ.get("BOSEGAS_THREADS", "").strip()
    if raw in ("", "0"):
        return min(os.cpu_count() or 1, 8)
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"BOSEGAS_THREADS must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"BOSEGAS_THREADS must be >= 0, got {value}")
    return value
