"""Per-criterion outcomes collected by test_acceptance and printed at the end of the run."""

from __future__ import annotations

RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
