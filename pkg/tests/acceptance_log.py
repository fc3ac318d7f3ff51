"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

_RESULTS: dict[int, str] = {}


def record(number: int, ok: bool, what: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {what}"
    _RESULTS[number] = line
    print(line)


def lines() -> list[str]:
    return [_RESULTS[k] for k in sorted(_RESULTS)]
