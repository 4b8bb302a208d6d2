"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

RESULTS = {}


def record(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"criterion {number} {'PASS' if passed else 'FAIL'}: {title} -- {detail}"
    RESULTS[number] = line
    print(line)
    return line
