from __future__ import annotations

import functools

CRITERIA: dict[int, tuple[str, bool, str]] = {}


def criterion(number: int, title: str):
    """Record the outcome of an acceptance test for the terminal summary."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                first = str(exc).splitlines()[0] if str(exc) else ""
                previous = CRITERIA.get(number)
                if previous and not previous[1]:
                    first = f"{previous[2]}; {first}"
                CRITERIA[number] = (title, False, first)
                raise
            # parametrized criteria: one failing case fails the criterion
            if number not in CRITERIA or CRITERIA[number][1]:
                CRITERIA[number] = (title, True, detail or "")

        return run

    return wrap


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, ok, detail = CRITERIA[number]
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
