"""Shared fixtures and the acceptance-criterion reporting hook."""

from __future__ import annotations

import numpy as np
import pytest

# One line per acceptance criterion, printed in the terminal summary so the
# pass/fail verdicts are visible even when pytest captures stdout.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def record_criterion():
    def _record(number: int, passed: bool, detail: str):
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d}: {verdict} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def first_local_max(times: np.ndarray, values: np.ndarray, *,
                    min_height: float = 0.0, order: int = 5):
    """(time, value) of the first interior local maximum above min_height.

    A point is a local maximum when it is the largest value within +-order
    samples; this rides over sample-level jitter on slowly varying curves.
    """
    v = np.asarray(values)
    n = len(v)
    for i in range(order, n - order):
        window = v[i - order:i + order + 1]
        if v[i] >= window.max() and v[i] > min_height:
            return float(times[i]), float(v[i])
    raise AssertionError("no local maximum found above the height threshold")
