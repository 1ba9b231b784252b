import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def tmp_baselines(tmp_path, monkeypatch):
    path = tmp_path / "baselines.json"
    monkeypatch.setenv("MULTILAB_BASELINES", str(path))
    return path


# acceptance criteria report one line each at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    def report(number: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
