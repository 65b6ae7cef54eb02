from pathlib import Path

import pytest

from acceptance_log import LINES as ACCEPTANCE_LINES
from subscore.srt import load_srt

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def fig1():
    """(hypothesis, reference) subtitle files of the worked example."""
    return load_srt(DATA / "fig1_hyp.srt"), load_srt(DATA / "fig1_ref.srt")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
