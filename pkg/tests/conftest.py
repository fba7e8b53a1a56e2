from pathlib import Path

import pytest

from sentimen.corpus import LabeledSample, SentimentLabel
from sentimen.datasets import synthetic_reviews_path

DATA = Path(__file__).parent / "data"

# filled by tests/test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def synthetic_csv():
    return synthetic_reviews_path()


def sample(text, label, tokens=()):
    return LabeledSample(text, SentimentLabel(label), tuple(tokens))
