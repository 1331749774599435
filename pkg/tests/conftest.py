import pytest

from sarkas import default_aux, default_lexicon

# acceptance criteria results, printed as a summary block at the end
CRITERIA_RESULTS = []


class criterion:
    """Record one acceptance criterion's pass/fail for the summary."""

    def __init__(self, number, description):
        self.number = number
        self.description = description

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        CRITERIA_RESULTS.append(
            (self.number, self.description, exc_type is None))
        return False


@pytest.fixture(scope="session")
def lex():
    return default_lexicon()


@pytest.fixture(scope="session")
def aux():
    return default_aux()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, description, ok in sorted(CRITERIA_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} [{status}] "
                                    f"{description}")
