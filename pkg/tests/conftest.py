import pytest

from oblab.precision import digits_context


@pytest.fixture(autouse=True)
def _digits():
    with digits_context(30):
        yield


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.line())
