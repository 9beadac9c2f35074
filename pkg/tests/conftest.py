import pytest

from reebcob.fixtures import load_fixture

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fig2():
    return load_fixture("fig2")[0]


@pytest.fixture(scope="session")
def fig2_universe():
    return load_fixture("fig2")[1]


@pytest.fixture(scope="session")
def sphere():
    return load_fixture("sphere")[0]


@pytest.fixture(scope="session")
def bundle():
    return load_fixture("bundle")[0]


@pytest.fixture
def record():
    def _record(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
