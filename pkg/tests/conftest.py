import pytest

from leafclass.reeb import reeb_presentation

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (title, passed, detail)
    print(f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title} {detail}".rstrip())


@pytest.fixture(scope="session")
def reeb3():
    return reeb_presentation(order=3)


@pytest.fixture(scope="session")
def reeb4():
    return reeb_presentation(order=4)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}"
        terminalreporter.write_line(f"{line}  {detail}".rstrip())
