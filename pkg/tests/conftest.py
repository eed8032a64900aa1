import pytest

# one line per acceptance criterion, printed after the run
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, label, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {label}  {detail}")


@pytest.fixture
def record():
    def rec(k, ok, label, detail=""):
        CRITERIA[k] = (bool(ok), label, detail)
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {label}  {detail}")

    return rec
