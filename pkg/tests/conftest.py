import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record ``(number, ok, detail)`` parts; summarized once per criterion at the end."""
    def record(number, ok, detail):
        _ACCEPTANCE.setdefault(number, []).append((bool(ok), detail))
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[number]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(("" if ok else "[failed] ") + d for ok, d in parts)
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {detail}")
