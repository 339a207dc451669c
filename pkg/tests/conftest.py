import pytest

_ACCEPTANCE: dict[str, tuple[bool | None, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--bellcore", action="store", default=None,
                     help="packet-count trace (10 ms bins) of the Bellcore MER Ethernet capture")


def _label(ok):
    return "SKIP" if ok is None else "PASS" if ok else "FAIL"


@pytest.fixture
def criterion():
    """Record one acceptance criterion's outcome for the terminal summary."""

    def record(key, ok, detail):
        """``ok=None`` marks a criterion that could not run."""
        _ACCEPTANCE[key] = (ok, detail)
        print(f"[{_label(ok)}] {key}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: (int(k.split()[0].rstrip("ab")), k)):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"[{_label(ok)}] {key}: {detail}")
