import pytest

_acceptance: list[tuple[str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    label = marker.args[0]
    _acceptance.append((label, "PASS" if rep.passed else "FAIL", rep.duration))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, secs in _acceptance:
        terminalreporter.write_line(f"{status}  {label}  ({secs:.1f}s)")
