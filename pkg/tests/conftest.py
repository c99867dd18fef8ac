import pytest

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        _acceptance.append((marker.args[0], marker.args[1], report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    merged = {}
    for number, title, passed, duration in _acceptance:
        _, ok, runs, total = merged.get(number, (title, True, 0, 0.0))
        merged[number] = (title, ok and passed, runs + 1, total + duration)
    for number, (title, ok, runs, total) in sorted(merged.items()):
        cases = f", {runs} cases" if runs > 1 else ""
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({total:.1f}s{cases})")
