import pytest

from mbonacci.substitution import prefix

_ACCEPTANCE = []


def naive_sigma(word: str, m: int) -> str:
    """String-rewriting oracle for the Rauzy substitution (m <= 9)."""
    images = {str(d): "1" + str(d + 1) for d in range(1, m)}
    images[str(m)] = "1"
    return "".join(images[c] for c in word)


def naive_iterate(m: int, n: int) -> str:
    w = "1"
    for _ in range(n):
        w = naive_sigma(w, m)
    return w


@pytest.fixture(scope="session")
def fib_prefix():
    """First 10^6 digits of the Fibonacci word."""
    return prefix(2, 10**6).digits


@pytest.fixture(scope="session")
def trib_prefix():
    return prefix(3, 2 * 10**5).digits


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        _ACCEPTANCE.append((marker, report.outcome, report.duration))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    mark = item.get_closest_marker("acceptance")
    if mark:
        item.user_properties.append(("acceptance", (mark.args[0], mark.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome, duration in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({duration:.2f}s)")
