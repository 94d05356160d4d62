from fractions import Fraction

import pytest

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _CRITERIA.append((number, title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_CRITERIA):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")


def exact_terms(targets, predictions):
    """A, B, C, alpha in exact rational arithmetic, straight from the definitions."""
    y = [Fraction(v) for v in targets]
    p = [Fraction(v) for v in predictions]
    n = len(y)
    ybar = sum(y) / n
    loo = [(sum(y) - y[i]) / (n - 1) for i in range(n)]
    a = sum((yi - pi) ** 2 for yi, pi in zip(y, p))
    b = sum((yi - ybar) ** 2 for yi in y)
    c = sum((yi - li) ** 2 for yi, li in zip(y, loo))
    return a, b, c, Fraction(n * n, (n - 1) ** 2)


@pytest.fixture
def write_csv(tmp_path):
    def write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
