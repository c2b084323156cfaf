import pytest

from minlinks.graph import Graph


def path(thresholds):
    n = len(thresholds)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], thresholds)


def cycle(thresholds):
    n = len(thresholds)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], thresholds)


def clique(thresholds):
    n = len(thresholds)
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)], thresholds)


def star(thresholds):
    """Node 0 is the center."""
    n = len(thresholds)
    return Graph.from_edges(n, [(0, i) for i in range(1, n)], thresholds)


K7_THRESHOLDS = (1, 1, 1, 1, 1, 6, 6)


@pytest.fixture
def k7():
    return clique(K7_THRESHOLDS)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, title, ok, detail=""):
    """Remember a pass/fail line for the summary and print it right away."""
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
