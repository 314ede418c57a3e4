import numpy as np
import pytest

from hyperdensity.config import validate

ACCEPTANCE_LINES: list[str] = []


def random_config(rng, g, degenerate=(), min_gap=0.06, lo=-0.95, hi=0.95):
    """Random admissible tuple; pairs listed (1-based) in ``degenerate`` coincide."""
    while True:
        pts = np.sort(rng.uniform(lo, hi, size=2 * g))
        clusters = pts.reshape(g, 2)
        gaps = clusters[1:, 0] - clusters[:-1, 1]
        if g > 1 and np.min(gaps) < min_gap:
            continue
        if np.min(clusters[:, 1] - clusters[:, 0]) < 1e-3:
            continue
        a = []
        for j, (p, q) in enumerate(clusters, 1):
            a += [p, p] if j in degenerate else [p, q]
        return validate(a)


@pytest.fixture
def rng():
    return np.random.default_rng(20161016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
