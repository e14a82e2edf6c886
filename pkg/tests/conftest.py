import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from netohm.network import build_network

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_network(seed: int, n_min=3, n_max=10):
    """Connected graph: a random spanning tree plus a few extra edges.

    At least one boundary and one interior node; every interior node is
    connected to the boundary, so the interior Laplacian block is invertible
    for positive weights.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    ids = list(range(1, n + 1))
    pairs = set()
    for k in range(1, n):
        j = int(rng.integers(0, k))
        pairs.add((ids[j], ids[k]))
    for _ in range(int(rng.integers(0, n))):
        a, b = rng.choice(n, size=2, replace=False)
        if (ids[b], ids[a]) not in pairs:
            pairs.add((ids[a], ids[b]))
    n_b = int(rng.integers(1, n))
    flags = np.zeros(n, dtype=bool)
    flags[rng.choice(n, size=n_b, replace=False)] = True
    net = build_network(ids, flags.tolist(), sorted(pairs))
    return net, rng


seeds = st.integers(min_value=0, max_value=2**31 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
