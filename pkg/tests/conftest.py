import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ranklab import Mat, PrimeField

settings.register_profile("ranklab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ranklab")


def mul(p, *arrays):
    """Exact product of int arrays mod p, via Python integers."""
    out = np.asarray(arrays[0]).astype(object)
    for a in arrays[1:]:
        out = out.dot(np.asarray(a).astype(object)) % p
    return (out % p).astype(np.int64)


def rand_mat(rng, m, n, p):
    return Mat(PrimeField(p), rng.integers(0, p, size=(m, n), dtype=np.int64))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
