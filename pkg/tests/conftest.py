import os
import sys

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(int(os.environ.get("TANGENTLOCI_SEED", "0")))


def sphere_matrix(c, r):
    """Sphere |x - c|^2 = r^2 as a 4x4 matrix in homogeneous coordinates."""
    c = np.asarray(c, dtype=float)
    m = np.eye(4)
    m[:3, 3] = m[3, :3] = -c
    m[3, 3] = c @ c - r * r
    return m


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
