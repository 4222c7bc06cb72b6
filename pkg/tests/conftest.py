import re
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import random_density  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


@pytest.fixture
def rand_rho(rng):
    def make(dim=4, rank=None):
        return random_density(rng, dim, rank)

    return make


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "REPORT", None):
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.REPORT, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        terminalreporter.write_line(mod.REPORT[key])
