import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def desk_ensemble():
    """100 mixed-decay 576x1024 matrices, shared by the slow tests."""
    from specbudget.synthesis import make_ensemble, mixed_profiles

    return make_ensemble(mixed_profiles(100, 576, 2024), 576, 1024, 2024)


@pytest.fixture(scope="session")
def flat_heavy_ensemble():
    from specbudget.synthesis import make_ensemble, mixed_profiles

    return make_ensemble(mixed_profiles(40, 576, 2025, flat_share=0.7), 576, 1024, 2025)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def criterion_log(request):
    """Collects one line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
