import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from chaotrace import samples
from chaotrace.ca_core import make_config
from chaotrace.embed import build_alphabets
from chaotrace.normalize import normalize

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def halt():
    return normalize(samples.SAMPLE_HALT)


@pytest.fixture(scope="session")
def loop_nosweep():
    return normalize(samples.SAMPLE_LOOP, sweep=False)


@pytest.fixture(scope="session")
def reduced():
    return samples.REDUCED


def configs(alphabet, max_center=8, max_period=3):
    """Hypothesis strategy for eventually periodic configurations."""
    letters = st.sampled_from(list(alphabet))
    period = st.lists(letters, min_size=1, max_size=max_period)
    return st.builds(make_config, period, st.lists(letters, max_size=max_center), period,
                     st.integers(-6, 6))


def r_configs(M, max_center=10):
    return configs(build_alphabets(M).R, max_center=max_center, max_period=2)
