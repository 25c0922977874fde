import random

import pytest

try:
    from hypothesis import settings
    settings.register_profile("repro", derandomize=True, max_examples=60)
    settings.load_profile("repro")
except ImportError:
    pass


@pytest.fixture
def rng():
    return random.Random(20240811)
