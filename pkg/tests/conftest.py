import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("repo", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("repo")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def mat3():
    return arrays(np.float64, (3, 3), elements=finite)


def vec3():
    return arrays(np.float64, 3, elements=finite)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
