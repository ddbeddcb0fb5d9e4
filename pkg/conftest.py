import pytest

from src.config.caps import Caps
from src.generator.fixtures import load_fixture


@pytest.fixture
def fx():
    """Worked-example instances by name, e.g. fx("running_P")."""
    return load_fixture


@pytest.fixture
def running_P():
    return load_fixture("running_P")


@pytest.fixture
def running_Q():
    return load_fixture("running_Q")


@pytest.fixture
def running_p():
    return load_fixture("running_p")


@pytest.fixture
def running_q():
    return load_fixture("running_q")


@pytest.fixture
def small_caps():
    return Caps(vertex_sweep_n=4, lift_sweep_v=6, lift_membership_v=8, atlas_pairs=400,
                lift_pairs=5000, rejection_draws=200)
