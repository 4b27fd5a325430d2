import numpy as np
import pytest

SIX_AGENT_THETA0_DEG = [-60.0, -45.0, -30.0, 30.0, 45.0, 60.0]
SIX_AGENT_POSITIONS = [[-1.0, -2.0], [4.0, -2.0], [-1.0, 1.0], [2.0, 3.0], [0.0, 1.0], [2.0, -6.0]]


@pytest.fixture
def six_theta0():
    """Reference six-agent initial headings, radians."""
    return np.deg2rad(SIX_AGENT_THETA0_DEG)


@pytest.fixture
def six_positions():
    return np.asarray(SIX_AGENT_POSITIONS)
