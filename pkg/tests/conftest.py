import numpy as np
import pytest

from qmarginals import choi_state, extremal_qubit_qutrit_map


@pytest.fixture(scope="session")
def example_map():
    return extremal_qubit_qutrit_map()


@pytest.fixture(scope="session")
def example_state(example_map):
    return choi_state(example_map)


@pytest.fixture(scope="session")
def example_matrix():
    """Closed form of the bundled example's composite state."""
    c = 1.0 / (3.0 * np.sqrt(2.0))
    mat = np.zeros((6, 6), dtype=complex)
    mat[1, 1] = mat[4, 4] = 1.0 / 6.0
    mat[2, 2] = mat[3, 3] = 1.0 / 3.0
    mat[1, 3] = mat[3, 1] = mat[2, 4] = mat[4, 2] = c
    return mat
