import numpy as np
import pytest

from locent.states import spawn_rng


@pytest.fixture
def rng():
    return spawn_rng(1234)


def random_state_vector(rng, n_qubits: int) -> np.ndarray:
    z = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return z / np.linalg.norm(z)
