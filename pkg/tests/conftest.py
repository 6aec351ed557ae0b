import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_product_state(rng, n):
    """Haar-random single-qubit factors, kron'd little-endian."""
    amps = np.array([1.0], dtype=complex)
    for _ in range(n):
        theta, phi = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        qubit = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
        amps = np.kron(qubit, amps)
    return amps


def random_state(rng, n):
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return amps / np.linalg.norm(amps)
