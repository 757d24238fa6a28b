import os

import numpy as np
import pytest

from src.core import (
    Purification,
    random_purification,
    random_density_matrix,
    random_hermitian,
    random_unitary,
)


@pytest.fixture(scope="session")
def data_dir():
    return os.path.abspath(os.path.dirname(__file__))


@pytest.fixture
def purification_factory():
    def __factory(n=3, seed=0, normalized=False, cond_cap=None):
        return random_purification(n, seed, normalized=normalized, cond_cap=cond_cap)

    return __factory


@pytest.fixture
def density_factory():
    def __factory(n=3, seed=0, normalized=True, cond_cap=None):
        return random_density_matrix(n, seed, normalized=normalized, cond_cap=cond_cap)

    return __factory


@pytest.fixture
def hermitian_factory():
    def __factory(n=3, seed=0, scale=1.0, traceless=False):
        h = random_hermitian(n, seed, scale=scale).entries
        if traceless:
            h = h - np.trace(h) / n * np.eye(n)
        return h

    return __factory


@pytest.fixture
def unitary_factory():
    def __factory(n=3, seed=0):
        return random_unitary(n, seed)

    return __factory


@pytest.fixture
def diagonal_factory():
    """Diagonal purifications with entries uniform in a given range."""

    def __factory(n=3, seed=0, low=0.5, high=1.5, normalized=False):
        lam = np.random.default_rng(seed).uniform(low, high, n)
        if normalized:
            lam = lam / np.linalg.norm(lam)
        return Purification(np.diag(lam), normalized=normalized)

    return __factory


@pytest.fixture
def matrix_file(tmp_path):
    """Write a matrix to a JSON file under tmp_path and return the path."""
    from src.core import save_matrix

    counter = [0]

    def __factory(matrix, name=None):
        counter[0] += 1
        if name is None:
            name = f"matrix_{counter[0]}.json"
        path = str(tmp_path / name)
        save_matrix(matrix, path)
        return path

    return __factory
