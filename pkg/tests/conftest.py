import os

import pytest

from fatoukit import backends


@pytest.fixture(scope="session", autouse=True)
def _default_backend():
    """Tests run on the numpy backend unless a test opts in to numba;
    backend-parity tests switch explicitly."""
    backends.set_backend(os.environ.get("FATOUKIT_TEST_BACKEND", "numpy"))
    yield
    backends.set_backend("auto")


@pytest.fixture
def numba_available():
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False
