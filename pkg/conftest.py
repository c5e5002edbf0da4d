import pytest

from modules.numeric_kernel import set_precision

TEST_PRECISION = 60


@pytest.fixture(autouse=True)
def working_precision():
    """Every test starts at 60 digits; tests that change it are reset afterwards."""
    set_precision(TEST_PRECISION)
    yield TEST_PRECISION
    set_precision(TEST_PRECISION)
