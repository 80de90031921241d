import pytest

from covdyn.bundled import e_odo, e_r2, two_odometer


@pytest.fixture(scope="session")
def er2_deep():
    """Depth-9 rank-2 covering shared by the heavier tests."""
    return e_r2(9)


@pytest.fixture(scope="session")
def er2_small():
    return e_r2(4)


@pytest.fixture(scope="session")
def odo8():
    return e_odo(8)


@pytest.fixture(scope="session")
def odometer6():
    return two_odometer(6)
