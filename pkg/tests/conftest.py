import pytest

from hpcert import Precision


@pytest.fixture(scope="session")
def p64():
    return Precision(64)


@pytest.fixture(scope="session")
def p128():
    return Precision(128)


@pytest.fixture(scope="session")
def p256():
    return Precision(256)
