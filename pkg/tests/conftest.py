import pytest

from elgauge.complex import dualize, epsilon_torus, sphere_complex


@pytest.fixture(scope="session")
def s2():
    return dualize(sphere_complex(2))


@pytest.fixture(scope="session")
def s4():
    return dualize(sphere_complex(4))


@pytest.fixture(scope="session")
def t2():
    return dualize(epsilon_torus(2, 3))


@pytest.fixture(scope="session")
def t3():
    return dualize(epsilon_torus(3, 3))
