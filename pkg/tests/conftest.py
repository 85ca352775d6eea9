import pytest

from agdmm import catalog, make_field


@pytest.fixture(scope="session")
def gf5():
    return make_field(5)


@pytest.fixture(scope="session")
def gf7():
    return make_field(7)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def gf25():
    return make_field(5, 2)


@pytest.fixture(scope="session")
def gf27():
    return make_field(3, 3)


@pytest.fixture(scope="session")
def gf49():
    return make_field(7, 2)


@pytest.fixture(scope="session")
def kummer8_curve():
    return catalog.kummer_gf25_degree8()


@pytest.fixture(scope="session")
def trace9_curve():
    return catalog.trace_gf27_degree9()


@pytest.fixture(scope="session")
def matdot3_curve():
    return catalog.kummer_gf25_matdot3()
