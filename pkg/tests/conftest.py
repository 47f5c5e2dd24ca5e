import pytest

from magicmodels.groups import Perm, PermGroup


def pg(degree, *cycle_sets):
    return PermGroup.from_generators(
        [Perm.from_cycles(degree, cs) for cs in cycle_sets], degree=degree)


@pytest.fixture
def s3():
    return pg(3, [(1, 2)], [(1, 2, 3)])


@pytest.fixture
def d4():
    return pg(4, [(1, 2, 3, 4)], [(1, 3)])


@pytest.fixture
def z3():
    return pg(3, [(1, 2, 3)])


@pytest.fixture
def klein4():
    return pg(4, [(1, 2), (3, 4)], [(1, 3), (2, 4)])


@pytest.fixture
def klein6():
    return pg(6, [(1, 2), (3, 4)], [(1, 2), (5, 6)])
