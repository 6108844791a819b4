import pytest

from subfree.graph import build_graph, complete_graph, cycle_graph, disjoint_union, path_graph


def two_triangles():
    return disjoint_union(complete_graph(3), complete_graph(3))


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def star():
    return build_graph(4, [(0, 1), (0, 2), (0, 3)])
