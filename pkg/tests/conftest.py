"""Shared fixtures: three small hand-checkable graphs and prebuilt oracles.

g1 is a weighted 4-cycle, g3 a star, g6 a 7-vertex graph whose unique
shortest 0-4 path detours over two branch vertices once its middle edge
fails.  Everything derived from them (indexes, tables, reference oracles)
is built once per session; the graphs are tiny, but table builds are still
the slowest thing the unit tests do.
"""
import pytest

from ftoracle.graph import parse_graph
from ftoracle.query import build_oracle
from ftoracle.reference import ReferenceOracle
from ftoracle.spindex import build_index_auto

G1_TEXT = """\
4 4
0 1 1
1 2 2
2 3 1
0 3 5
"""

G3_TEXT = """\
4 3
0 1 1
0 2 1
0 3 1
"""

G6_TEXT = """\
7 8
0 1 1
1 2 1
2 3 1
3 4 1
1 5 1
5 2 3
3 6 1
6 2 3
"""


@pytest.fixture(scope="session")
def g1():
    return parse_graph(G1_TEXT)


@pytest.fixture(scope="session")
def g3():
    return parse_graph(G3_TEXT)


@pytest.fixture(scope="session")
def g6():
    return parse_graph(G6_TEXT)


@pytest.fixture(scope="session")
def idx1(g1):
    index, _, _ = build_index_auto(g1, seed=1)
    return index


@pytest.fixture(scope="session")
def idx3(g3):
    index, _, _ = build_index_auto(g3, seed=1)
    return index


@pytest.fixture(scope="session")
def idx6(g6):
    index, _, _ = build_index_auto(g6, seed=1)
    return index


@pytest.fixture(scope="session")
def oracle1_d1(g1):
    return build_oracle(g1, d=1, seed=1)


@pytest.fixture(scope="session")
def oracle1_d2(g1):
    return build_oracle(g1, d=2, seed=1)


@pytest.fixture(scope="session")
def oracle3_d1(g3):
    return build_oracle(g3, d=1, seed=1)


@pytest.fixture(scope="session")
def oracle6_d1(g6):
    return build_oracle(g6, d=1, seed=1)


@pytest.fixture(scope="session")
def oracle6_d2(g6):
    return build_oracle(g6, d=2, seed=1)


@pytest.fixture(scope="session")
def ref1(oracle1_d2):
    return ReferenceOracle(oracle1_d2.graph, oracle1_d2.index.tie)


@pytest.fixture(scope="session")
def ref3(oracle3_d1):
    return ReferenceOracle(oracle3_d1.graph, oracle3_d1.index.tie)


@pytest.fixture(scope="session")
def ref6(oracle6_d2):
    return ReferenceOracle(oracle6_d2.graph, oracle6_d2.index.tie)


def tree_path_edges(index, root, x):
    """Edge ids on the tree path root -> x, by explicit parent walking."""
    out = set()
    v = x
    while v != root:
        out.add(index.parent_edge(root, v))
        v = index.parent(root, v)
    return out
