"""Seeded random connected graphs."""
import pytest
from hypothesis import given, strategies as st

from ftoracle.generate import gen_gnm
from ftoracle.graph import GraphError


def test_tree_when_minimal():
    g = gen_gnm(5, 4, 10, seed=0)
    assert g.n == 5
    assert g.m == 4
    g.validate()


def test_deterministic_in_seed():
    a = gen_gnm(8, 12, 32, seed=7)
    b = gen_gnm(8, 12, 32, seed=7)
    assert a == b
    assert a.to_text() == b.to_text()


def test_seed_changes_output():
    assert gen_gnm(8, 12, 32, seed=7) != gen_gnm(8, 12, 32, seed=8)


def test_rejects_too_many_edges():
    with pytest.raises(GraphError, match="infeasible"):
        gen_gnm(4, 7, 10, seed=0)


def test_rejects_too_few_edges():
    with pytest.raises(GraphError, match="infeasible"):
        gen_gnm(5, 3, 10, seed=0)


def test_rejects_bad_scalars():
    with pytest.raises(GraphError, match="positive"):
        gen_gnm(0, 0, 10, seed=0)
    with pytest.raises(GraphError, match="positive"):
        gen_gnm(5, 4, 0, seed=0)


@given(n=st.integers(2, 12), extra=st.integers(0, 8),
       wmax=st.integers(1, 64), seed=st.integers(0, 10**9))
def test_generated_graphs_are_valid(n, extra, wmax, seed):
    m = min(n - 1 + extra, n * (n - 1) // 2)
    g = gen_gnm(n, m, wmax, seed)
    g.validate()
    assert g.m == m
    assert all(1 <= w <= wmax for _, _, w in g.edges)
