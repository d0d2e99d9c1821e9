from fractions import Fraction

import pytest

from supercut.errors import InputError
from supercut.ext import INF, ceil, fmt, ratio, scale, to_ext
from supercut.graphs import WeightedGraph, cut_weight, merge_vertices


def test_to_ext_accepts_exact_literals():
    assert to_ext("3") == 3
    assert to_ext("-2/5") == Fraction(-2, 5)
    assert to_ext("inf") is INF
    assert to_ext(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", ["1.5", "1e3", ""])
def test_to_ext_rejects_inexact_literals(bad):
    with pytest.raises(ValueError):
        to_ext(bad)


def test_to_ext_rejects_floats():
    with pytest.raises(TypeError):
        to_ext(0.5)


def test_fmt_round_trip():
    for x in (Fraction(0), Fraction(7), Fraction(-3, 4), INF):
        assert to_ext(fmt(x)) == x
    assert fmt(Fraction(6, 4)) == "3/2"


def test_inf_ordering_and_arithmetic():
    assert Fraction(10**9) < INF
    assert INF + 3 is INF
    assert 2 * INF is INF
    assert scale(0, INF) == 0
    with pytest.raises(ArithmeticError):
        _ = 0 * INF


def test_ceil_and_ratio():
    assert ceil(Fraction(7, 3)) == 3
    assert ceil(Fraction(-7, 3)) == -2
    assert ceil(INF) is INF
    assert ratio(Fraction(0), Fraction(0)) is None
    assert ratio(Fraction(1), Fraction(0)) is INF
    assert ratio(Fraction(3), Fraction(2)) == Fraction(3, 2)
    assert ratio(INF, INF) is None


def test_triangle_cut():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert cut_weight(g, [0]) == 2


def test_empty_and_full_cut_are_zero():
    g = WeightedGraph(4, [(0, 1, "3/2"), (2, 3, "inf"), (1, 2, 5)])
    assert cut_weight(g, 0) == 0
    assert cut_weight(g, g.full_mask) == 0


def test_infinite_edge_cut():
    g = WeightedGraph(2, [(0, 1, "inf")])
    assert cut_weight(g, [0]) is INF


def test_graph_rejects_bad_edges():
    with pytest.raises(InputError):
        WeightedGraph(2, [(0, 2, 1)])
    with pytest.raises(InputError):
        WeightedGraph(2, [(0, 1, -1)])


def test_self_loop_dropped_with_warning():
    with pytest.warns(UserWarning):
        g = WeightedGraph(2, [(1, 1, 4)])
    assert g.edges == {}


def test_parallel_edges_summed():
    g = WeightedGraph(2, [(0, 1, 1), (1, 0, 2)])
    assert g.edges == {(0, 1): 3}


def test_merge_drops_internal_edge():
    g = WeightedGraph(2, [(0, 1, 3)])
    assert merge_vertices(g, [0, 0]).edges == {}


def test_merge_sums_parallel_edges():
    g = WeightedGraph(3, [(0, 1, 1), (0, 2, 2)])
    merged = merge_vertices(g, [0, 1, 1])
    assert merged.n == 2
    assert merged.edges == {(0, 1): 3}


def test_merge_identity():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, "inf")])
    assert merge_vertices(g, [0, 1, 2]) == g


def test_components():
    g = WeightedGraph(4, [(0, 1, 1), (2, 3, "inf")])
    assert sorted(g.components()) == sorted([0b0011, 0b1100])
    assert sorted(g.components(infinite_only=True)) == sorted([0b0001, 0b0010, 0b1100])
