import random
from fractions import Fraction

import pytest

from supercut.bgmc import (
    BGMCInstance,
    OptimumClass,
    brute_force_enumerate,
    classify_optimum,
    enumerate_alpha_optimal,
    enumerate_bounded,
    gmc_enumerate,
    restrict_instance,
    tau,
    within_power,
)
from supercut.errors import InfeasibleBounds, InputError, PreconditionError
from supercut.ext import INF
from supercut.generators import random_bgmc
from supercut.graphs import WeightedGraph, mask_of
from supercut.setfunctions import GeneratorSetFunction, TableSetFunction


def inst(n, edges, q=1, p=1, f=None):
    return BGMCInstance(WeightedGraph(n, edges), f or TableSetFunction(n), q, p)


def sets(masks):
    return [tuple(i for i in range(20) if m >> i & 1) for m in masks]


def test_tau():
    assert tau(1, 1) == 108
    assert tau(0, 2) == 7
    assert tau(2, Fraction(3, 2)) == 269


def test_within_power_exact():
    assert within_power(8, 2, 3)
    assert not within_power(9, 2, 3)
    assert within_power(3, 9, Fraction(1, 2))
    assert not within_power(4, 9, Fraction(1, 2))


def test_rejects_non_superadditive_table():
    f = TableSetFunction(2, {(0,): 1, (1,): 1, (0, 1): 1})
    with pytest.raises(InputError):
        BGMCInstance(WeightedGraph(2), f, 1, 1)


def test_value_is_cut_plus_f():
    f = GeneratorSetFunction(3, [([0, 1], 4)])
    h = inst(3, [(0, 1, 1), (1, 2, 2)], f=f)
    assert h.value([0, 1]) == 6
    assert h.value([0]) == 1


# optimum classification

def test_isolated_vertices_zero():
    cls = classify_optimum(inst(2, []))
    assert cls.kind == OptimumClass.ZERO
    assert cls.solution == 0b01


def test_single_edge_positive_finite():
    assert classify_optimum(inst(2, [(0, 1, 1)])).kind == OptimumClass.POSITIVE_FINITE


def test_single_infinite_edge():
    assert classify_optimum(inst(2, [(0, 1, "inf")])).kind == OptimumClass.INFINITE


def test_classify_infeasible_bounds():
    with pytest.raises(InfeasibleBounds):
        classify_optimum(inst(3, [], q=2, p=2))


def test_zero_witness_respects_size_bounds():
    # components {0}, {1,2}; q=2 forces the two-vertex component, p=2 forbids it
    h = inst(3, [(1, 2, 1)], q=1, p=2)
    h2 = inst(3, [(1, 2, 1)], q=2, p=1)
    assert classify_optimum(h).kind == OptimumClass.ZERO
    cls = classify_optimum(h2)
    assert cls.solution == 0b110
    assert cls.kind == OptimumClass.ZERO
    assert h2.value(cls.solution) == 0 and h2.is_solution(cls.solution)


# restriction

def test_restriction_charges_boundary():
    h = inst(3, [(0, 1, 3), (1, 2, 5)])
    r = restrict_instance(h, [0, 1])
    assert r.f(mask_of([1])) == 5
    assert r.f(mask_of([0])) == 0
    assert r.value([0]) == 3 == h.value([0])


def test_restriction_to_everything_is_identity():
    h = inst(3, [(0, 1, 3), (1, 2, 5)], f=GeneratorSetFunction(3, [([2], 1)]))
    r = restrict_instance(h, [0, 1, 2])
    assert r.table() == h.table()


def test_restriction_to_nothing():
    r = restrict_instance(inst(3, [(0, 1, 3)]), [])
    assert r.n == 0
    with pytest.raises(PreconditionError):
        classify_optimum(r)


# enumeration

PATH3 = [(0, 1, 1), (1, 2, 2)]


def test_path_alpha_one():
    res = enumerate_alpha_optimal(inst(3, PATH3), 1)
    assert res.lam == 1
    assert res.as_sets() == [(0,), (1, 2)]


def test_path_alpha_two():
    res = enumerate_alpha_optimal(inst(3, PATH3), 2)
    assert sorted(res.as_sets()) == [(0,), (0, 1), (1, 2), (2,)]


def test_single_vertex_rejected():
    with pytest.raises(PreconditionError):
        enumerate_alpha_optimal(inst(1, []), 1)


def test_zero_optimum_rejected():
    with pytest.raises(PreconditionError):
        enumerate_alpha_optimal(inst(2, []), 1)


def test_alpha_below_one_rejected():
    with pytest.raises(PreconditionError):
        enumerate_alpha_optimal(inst(3, PATH3), Fraction(1, 2))


def test_bounded_path_q2():
    # {a,b}=2, {b,c}=1, {a,c}=3
    res = enumerate_alpha_optimal(inst(3, PATH3, q=2, p=1), 1)
    assert res.lam == 1
    assert res.as_sets() == [(1, 2)]


def test_triangle_all_six():
    tri = [(0, 1, 1), (1, 2, 1), (0, 2, 1)]
    res = enumerate_alpha_optimal(inst(3, tri), 1)
    assert res.lam == 2
    assert len(res.solutions) == 6


def test_q0_p0_includes_empty_and_full():
    f = GeneratorSetFunction(2, [([0], 1), ([1], 1)])
    h = inst(2, [(0, 1, 1)], q=0, p=0, f=f)
    # empty set has value 0, so the classifier must report zero
    assert classify_optimum(h).kind == OptimumClass.ZERO
    assert brute_force_enumerate(h, 1).as_sets() == [()]


def test_enumerate_bounded_path4_candidates():
    h = inst(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], q=2, p=1)
    cands = sets(enumerate_bounded(h, (), 1))
    assert (0, 1) in cands and (2, 3) in cands


def test_enumerate_bounded_small_instance_empty():
    h = inst(2, [(0, 1, 1)], q=2, p=1)
    assert enumerate_bounded(h, (), 1) == []


def test_enumerate_bounded_preconditions():
    with pytest.raises(PreconditionError):
        enumerate_bounded(inst(3, PATH3, q=1), (), 1)


def test_brute_force_single_edge():
    res = brute_force_enumerate(inst(2, [(0, 1, 1)]), 1)
    assert res.lam == 1 and res.as_sets() == [(0,), (1,)]


def test_brute_force_infinite():
    res = brute_force_enumerate(inst(2, [(0, 1, "inf")]), 1)
    assert res.lam is INF and res.solutions == []


def test_gmc_enumerate_matches_oracle():
    h = inst(3, PATH3)
    assert gmc_enumerate(h, 2).solutions == brute_force_enumerate(h, 2).solutions


def test_gmc_enumerate_requires_q_p_one():
    with pytest.raises(PreconditionError):
        gmc_enumerate(inst(3, PATH3, q=2), 1)


@pytest.mark.parametrize("seed", range(40))
def test_random_engine_matches_oracle(seed):
    rng = random.Random(seed)
    h = random_bgmc(rng, n_max=9)
    if h.q > h.n - h.p or classify_optimum(h).kind != OptimumClass.POSITIVE_FINITE:
        return
    for alpha in (1, Fraction(3, 2), 2):
        got = enumerate_alpha_optimal(h, alpha)
        ref = brute_force_enumerate(h, alpha)
        assert got.lam == ref.lam
        assert got.solutions == ref.solutions
