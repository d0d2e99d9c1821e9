import random
from fractions import Fraction
from itertools import product

import pytest

from supercut.errors import InputError, LanguageError, ModeError
from supercut.ext import INF
from supercut.generators import random_language, random_lower_bounded
from supercut.graphs import WeightedGraph
from supercut.relations import WeightedRelation
from supercut.vcsp import (
    Language,
    Mode,
    VCSPInstance,
    bnb_solve,
    brute_solve,
    constant_relation,
    cut_relation,
    evaluate,
    fix_language,
    fix_relation,
    make_rcut_language,
    negate_language,
    negate_relation,
    rway_cut_instance,
    value_of,
)

CUT2 = cut_relation(2)


def lang2(**rels):
    return Language(2, rels)


def test_relation_row_major():
    rel = WeightedRelation(2, 3, range(9))
    assert rel(1, 2) == 5
    assert rel((2, 0)) == 6


def test_relation_table_length_checked():
    with pytest.raises(InputError):
        WeightedRelation(2, 2, [0, 1, 1])


def test_language_rejects_mixed_domains():
    with pytest.raises(LanguageError):
        Language(2, {"a": cut_relation(3)})


def test_language_arity_cap():
    with pytest.raises(LanguageError):
        Language(2, {"a": WeightedRelation(3, 2, [0] * 8)}, arity_cap=2)


def test_empty_instance_value_zero():
    inst = VCSPInstance(2, lang2(cut=CUT2))
    assert evaluate(inst, (0, 1)) == 0


def test_weighted_cut_lookup():
    inst = VCSPInstance(2, lang2(cut=CUT2), [(3, "cut", (0, 1))])
    assert evaluate(inst, (0, 1)) == 3


def test_constant_relation_infinite_off_label():
    lang = make_rcut_language(2)
    inst = VCSPInstance(1, lang, [(1, "rho1", (0,))])
    assert evaluate(inst, (0,)) is INF
    assert evaluate(inst, (1,)) == 0


def test_mode_violation_raises():
    inst = VCSPInstance(2, lang2(cut=CUT2), [], Mode.surjective())
    with pytest.raises(ModeError):
        evaluate(inst, (0, 0))
    assert value_of(inst, (0, 0)) == 0


def test_unknown_relation_and_bad_scope():
    with pytest.raises(LanguageError):
        VCSPInstance(2, lang2(cut=CUT2), [(1, "nope", (0, 1))])
    with pytest.raises(InputError):
        VCSPInstance(2, lang2(cut=CUT2), [(1, "cut", (0,))])


def test_surjective_zero_objective():
    inst = VCSPInstance(2, lang2(cut=CUT2), [], Mode.surjective())
    res = brute_solve(inst)
    assert res.value == 0
    assert res.assignments == [(0, 1), (1, 0)]


def test_rway_cut_path():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1)])
    res = brute_solve(rway_cut_instance(g, 2))
    assert res.value == 1


def test_lower_bounds_exceeding_n_infeasible():
    inst = VCSPInstance(2, lang2(cut=CUT2), [], Mode.lower_bounded([2, 1]))
    res = brute_solve(inst)
    assert res.status == "infeasible" and res.value is INF


def test_infinite_minimum_is_infeasible():
    lang = make_rcut_language(2)
    inst = VCSPInstance(1, lang, [(1, "rho0", (0,)), (1, "rho1", (0,))])
    assert brute_solve(inst).status == "infeasible"


@pytest.mark.parametrize("seed", range(25))
def test_bnb_matches_brute(seed):
    rng = random.Random(seed)
    lang = random_language(rng, "SDS" if seed % 2 else "SEDS")
    inst = random_lower_bounded(rng, lang, n_max=7)
    a, b = bnb_solve(inst), brute_solve(inst)
    assert (a.status, a.value, a.assignments) == (b.status, b.value, b.assignments)


def test_fix_nothing_pinned_drops_label_zero():
    rel = WeightedRelation(2, 3, range(9))
    fixed = fix_relation(rel, [])
    assert fixed.domain_size == 2
    assert fixed.values == (4, 5, 7, 8)


def test_fix_everything_pinned():
    rel = WeightedRelation(2, 3, [7] + [0] * 8)
    fixed = fix_relation(rel, [0, 1])
    assert fixed.arity == 0 and fixed.values == (7,)


def test_fix_cut_second_position():
    fixed = fix_relation(CUT2, [1])
    assert (fixed.arity, fixed.domain_size, fixed.values) == (1, 1, (1,))


def test_fix_unary_language():
    gamma = WeightedRelation(1, 2, [0, 3])
    fixed = fix_language(lang2(g=gamma))
    tables = sorted((r.arity, r.values) for r in fixed.relations.values())
    assert tables == [(0, (0,)), (1, (3,))]


def test_fix_cut_language_size():
    fixed = fix_language(lang2(cut=CUT2))
    assert len(fixed) <= 4
    assert WeightedRelation(1, 1, [1]) in fixed.relations.values()


def test_fix_three_labels_is_boolean():
    fixed = fix_language(make_rcut_language(3))
    assert fixed.domain_size == 2
    for name, (src, pinned) in fixed.provenance.items():
        assert fix_relation(make_rcut_language(3)[src], pinned) == fixed[name]


def test_negation():
    assert negate_relation(CUT2) == CUT2
    assert negate_relation(constant_relation(0, 2)) == constant_relation(1, 2)
    rel = WeightedRelation(2, 2, [0, 1, 2, 3])
    assert negate_relation(negate_relation(rel)) == rel
    with pytest.raises(LanguageError):
        negate_language(make_rcut_language(3))


def test_rcut_language():
    assert make_rcut_language(2)["cut"].values == (0, 1, 1, 0)
    rho1 = make_rcut_language(3)["rho1"]
    assert rho1.values == (INF, 0, INF)
    assert len(make_rcut_language(3)) == 4


def test_evaluate_linear_in_weights():
    rel = WeightedRelation(2, 3, [Fraction(i, 2) for i in range(9)])
    lang = Language(3, {"r": rel})
    a = VCSPInstance(3, lang, [(1, "r", (0, 1)), (2, "r", (2, 0))])
    b = VCSPInstance(3, lang, [(3, "r", (0, 1)), (6, "r", (2, 0))])
    for s in product(range(3), repeat=3):
        assert value_of(b, s) == 3 * value_of(a, s)
