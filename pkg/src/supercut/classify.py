"""Polymorphism and multimorphism checks, class membership with minimal alpha,
and the Boolean and three-element classification verdicts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from . import budget as _budget
from .errors import InputError, LanguageError, NormalisationError
from .ext import INF, ExtRational, ratio
from .relations import WeightedRelation
from .setfunctions import relation_to_ksetfn, support
from .vcsp import Language, fix_language, negate_language

CLASSES = ("EDS", "SIM", "SEDS", "SDS")


class Operation:
    """A total operation ``D^s -> D`` stored as a table."""

    def __init__(self, name: str, arity: int, domain_size: int, fn: Callable[..., int]):
        self.name = name
        self.arity = arity
        self.domain_size = domain_size
        self.table = {}
        for args in product(range(domain_size), repeat=arity):
            out = fn(*args)
            if not 0 <= out < domain_size:
                raise InputError(f"operation {name} leaves the domain at {args}")
            self.table[args] = out

    def __repr__(self):
        return self.name

    def __call__(self, *args: int) -> int:
        return self.table[args]

    def apply(self, tuples: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Componentwise application to ``s`` tuples of equal length."""
        return tuple(self.table[col] for col in zip(*tuples))


def constant_op(d: int, domain_size: int) -> Operation:
    return Operation(f"c{d}", 1, domain_size, lambda x: d)


def min_op(domain_size: int = 2) -> Operation:
    return Operation("min", 2, domain_size, min)


def max_op(domain_size: int = 2) -> Operation:
    return Operation("max", 2, domain_size, max)


def _minority(x, y, z):
    if x == y:
        return z
    if x == z:
        return y
    if y == z:
        return x
    return x  # all distinct: not covered by the definition, first argument


def _majority(x, y, z):
    if x == y or x == z:
        return x
    if y == z:
        return y
    return x  # all distinct: first argument


def minority_op(domain_size: int = 2) -> Operation:
    return Operation("Mn", 3, domain_size, _minority)


def majority_op(domain_size: int = 2) -> Operation:
    return Operation("Mj", 3, domain_size, _majority)


def _check_ops(relation: WeightedRelation, ops: Sequence[Operation]) -> int:
    if not ops:
        raise InputError("need at least one operation")
    s = ops[0].arity
    for o in ops:
        if o.arity != s:
            raise InputError("all operations of a multimorphism must have the same arity")
        if o.domain_size != relation.domain_size:
            raise InputError(f"operation {o.name} is over a different domain")
    return s


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def admits_polymorphism(relation: WeightedRelation, op: Operation, budget=None) -> Check:
    """Feasible tuples closed under ``op``; witness is the offending argument list."""
    s = _check_ops(relation, [op])
    feasible = [t for t, v in relation.items() if v is not INF]
    _budget.check(len(feasible) ** s, budget, "polymorphism sweep")
    vals = relation.values
    for args in product(feasible, repeat=s):
        if vals[relation.index(op.apply(args))] is INF:
            return Check(False, args)
    return Check(True)


def admits_multimorphism(relation: WeightedRelation, ops: Sequence[Operation], budget=None) -> Check:
    """``sum gamma(o_i(x_1..x_s)) <= sum gamma(x_i)`` for all argument lists."""
    s = _check_ops(relation, ops)
    tuples = list(relation.tuples())
    _budget.check(len(tuples) ** s, budget, "multimorphism sweep")
    vals = relation.values
    for args in product(tuples, repeat=s):
        rhs = Fraction(0)
        for t in args:
            rhs = rhs + vals[relation.index(t)]
        if rhs is INF:
            continue
        lhs = Fraction(0)
        for o in ops:
            lhs = lhs + vals[relation.index(o.apply(args))]
        if lhs > rhs:
            return Check(False, args)
    return Check(True)


def language_admits(language: Language, ops: Sequence[Operation], budget=None) -> Check:
    for name, rel in language.items():
        res = admits_multimorphism(rel, ops, budget)
        if not res:
            return Check(False, (name, res.witness))
    return Check(True)


@dataclass(frozen=True)
class ClassReport:
    """Minimal ``alpha`` for membership in ``cls`` (INF: not a member).

    ``witness`` is the binding constraint as a pair of label tuples (or the
    normalisation witness); ``relation`` names the binding relation for
    language-level reports.
    """

    cls: str
    alpha: ExtRational
    witness: object = None
    reason: str = ""
    relation: str | None = None

    @property
    def member(self) -> bool:
        return self.alpha is not INF


class _Worst:
    def __init__(self):
        self.value = None
        self.witness = None
        self.reason = ""

    def offer(self, r, witness, reason):
        if r is not None and (self.value is None or r > self.value):
            self.value, self.witness, self.reason = r, witness, reason


def _sim(vals, index, labelings, worst):
    groups: dict[int, list] = {}
    for x in labelings:
        groups.setdefault(support(x), []).append(x)
    for xs in groups.values():
        hi = max(xs, key=lambda x: vals[index(x)])
        lo = min(xs, key=lambda x: vals[index(x)])
        worst.offer(ratio(vals[index(hi)], vals[index(lo)]), (hi, lo), "SIM")


def minimal_alpha(relation: WeightedRelation, cls: str, budget=None) -> ClassReport:
    """Smallest ``alpha >= 1`` for which ``relation`` is alpha-``cls``.

    Exact maximum of the ratios LHS/RHS over the quantified tuples of the
    class definition, clamped below at 1.
    """
    if cls not in CLASSES:
        raise InputError(f"unknown class {cls!r}")
    try:
        f = relation_to_ksetfn(relation)
    except NormalisationError as exc:
        return ClassReport(cls, INF, exc.witness, f"not normalisable: {exc}")
    d = relation.domain_size
    r = relation.arity
    k = d - 1
    if cls == "EDS" and d != 2:
        return ClassReport(cls, INF, None, "non-Boolean domain")
    # normalised values, indexed like the relation table
    vals = [v - f.offset for v in relation.values]
    index = relation.index
    labelings = list(product(range(d), repeat=r))
    worst = _Worst()

    if cls == "EDS":
        _budget.check(len(labelings) ** 2, budget, "EDS sweep")
        for x in labelings:
            fx = vals[index(x)]
            for y in labelings:
                z = tuple(a if not b else 0 for a, b in zip(x, y))
                worst.offer(ratio(vals[index(z)], fx + vals[index(y)]), (x, y), "EDS")
    else:
        _budget.check(len(labelings), budget, "SIM sweep")
        _sim(vals, index, labelings, worst)
    if cls == "SEDS":
        _budget.check(len(labelings) ** 2, budget, "SEDS sweep")
        for x in labelings:
            fx = vals[index(x)]
            for y in labelings:
                z = tuple(a if a and a != b else 0 for a, b in zip(x, y))
                worst.offer(ratio(vals[index(z)], fx + vals[index(y)]), (x, y), "SEDS")
    elif cls == "SDS":
        _budget.check((2 * k + 1) ** r, budget, "SDS sweep")
        for x in labelings:
            fx = vals[index(x)]
            choices = [(a,) if a else tuple(range(d)) for a in x]
            for y in product(*choices):
                worst.offer(ratio(fx, vals[index(y)]), (x, y), "SDS")

    if worst.value is None or worst.value <= 1:
        return ClassReport(cls, Fraction(1), worst.witness if worst.value is not None else None, "")
    return ClassReport(cls, worst.value, worst.witness, f"binding {worst.reason} inequality")


def language_class(language: Language, cls: str, budget=None) -> ClassReport:
    """Maximum of the per-relation minimal alphas (1 for the empty language)."""
    best = ClassReport(cls, Fraction(1))
    for name, rel in language.items():
        rep = minimal_alpha(rel, cls, budget)
        if rep.alpha > best.alpha or (best.relation is None and rep.alpha == best.alpha and rep.witness is not None):
            best = ClassReport(cls, rep.alpha, rep.witness, rep.reason, name)
        if best.alpha is INF:
            break
    return best


@dataclass(frozen=True)
class Verdict:
    verdict: str
    reason: str = ""
    reports: tuple = ()


BOOLEAN_TRACTABLE = "globally_s_tractable"
BOOLEAN_INTRACTABLE = "globally_s_intractable"
L_TRACTABLE = "l_tractable"
L_INTRACTABLE = "l_intractable"
NOT_SEDS = "not_seds"


def boolean_multimorphisms() -> list[tuple[str, list[Operation]]]:
    mn, mx, mi, mj = min_op(2), max_op(2), minority_op(2), majority_op(2)
    return [
        ("<min,min>", [mn, mn]),
        ("<max,max>", [mx, mx]),
        ("<min,max>", [mn, mx]),
        ("<Mn,Mn,Mn>", [mi, mi, mi]),
        ("<Mj,Mj,Mj>", [mj, mj, mj]),
        ("<Mj,Mj,Mn>", [mj, mj, mi]),
    ]


def classify_boolean_s(language: Language, budget=None) -> Verdict:
    """Surjective-VCSP verdict for a finite Boolean language.

    Tests, in this order: EDS, EDS of the negated language, then the six
    multimorphisms.  The first success is the reason.
    """
    if language.domain_size != 2:
        raise LanguageError("Boolean classification needs domain size 2")
    if language_class(language, "EDS", budget).member:
        return Verdict(BOOLEAN_TRACTABLE, "EDS")
    if language_class(negate_language(language), "EDS", budget).member:
        return Verdict(BOOLEAN_TRACTABLE, "negated EDS")
    for name, ops in boolean_multimorphisms():
        if language_admits(language, ops, budget):
            return Verdict(BOOLEAN_TRACTABLE, name)
    return Verdict(BOOLEAN_INTRACTABLE, "no tractable case applies")


def classify_three_element_seds(language: Language, budget=None) -> Verdict:
    """Lower-bounded verdict for a language over three labels.

    SDS languages are tractable directly; other SEDS languages follow the
    Boolean verdict on the pinned language.  Non-SEDS inputs are reported as
    such, with no complexity claim.
    """
    if language.domain_size != 3:
        raise LanguageError("three-element classification needs domain size 3")
    seds = language_class(language, "SEDS", budget)
    if not seds.member:
        return Verdict(NOT_SEDS, seds.reason, (seds,))
    sds = language_class(language, "SDS", budget)
    if sds.member:
        return Verdict(L_TRACTABLE, "SDS", (seds, sds))
    fixed = classify_boolean_s(fix_language(language), budget)
    if fixed.verdict == BOOLEAN_TRACTABLE:
        return Verdict(L_TRACTABLE, f"FixReduction ({fixed.reason})", (seds, sds))
    return Verdict(L_INTRACTABLE, "Fix language is intractable", (seds, sds))
