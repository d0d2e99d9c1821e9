"""Languages, VCSP instances, assignment modes, pinning, and reference solvers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from . import budget as _budget
from .errors import InputError, LanguageError, ModeError
from .ext import INF, ExtRational, scale, to_ext
from .relations import WeightedRelation

DEFAULT_ARITY_CAP = 8
BRUTE_DEFAULT_LIMIT = 2**24


class Language:
    """Named weighted relations over a common domain ``{0, ..., domain_size - 1}``.

    ``provenance`` maps a relation name to ``(source name, pinned positions)``
    for languages produced by :func:`fix_language`.
    """

    def __init__(
        self,
        domain_size: int,
        relations: Mapping[str, WeightedRelation] | Iterable[tuple[str, WeightedRelation]] = (),
        arity_cap: int = DEFAULT_ARITY_CAP,
        provenance: Mapping[str, tuple[str, tuple[int, ...]]] | None = None,
    ):
        if domain_size < 1:
            raise InputError("domain size must be positive")
        items = relations.items() if isinstance(relations, Mapping) else relations
        rels: dict[str, WeightedRelation] = {}
        for name, rel in items:
            if rel.domain_size != domain_size:
                raise LanguageError(f"relation {name!r} has domain size {rel.domain_size}, expected {domain_size}")
            if rel.arity > arity_cap:
                raise LanguageError(f"relation {name!r} has arity {rel.arity} above the cap {arity_cap}")
            if name in rels:
                raise LanguageError(f"duplicate relation name {name!r}")
            rels[name] = rel
        self.domain_size = domain_size
        self.relations = rels
        self.arity_cap = arity_cap
        self.provenance = dict(provenance or {})

    def __repr__(self):
        return f"Language(domain_size={self.domain_size}, relations={list(self.relations)})"

    def __getitem__(self, name: str) -> WeightedRelation:
        try:
            return self.relations[name]
        except KeyError:
            raise LanguageError(f"unknown relation {name!r}") from None

    def __contains__(self, name):
        return name in self.relations

    def __iter__(self):
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)

    def items(self):
        return self.relations.items()

    def with_relations(self, extra: Mapping[str, WeightedRelation]) -> "Language":
        merged = dict(self.relations)
        for name, rel in extra.items():
            if name in merged and merged[name] != rel:
                raise LanguageError(f"relation name {name!r} already used")
            merged[name] = rel
        return Language(self.domain_size, merged, self.arity_cap, self.provenance)


@dataclass(frozen=True)
class Mode:
    """``plain``, ``surjective``, or ``lower_bounded`` with per-label bounds."""

    kind: str = "plain"
    bounds: tuple[int, ...] = ()

    KINDS = ("plain", "surjective", "lower_bounded")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InputError(f"unknown mode {self.kind!r}")
        if self.kind == "lower_bounded":
            if any(b < 0 for b in self.bounds):
                raise InputError("lower bounds must be nonnegative")
        elif self.bounds:
            raise InputError(f"mode {self.kind!r} takes no bounds")

    @classmethod
    def plain(cls):
        return cls("plain")

    @classmethod
    def surjective(cls):
        return cls("surjective")

    @classmethod
    def lower_bounded(cls, bounds: Sequence[int]):
        return cls("lower_bounded", tuple(int(b) for b in bounds))

    def lower_bounds(self, domain_size: int) -> tuple[int, ...]:
        """The per-label bounds ``l`` this mode imposes."""
        if self.kind == "plain":
            return (0,) * domain_size
        if self.kind == "surjective":
            return (1,) * domain_size
        if len(self.bounds) != domain_size:
            raise InputError(f"expected {domain_size} lower bounds, got {len(self.bounds)}")
        return self.bounds


@dataclass(frozen=True)
class Constraint:
    weight: Fraction
    relation: str
    scope: tuple[int, ...]


def _constraint(c) -> Constraint:
    if isinstance(c, Constraint):
        weight, rel, scope = c.weight, c.relation, c.scope
    else:
        weight, rel, scope = c
    weight = to_ext(weight)
    if weight is INF or weight < 0:
        raise InputError("constraint weights must be finite and nonnegative")
    return Constraint(weight, rel, tuple(int(v) for v in scope))


class VCSPInstance:
    """``phi(s) = sum_i w_i * gamma_i(s restricted to scope_i)`` under an assignment mode."""

    def __init__(
        self,
        variables: int | Sequence[str],
        language: Language,
        constraints: Iterable = (),
        mode: Mode = Mode(),
    ):
        if isinstance(variables, int):
            variables = [f"x{i}" for i in range(variables)]
        self.variables = list(variables)
        self.language = language
        self.mode = mode
        cons = []
        for c in constraints:
            c = _constraint(c)
            rel = language[c.relation]
            if len(c.scope) != rel.arity:
                raise InputError(f"scope {c.scope} does not match arity {rel.arity} of {c.relation!r}")
            if any(not 0 <= v < self.n for v in c.scope):
                raise InputError(f"scope {c.scope} mentions an unknown variable")
            cons.append(c)
        self.constraints = cons
        mode.lower_bounds(language.domain_size)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def domain_size(self) -> int:
        return self.language.domain_size

    def __repr__(self):
        return f"VCSPInstance(n={self.n}, |D|={self.domain_size}, constraints={len(self.constraints)}, mode={self.mode.kind})"

    def with_mode(self, mode: Mode) -> "VCSPInstance":
        return VCSPInstance(self.variables, self.language, self.constraints, mode)

    def lower_bounds(self) -> tuple[int, ...]:
        return self.mode.lower_bounds(self.domain_size)

    def feasible(self, labels: Sequence[int]) -> bool:
        return _meets(labels, self.lower_bounds())

    def compiled(self) -> list[tuple]:
        """``(weight, values, scope)`` per constraint, for tight loops."""
        return [(c.weight, self.language[c.relation].values, c.scope) for c in self.constraints]


def _meets(labels, bounds) -> bool:
    counts = [0] * len(bounds)
    for x in labels:
        counts[x] += 1
    return all(c >= b for c, b in zip(counts, bounds))


def _value(compiled, d: int, labels) -> ExtRational:
    total = Fraction(0)
    for w, vals, scope in compiled:
        i = 0
        for v in scope:
            i = i * d + labels[v]
        total = total + scale(w, vals[i])
    return total


def value_of(instance: VCSPInstance, labels: Sequence[int]) -> ExtRational:
    """Objective value ignoring the mode."""
    d = instance.domain_size
    if len(labels) != instance.n or any(not 0 <= x < d for x in labels):
        raise InputError("assignment has the wrong length or labels out of range")
    return _value(instance.compiled(), d, labels)


def evaluate(instance: VCSPInstance, labels: Sequence[int]) -> ExtRational:
    """Value of an assignment; :class:`ModeError` if it violates the mode."""
    labels = tuple(labels)
    value = value_of(instance, labels)
    if not instance.feasible(labels):
        raise ModeError(f"assignment {labels} violates mode {instance.mode.kind} {instance.lower_bounds()}")
    return value


@dataclass
class SolveResult:
    """Optimal value and every optimal assignment found, in lexicographic order.

    ``status`` is ``"infeasible"`` when no mode-feasible assignment has a
    finite value.
    """

    status: str
    value: ExtRational
    assignments: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def assignment(self) -> tuple[int, ...] | None:
        return self.assignments[0] if self.assignments else None

    @classmethod
    def infeasible(cls):
        return cls("infeasible", INF, [])


def brute_solve(instance: VCSPInstance, budget=None) -> SolveResult:
    """Sweep all ``|D|^n`` assignments (default cap ``2^24``)."""
    d, n = instance.domain_size, instance.n
    _budget.check(d**n, budget, "brute-force assignment sweep", default=BRUTE_DEFAULT_LIMIT)
    bounds = instance.lower_bounds()
    if sum(bounds) > n:
        return SolveResult.infeasible()
    compiled = instance.compiled()
    best, arg = INF, []
    for labels in product(range(d), repeat=n):
        if not _meets(labels, bounds):
            continue
        v = _value(compiled, d, labels)
        if v is INF:
            continue
        if v < best:
            best, arg = v, [labels]
        elif v == best:
            arg.append(labels)
    if best is INF:
        return SolveResult.infeasible()
    return SolveResult("optimal", best, arg)


def bnb_solve(instance: VCSPInstance, budget=None, all_optima: bool = True, upper=INF) -> SolveResult:
    """Depth-first branch and bound.

    Constraints are charged once their last variable is assigned; a branch is
    cut when its partial value plus the cheapest possible remainder exceeds
    the best value so far, or is infinite.  With ``all_optima`` every optimal
    assignment is returned, otherwise the lexicographically first.  Only
    assignments of value at most ``upper`` are reported.
    """
    d, n = instance.domain_size, instance.n
    _budget.check(d**n, budget, "branch-and-bound assignment space", default=BRUTE_DEFAULT_LIMIT)
    bounds = instance.lower_bounds()
    if sum(bounds) > n:
        return SolveResult.infeasible()
    by_last: list[list] = [[] for _ in range(max(n, 1))]
    const = Fraction(0)
    for w, vals, scope in instance.compiled():
        if w == 0:
            continue
        if not scope:
            const = const + w * vals[0]
            continue
        by_last[max(scope)].append((w, vals, scope))
    # rest[i]: lower bound on the constraints charged at variables >= i
    rest = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        low = Fraction(0)
        for w, vals, _ in by_last[i]:
            m = min(vals)
            if m is INF:
                return SolveResult.infeasible()
            low += w * m
        rest[i] = rest[i + 1] + low
    if const is INF:
        return SolveResult.infeasible()

    labels = [0] * n
    counts = [0] * d
    need = list(bounds)
    state = {"best": to_ext(upper), "arg": []}

    def deficit() -> int:
        return sum(max(0, b - c) for b, c in zip(need, counts))

    def go(i: int, partial):
        if i == n:
            if deficit():
                return
            v = partial + const
            if v < state["best"] or (v == state["best"] and not state["arg"] and v is not INF):
                state["best"], state["arg"] = v, [tuple(labels)]
            elif v == state["best"] and v is not INF and all_optima:
                state["arg"].append(tuple(labels))
            return
        if deficit() > n - i:
            return
        for x in range(d):
            labels[i] = x
            counts[x] += 1
            v = partial
            for w, vals, scope in by_last[i]:
                j = 0
                for u in scope:
                    j = j * d + labels[u]
                v = v + w * vals[j]
                if v is INF:
                    break
            if v is not INF:
                bound = v + rest[i + 1] + const
                if bound < state["best"] or (bound == state["best"] and (all_optima or not state["arg"])):
                    go(i + 1, v)
            counts[x] -= 1

    go(0, Fraction(0))
    if state["best"] is INF or not state["arg"]:
        return SolveResult.infeasible()
    return SolveResult("optimal", state["best"], sorted(state["arg"]))


def fix_relation(relation: WeightedRelation, pinned: Iterable[int]) -> WeightedRelation:
    """Pin the positions in ``pinned`` to label 0 and drop label 0 elsewhere.

    Label ``d`` of the result stands for label ``d + 1`` of the input.
    """
    if relation.domain_size < 2:
        raise InputError("pinning needs a domain with at least two labels")
    pinned = set(pinned)
    r = relation.arity
    if any(not 0 <= i < r for i in pinned):
        raise InputError("pinned positions outside the relation's arity")
    free = [i for i in range(r) if i not in pinned]
    vals = []
    for xs in product(range(relation.domain_size - 1), repeat=len(free)):
        y = [0] * r
        for i, x in zip(free, xs):
            y[i] = x + 1
        vals.append(relation.values[relation.index(y)])
    return WeightedRelation(len(free), relation.domain_size - 1, vals)


def fixed_name(name: str, pinned: Sequence[int]) -> str:
    return f"{name}@{','.join(map(str, pinned))}"


def fix_language(language: Language) -> Language:
    """All pinnings of all relations, deduplicated by table, over ``D \\ {0}``."""
    if language.domain_size < 2:
        raise InputError("pinning needs a domain with at least two labels")
    out: dict[str, WeightedRelation] = {}
    prov = {}
    seen = set()
    for name, rel in language.items():
        for size in range(rel.arity + 1):
            for pinned in combinations(range(rel.arity), size):
                fixed = fix_relation(rel, pinned)
                if fixed in seen:
                    continue
                seen.add(fixed)
                fname = fixed_name(name, pinned)
                out[fname] = fixed
                prov[fname] = (name, pinned)
    return Language(language.domain_size - 1, out, language.arity_cap, prov)


def negate_relation(relation: WeightedRelation) -> WeightedRelation:
    if relation.domain_size != 2:
        raise LanguageError("negation is defined for Boolean relations only")
    return WeightedRelation.from_function(relation.arity, 2, lambda *t: relation(tuple(1 - x for x in t)))


def negate_language(language: Language) -> Language:
    """Swap labels 0 and 1 in every relation."""
    if language.domain_size != 2:
        raise LanguageError("negation is defined for Boolean languages only")
    return Language(2, {name: negate_relation(rel) for name, rel in language.items()}, language.arity_cap)


def constant_relation(d: int, domain_size: int) -> WeightedRelation:
    """``rho_d``: 0 at label ``d``, infinite elsewhere."""
    if not 0 <= d < domain_size:
        raise InputError("label outside domain")
    return WeightedRelation(1, domain_size, [0 if x == d else INF for x in range(domain_size)])


def constant_name(d: int) -> str:
    return f"rho{d}"


def cut_relation(domain_size: int) -> WeightedRelation:
    """Binary relation: 0 on equal labels, 1 otherwise."""
    return WeightedRelation.from_function(2, domain_size, lambda x, y: 0 if x == y else 1)


def make_rcut_language(r: int) -> Language:
    """``{cut, rho0, ..., rho(r-1)}`` over ``r`` labels."""
    if r < 2:
        raise InputError("r must be at least 2")
    rels = {"cut": cut_relation(r)}
    for d in range(r):
        rels[constant_name(d)] = constant_relation(d, r)
    return Language(r, rels)


def rway_cut_instance(graph, r: int) -> VCSPInstance:
    """Surjective instance whose optimum is the minimum ``r``-way cut of ``graph``."""
    lang = Language(r, {"cut": cut_relation(r)})
    cons = []
    for (u, v), w in graph.edges.items():
        if w is INF:
            raise InputError("r-way cut encoding needs finite edge weights")
        cons.append((w, "cut", (u, v)))
    return VCSPInstance(graph.n, lang, cons, Mode.surjective())
