"""Set-function approximations of k-set functions and the lower-bounded solver.

Each constraint's k-set function is sandwiched by a set function (a
superadditive one for SDS languages, an EDS one for SEDS languages), the
scaled sum over all constraints becomes a BGMC instance, and the instance's
near-optimal solutions bound where the optimal assignment's nonzero labels
can sit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .bgmc import BGMCInstance, OptimumClass, brute_force_enumerate, classify_optimum
from .classify import language_class
from .errors import InfeasibleBounds, InputError, LanguageError, PreconditionError
from .ext import INF, ExtRational, ceil, scale, to_ext
from .graphs import WeightedGraph, members, popcount
from .relations import WeightedRelation
from .setfunctions import KSetFunction, SetFunction, TableSetFunction, approximates, relation_to_ksetfn
from .vcsp import (
    Language,
    Mode,
    SolveResult,
    VCSPInstance,
    bnb_solve,
    brute_solve,
    constant_relation,
    fix_relation,
    fixed_name,
    value_of,
)

SDS_SUPERADDITIVE = "SdsSuperadditive"
SEDS_EDS = "SedsEds"
EXTERNAL_GMC = "ExternalGmc"


def seds_to_eds(f: KSetFunction, alpha) -> TableSetFunction:
    """``g(X) = f(X, {}, ..., {}) / alpha``: alpha-EDS, alpha^2-approximates ``f``."""
    alpha = to_ext(alpha)
    if alpha is INF or alpha < 1:
        raise InputError("alpha must be a finite rational >= 1")
    base = f.restrict_first()
    return TableSetFunction(f.n, {m: base(m) / alpha for m in range(1 << f.n)})


def sds_to_superadditive(f: KSetFunction, alpha) -> TableSetFunction:
    """``g(X) = alpha^(|X| - n - 1) * |X| / n * f(X, {}, ..., {})``.

    Superadditive and ``n * alpha^(n + 1)``-approximates an alpha-SDS ``f``.
    """
    alpha = to_ext(alpha)
    if alpha is INF or alpha < 1:
        raise InputError("alpha must be a finite rational >= 1")
    n = f.n
    if n == 0:
        return TableSetFunction(0, {})
    base = f.restrict_first()
    vals = {}
    for m in range(1 << n):
        size = popcount(m)
        coeff = alpha ** (size - n - 1) * Fraction(size, n)
        vals[m] = scale(coeff, base(m))
    return TableSetFunction(n, vals)


@dataclass(frozen=True)
class ConstraintApproximation:
    """Set function ``g`` on a relation's argument positions with factor ``beta``."""

    g: SetFunction
    beta: ExtRational
    backing: str


def sds_factor(arity: int, alpha) -> Fraction:
    if arity == 0:
        return Fraction(1)
    return arity * Fraction(alpha) ** (arity + 1)


def approximate_relation(relation: WeightedRelation, backing: str, alpha, check: bool = False) -> ConstraintApproximation:
    """Approximation of ``relation``'s k-set function along ``backing``."""
    f = relation_to_ksetfn(relation)
    alpha = to_ext(alpha)
    if backing == SDS_SUPERADDITIVE:
        g = sds_to_superadditive(f, alpha)
        beta = sds_factor(relation.arity, alpha)
    elif backing == SEDS_EDS:
        g = seds_to_eds(f, alpha)
        beta = alpha * alpha
    else:
        raise InputError(f"unsupported backing {backing!r}")
    if check:
        res = approximates(g, f, beta)
        if not res:
            raise PreconditionError(f"approximation fails at {res.witness}: {res.reason}")
    return ConstraintApproximation(g, beta, backing)


def build_global_instance(
    instance: VCSPInstance,
    bounds: Sequence[int],
    approx: Sequence[ConstraintApproximation],
    check: bool = True,
) -> BGMCInstance:
    """Sum of the scaled per-constraint set functions, as BGMC(l*, l(0)).

    Constraint ``i``'s function is evaluated on the preimage of a variable set
    under its scope, which relabels positions to variables and merges repeated
    variables.  The graph part is edgeless.
    """
    if len(approx) != len(instance.constraints):
        raise InputError("need one approximation per constraint")
    n = instance.n
    terms = []
    for c, a in zip(instance.constraints, approx):
        if a.g.n != len(c.scope):
            raise InputError(f"approximation on {a.g.n} points for a scope of length {len(c.scope)}")
        if c.weight != 0:
            terms.append((c.weight, a.g.values(), c.scope))
    vals = {}
    for mask in range(1 << n):
        total = Fraction(0)
        for w, gvals, scope in terms:
            pre = 0
            for j, v in enumerate(scope):
                if mask >> v & 1:
                    pre |= 1 << j
            total = total + w * gvals[pre]
        vals[mask] = total
    l0 = bounds[0]
    lstar = sum(bounds[1:])
    f = TableSetFunction(n, vals)
    return BGMCInstance(WeightedGraph(n), f, lstar, l0, check=check)


@dataclass
class LowerBoundedResult:
    """Solver outcome; ``enumeration`` lists all optimal assignments when available."""

    status: str
    value: ExtRational
    assignment: tuple[int, ...] | None = None
    enumeration: list[tuple[int, ...]] | None = None
    path: str = ""


def _offset(instance: VCSPInstance) -> ExtRational:
    total = Fraction(0)
    for c in instance.constraints:
        total = total + scale(c.weight, instance.language[c.relation].zero_value)
    return total


def greedy_partition(mask: int, n: int, bounds: Sequence[int]) -> tuple[int, ...]:
    """Labels for a support ``mask``: ascending vertices fill labels 1..k up to their quotas, the rest get label k."""
    k = len(bounds) - 1
    labels = [0] * n
    verts = members(mask)
    pos = 0
    for d in range(1, k + 1):
        for _ in range(bounds[d]):
            labels[verts[pos]] = d
            pos += 1
    for v in verts[pos:]:
        labels[v] = k
    return tuple(labels)


def pin_instance(instance: VCSPInstance, support: int, bounds: Sequence[int]) -> tuple[VCSPInstance, list[int]]:
    """Instance over ``D \\ {0}`` on the variables in ``support``, everything else pinned to 0.

    Returns the pinned instance and its variable list (original indices).
    Label ``d`` of the result stands for ``d + 1``.
    """
    keep = members(support)
    where = {v: i for i, v in enumerate(keep)}
    rels: dict[str, WeightedRelation] = {}
    cons = []
    for c in instance.constraints:
        rel = instance.language[c.relation]
        pinned = tuple(j for j, v in enumerate(c.scope) if v not in where)
        name = fixed_name(c.relation, pinned)
        if name not in rels:
            rels[name] = fix_relation(rel, pinned)
        cons.append((c.weight, name, tuple(where[v] for v in c.scope if v in where)))
    lang = Language(instance.domain_size - 1, rels, max(instance.language.arity_cap, 0))
    names = [instance.variables[v] for v in keep]
    return VCSPInstance(names, lang, cons, Mode.lower_bounded(bounds[1:])), keep


def language_path(language: Language, budget=None) -> tuple[str, Fraction]:
    """``("SDS", alpha)`` or ``("SEDS", alpha)`` with the integer ceiling of the minimal alpha."""
    sds = language_class(language, "SDS", budget)
    if sds.member:
        return "SDS", ceil(sds.alpha)
    seds = language_class(language, "SEDS", budget)
    if seds.member:
        return "SEDS", ceil(seds.alpha)
    raise LanguageError("language is neither SDS nor SEDS")


def solve_lower_bounded(
    instance: VCSPInstance,
    bounds: Sequence[int] | None = None,
    alpha=None,
    fix_subsolver: Callable[[VCSPInstance], SolveResult] | None = brute_solve,
    path: str | None = None,
    enumerate_all: bool = False,
    budget=None,
) -> LowerBoundedResult:
    """Optimal assignment of a lower-bounded instance over an SDS or SEDS language.

    ``bounds`` defaults to the instance's mode; ``path`` and ``alpha`` default
    to the language's class and ceiled minimal alpha.  With ``enumerate_all``
    every optimal assignment is listed whenever the normalised optimum is
    positive and finite.
    """
    if bounds is None:
        bounds = instance.lower_bounds()
    bounds = tuple(int(b) for b in bounds)
    d = instance.domain_size
    if len(bounds) != d:
        raise InputError(f"expected {d} lower bounds")
    if path is None or alpha is None:
        p, a = language_path(instance.language, budget)
        path = path or p
        alpha = a if alpha is None else alpha
    alpha = to_ext(alpha)
    if path not in ("SDS", "SEDS"):
        raise LanguageError(f"unknown solver path {path!r}")
    n = instance.n
    if sum(bounds) > n:
        return LowerBoundedResult("infeasible", INF, path=path)
    if d == 1:
        labels = (0,) * n
        v = value_of(instance, labels)
        if v is INF:
            return LowerBoundedResult("infeasible", INF, path=path)
        return LowerBoundedResult("optimal", v, labels, [labels] if enumerate_all else None, path)

    backing = SDS_SUPERADDITIVE if path == "SDS" else SEDS_EDS
    cache: dict[str, ConstraintApproximation] = {}
    approx = []
    for c in instance.constraints:
        if c.relation not in cache:
            cache[c.relation] = approximate_relation(instance.language[c.relation], backing, alpha)
        approx.append(cache[c.relation])
    beta = max((a.beta for a in approx), default=Fraction(1))
    h = build_global_instance(instance, bounds, approx, check=False)
    offset = _offset(instance)

    if path == "SDS":
        try:
            cls = classify_optimum(h)
        except InfeasibleBounds:
            return LowerBoundedResult("infeasible", INF, path=path)
        kind, witness = cls.kind, cls.solution
    else:
        # EDS sums carry no superadditive structure: classify by sweeping
        ref = brute_force_enumerate(h, beta)
        kind = (
            OptimumClass.INFINITE if ref.lam is INF
            else OptimumClass.ZERO if ref.lam == 0
            else OptimumClass.POSITIVE_FINITE
        )
        witness = ref.solutions[0] if kind == OptimumClass.ZERO else None

    if kind == OptimumClass.INFINITE:
        return LowerBoundedResult("infeasible", INF, path=path)
    if kind == OptimumClass.ZERO:
        labels = greedy_partition(witness, n, bounds)
        return LowerBoundedResult("optimal", value_of(instance, labels), labels, None, path)

    lam = min(h.value(m) for m in range(1 << n) if h.is_solution(m))
    compiled = instance.compiled()
    best, found = INF, []

    def offer(v, labels):
        nonlocal best, found
        if v is INF:
            return
        if v < best:
            best, found = v, [labels]
        elif v == best:
            found.append(labels)

    if path == "SDS":
        bound = ceil(beta)
        limit = min(n - bounds[0], int((bound + 1) * h.q) - 1)
        for mask in range(1 << n):
            size = popcount(mask)
            if size < h.q or size > limit or h.value(mask) > beta * lam:
                continue
            verts = members(mask)
            for labs in product(range(1, d), repeat=size):
                labels = [0] * n
                for v, x in zip(verts, labs):
                    labels[v] = x
                if not instance.feasible(labels):
                    continue
                offer(value_of(instance, labels), tuple(labels))
    else:
        if fix_subsolver is None:
            raise PreconditionError("the SEDS path needs a solver for the pinned language")
        for mask in brute_force_enumerate(h, beta).solutions:
            sub, keep = pin_instance(instance, mask, bounds)
            res = fix_subsolver(sub)
            if res.status != "optimal":
                continue
            for labs in res.assignments:
                labels = [0] * n
                for v, x in zip(keep, labs):
                    labels[v] = x + 1
                offer(res.value, tuple(labels))
    if best is INF:
        return LowerBoundedResult("infeasible", INF, path=path)
    found = sorted(set(found))
    return LowerBoundedResult("optimal", best, found[0], found if enumerate_all else None, path)


def recursive_subsolver(instance: VCSPInstance) -> SolveResult:
    """Solve a pinned instance with :func:`solve_lower_bounded` when its language allows, else by brute force."""
    try:
        res = solve_lower_bounded(instance, fix_subsolver=recursive_subsolver, enumerate_all=True)
    except LanguageError:
        return brute_solve(instance)
    if res.status != "optimal":
        return SolveResult.infeasible()
    if res.enumeration is None:
        return brute_solve(instance)
    return SolveResult("optimal", res.value, res.enumeration)


def _constant_names(language: Language) -> dict[int, str]:
    names = {}
    for d in range(language.domain_size):
        base = f"rho{d}"
        name = base
        i = 0
        while name in language and language[name] != constant_relation(d, language.domain_size):
            i += 1
            name = f"{base}_{i}"
        names[d] = name
    return names


def solve_with_constants(
    instance: VCSPInstance,
    bounds: Sequence[int] | None = None,
    plain_solver: Callable[[VCSPInstance], SolveResult] | None = None,
    enumerate_all: bool = False,
) -> SolveResult:
    """Lower-bounded optimum via plain instances with pinned label classes.

    For every choice of disjoint ``V_d`` with ``|V_d| = l(d)`` a constant
    constraint ``rho_d(x)`` is added for each ``x`` in ``V_d``; the best plain
    optimum over all choices is the lower-bounded optimum.  With
    ``enumerate_all`` the optimal assignments of all choices are merged.
    The default plain solver is branch and bound, seeded with the best value
    found so far.
    """
    if bounds is None:
        bounds = instance.lower_bounds()
    bounds = tuple(int(b) for b in bounds)
    n, dsize = instance.n, instance.domain_size
    if len(bounds) != dsize:
        raise InputError(f"expected {dsize} lower bounds")
    if sum(bounds) > n:
        return SolveResult.infeasible()
    names = _constant_names(instance.language)
    lang = instance.language.with_relations({names[d]: constant_relation(d, dsize) for d in range(dsize)})
    base = list(instance.constraints)
    best, found = INF, []

    def solve(plain: VCSPInstance) -> SolveResult:
        if plain_solver is not None:
            return plain_solver(plain)
        return bnb_solve(plain, all_optima=enumerate_all, upper=best)

    def choose(d: int, free: list[int], extra: list):
        nonlocal best, found
        if d == dsize:
            res = solve(VCSPInstance(instance.variables, lang, base + extra, Mode.plain()))
            if res.status != "optimal":
                return
            if res.value < best:
                best, found = res.value, list(res.assignments)
            elif res.value == best:
                found.extend(res.assignments)
            return
        for picked in combinations(free, bounds[d]):
            rest = [v for v in free if v not in picked]
            choose(d + 1, rest, extra + [(1, names[d], (v,)) for v in picked])

    choose(0, list(range(n)), [])
    if best is INF:
        return SolveResult.infeasible()
    found = sorted(set(found))
    return SolveResult("optimal", best, found if enumerate_all else found[:1])
