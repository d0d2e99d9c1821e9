"""Seeded random instances for test corpora and the ``gen`` subcommand."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .bgmc import BGMCInstance
from .ext import INF
from .graphs import WeightedGraph
from .relations import WeightedRelation
from .setfunctions import GeneratorSetFunction
from .vcsp import Language, Mode, VCSPInstance


def random_rational(rng: random.Random, top: int = 6, dens=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(1, top), rng.choice(dens))


def random_graph(rng: random.Random, n: int, density: float = 0.4, inf_prob: float = 0.05) -> WeightedGraph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                w = INF if rng.random() < inf_prob else random_rational(rng)
                edges.append((u, v, w))
    return WeightedGraph(n, edges)


def random_generator_function(rng: random.Random, n: int, terms: int = 3, inf_prob: float = 0.03) -> GeneratorSetFunction:
    out = []
    for _ in range(terms if n else 0):
        size = rng.randint(1, min(n, 3))
        subset = rng.sample(range(n), size)
        c = INF if rng.random() < inf_prob else random_rational(rng, 4)
        out.append((subset, c))
    return GeneratorSetFunction(n, out)


def random_bgmc(rng: random.Random, n_max: int = 12, n_min: int = 1) -> BGMCInstance:
    n = rng.randint(n_min, n_max)
    q = rng.randint(0, 3)
    p = rng.randint(0, 2)
    graph = random_graph(rng, n, density=rng.choice((0.2, 0.35, 0.5)))
    f = random_generator_function(rng, n, terms=rng.randint(0, 4))
    return BGMCInstance(graph, f, q, p)


def _support(t) -> int:
    m = 0
    for i, x in enumerate(t):
        if x:
            m |= 1 << i
    return m


def _scaled_skeleton(rng: random.Random, arity: int, domain_size: int, skeleton: dict) -> WeightedRelation:
    """Values ``skeleton[support] * u`` with ``u`` in ``[1, 2]`` drawn per tuple."""
    vals = []
    for t in product(range(domain_size), repeat=arity):
        base = skeleton[_support(t)]
        if base is INF or base == 0:
            vals.append(base)
        else:
            vals.append(base * Fraction(rng.randint(2, 4), 2))
    return WeightedRelation(arity, domain_size, vals)


def random_sds_relation(rng: random.Random, arity: int, domain_size: int = 3) -> WeightedRelation:
    """Normalised relation over an increasing support skeleton: SDS with alpha <= 2."""
    terms = [([i], random_rational(rng, 3)) for i in range(arity) if rng.random() < 0.85]
    gen = random_generator_function(rng, arity, terms=rng.randint(0, 2), inf_prob=0.05)
    skeleton = {m: gen(m) + GeneratorSetFunction(arity, terms)(m) for m in range(1 << arity)}
    return _scaled_skeleton(rng, arity, domain_size, skeleton)


def random_eds_relation(rng: random.Random, arity: int) -> WeightedRelation:
    """Boolean 1-EDS relation: an increasing generator function plus weighted not-all-equal terms.

    Both kinds of term are 1-EDS and the EDS inequality is additive.
    """
    inc = random_generator_function(rng, arity, terms=rng.randint(0, 3), inf_prob=0.1)
    nae = []
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(min(2, arity), min(arity, 3))
        nae.append((_support(rng.sample(range(arity), size)), INF if rng.random() < 0.05 else random_rational(rng, 4)))
    vals = []
    for t in product((0, 1), repeat=arity):
        m = _support(t)
        v = inc(m)
        for s, c in nae:
            if m & s and m & s != s:
                v = v + c
        vals.append(v)
    return WeightedRelation(arity, 2, vals)


def random_seds_relation(rng: random.Random, arity: int, domain_size: int = 3, tries: int = 500) -> WeightedRelation:
    """Normalised SEDS relation from a random support skeleton (rejection sampling).

    Falls back to :func:`random_sds_relation`, which is SEDS as well.
    """
    from .classify import minimal_alpha

    for _ in range(tries):
        skeleton = {0: Fraction(0)}
        for m in range(1, 1 << arity):
            r = rng.random()
            skeleton[m] = Fraction(0) if r < 0.15 else INF if r < 0.2 else random_rational(rng, 3, (1, 2))
        rel = _scaled_skeleton(rng, arity, domain_size, skeleton)
        if minimal_alpha(rel, "SEDS").member:
            return rel
    return random_sds_relation(rng, arity, domain_size)


def random_language(rng: random.Random, kind: str, domain_size: int = 3, size: int | None = None, max_arity: int = 3) -> Language:
    size = size if size is not None else rng.randint(1, 3)
    make = random_sds_relation if kind == "SDS" else random_seds_relation
    rels = {}
    for i in range(size):
        rels[f"g{i}"] = make(rng, rng.randint(1, max_arity), domain_size)
    return Language(domain_size, rels)


def random_lower_bounded(rng: random.Random, language: Language, n_max: int = 9, lstar_max: int = 3) -> VCSPInstance:
    n = rng.randint(2, n_max)
    names = list(language)
    cons = []
    for _ in range(rng.randint(n, 2 * n + 2)):
        name = rng.choice(names)
        rel = language[name]
        scope = tuple(rng.randrange(n) for _ in range(rel.arity))
        cons.append((random_rational(rng, 3), name, scope))
    d = language.domain_size
    bounds = [0] * d
    bounds[0] = rng.randint(0, 2)
    for _ in range(rng.randint(0 if rng.random() < 0.1 else 1, lstar_max)):
        bounds[rng.randint(1, d - 1)] += 1
    return VCSPInstance(n, language, cons, Mode.lower_bounded(bounds))


def random_sim_not_sds_relation(rng: random.Random, arity: int, case: int, domain_size: int = 3, offset=0) -> WeightedRelation:
    """SIM relation violating SDS; ``case`` 1 puts value 0 on the all-nonzero support, case 2 a positive value."""
    from .classify import minimal_alpha

    full = (1 << arity) - 1
    while True:
        skeleton = {0: Fraction(0)}
        for m in range(1, full + 1):
            r = rng.random()
            skeleton[m] = Fraction(0) if r < 0.35 else INF if r < 0.4 else random_rational(rng, 3, (1, 2))
        if case == 1:
            skeleton[full] = Fraction(0)
        elif skeleton[full] == 0:
            skeleton[full] = random_rational(rng, 3, (1, 2))
        rel = _scaled_skeleton(rng, arity, domain_size, skeleton)
        if not minimal_alpha(rel, "SDS").member:
            break
    if offset:
        rel = WeightedRelation(arity, domain_size, [v + offset for v in rel.values])
    return rel


def random_gadget_pair(rng: random.Random, case: int, n_max: int = 5, offset=0):
    """A SIM-not-SDS language over three labels and a surjective instance over its pinned language."""
    from .vcsp import fix_language

    rels = {"g": random_sim_not_sds_relation(rng, rng.randint(2, 3), case, offset=offset)}
    if rng.random() < 0.5:
        rels["h"] = random_sds_relation(rng, rng.randint(1, 2))
    lang = Language(3, rels)
    fixed = fix_language(lang)
    names = [nm for nm, r in fixed.items() if r.arity > 0] or list(fixed)
    n = rng.randint(2, n_max)
    cons = []
    for _ in range(rng.randint(1, n + 1)):
        name = rng.choice(names)
        scope = tuple(rng.randrange(n) for _ in range(fixed[name].arity))
        cons.append((random_rational(rng, 3), name, scope))
    return lang, VCSPInstance(n, fixed, cons, Mode.surjective())
