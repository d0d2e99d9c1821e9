"""Hardness gadget: a surjective instance over the pinned language of ``Gamma``
rewritten as a surjective instance over ``Gamma`` itself, for languages that
are SIM but not SDS.

The new instance has one extra variable ``z``.  Each pinned constraint becomes
its source relation with ``z`` at the pinned positions; a violation of the SDS
inequality supplies a relation whose three-argument view ``gamma*`` punishes
every assignment that does not put ``z`` at label 0 and all other variables
at nonzero labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

from . import budget as _budget
from .classify import language_class
from .errors import InputError, LanguageError
from .ext import INF, ExtRational, ratio
from .relations import WeightedRelation
from .setfunctions import relation_to_ksetfn
from .vcsp import Language, Mode, VCSPInstance


def _used_relations(instance: VCSPInstance) -> list[WeightedRelation]:
    names = []
    for c in instance.constraints:
        if c.relation not in names:
            names.append(c.relation)
    return [instance.language[n] for n in names]


def compute_epsilon(instance: VCSPInstance) -> Fraction:
    """``1 / (product of the denominators of all distinct weights and all distinct finite values)``.

    Weights and values contribute separate factors, so every term ``w * v``
    and hence every assignment value is a multiple of this number; distinct
    values differ by at least ``epsilon``.
    """
    weights = {c.weight for c in instance.constraints}
    values = set()
    for rel in _used_relations(instance):
        values.update(rel.finite_values())
    return Fraction(1, prod(x.denominator for x in weights) * prod(v.denominator for v in values))


def compute_omega(instance: VCSPInstance) -> Fraction:
    """``sum_i w_i * (max finite value of gamma_i - min(0, min finite value))``.

    Bounds every finite assignment value; for nonnegative tables this is the
    plain weighted sum of maxima.
    """
    total = Fraction(0)
    for c in instance.constraints:
        fin = instance.language[c.relation].finite_values()
        if fin:
            total += c.weight * (max(fin) - min(Fraction(0), min(fin)))
    return total


def compute_nu(gamma_star: dict, omega) -> Fraction:
    """``omega / (min positive finite value of gamma*) + 1``, or 1 without such values."""
    positive = [v for v in gamma_star.values() if v is not INF and v > 0]
    if not positive:
        return Fraction(1)
    return Fraction(omega) / min(positive) + 1


@dataclass(frozen=True)
class GadgetWitness:
    """Tuples violating the SDS inequality by more than the threshold.

    ``x_blocks[d - 1]`` / ``y_blocks[d - 1]`` list the positions of label
    ``d``; ``gamma_star`` maps ``(a, b, c)`` to the normalised value of the
    relation with label ``a`` on ``X``, ``b`` on ``Y`` and ``c`` elsewhere.
    """

    relation: str
    x_blocks: tuple[tuple[int, ...], ...]
    y_blocks: tuple[tuple[int, ...], ...]
    X: tuple[int, ...]
    Y: tuple[int, ...]
    gamma_star: dict
    offset: Fraction

    def pattern(self, a, b, c, arity: int) -> tuple:
        """Argument list placing ``a`` on ``X``, ``b`` on ``Y`` and ``c`` elsewhere."""
        xs, ys = set(self.X), set(self.Y)
        return tuple(a if i in xs else b if i in ys else c for i in range(arity))


def _gamma_star(rel: WeightedRelation, X, Y, offset) -> dict:
    xs, ys = set(X), set(Y)
    out = {}
    for a, b, c in product(range(rel.domain_size), repeat=3):
        t = tuple(a if i in xs else b if i in ys else c for i in range(rel.arity))
        out[(a, b, c)] = rel.values[rel.index(t)] - offset
    return out


def find_sds_violation(language: Language, threshold, budget=None) -> GadgetWitness | None:
    """First tuple pair with ``f(X_1..X_k) > threshold * f(X_1 u Y_1, ..., X_k u Y_k)``.

    Relations are searched in language order, tuples in row-major order.
    ``None`` means the language is threshold-SDS.
    """
    threshold = Fraction(threshold)
    for name, rel in language.items():
        try:
            f = relation_to_ksetfn(rel)
        except Exception:
            continue
        d, r = rel.domain_size, rel.arity
        _budget.check((2 * d - 1) ** r, budget, "SDS violation search")
        vals = [v - f.offset for v in rel.values]
        for x in product(range(d), repeat=r):
            fx = vals[rel.index(x)]
            choices = [(a,) if a else tuple(range(d)) for a in x]
            for y in product(*choices):
                q = ratio(fx, vals[rel.index(y)])
                if q is None or q <= threshold:
                    continue
                k = d - 1
                xb = tuple(tuple(i for i in range(r) if x[i] == lab) for lab in range(1, k + 1))
                yb = tuple(tuple(i for i in range(r) if x[i] == 0 and y[i] == lab) for lab in range(1, k + 1))
                X = tuple(i for i in range(r) if x[i])
                Y = tuple(i for i in range(r) if not x[i] and y[i])
                return GadgetWitness(name, xb, yb, X, Y, _gamma_star(rel, X, Y, f.offset), f.offset)
    return None


@dataclass
class GadgetInstance:
    """Surjective instance over ``Gamma``; ``z`` is the last variable.

    Subtract ``offset`` from its values to compare with the source instance:
    Case 1 preserves the optimum, Case 2 shifts it by at most ``epsilon / 2``.
    """

    instance: VCSPInstance
    case: int
    witness: GadgetWitness
    epsilon: Fraction
    omega: Fraction
    nu: Fraction
    threshold: Fraction
    pair_coefficient: Fraction
    offset: Fraction

    @property
    def shifted(self) -> bool:
        return self.case == 2


def _slack(instance: VCSPInstance, language: Language) -> Fraction:
    """How far below zero the source-relation terms can drive an assignment value."""
    prov = instance.language.provenance
    total = Fraction(0)
    for c in instance.constraints:
        fin = language[prov[c.relation][0]].finite_values()
        if fin and min(fin) < 0:
            total += c.weight * -min(fin)
    return total


def separation_bound(instance: VCSPInstance, language: Language) -> Fraction:
    """``omega + epsilon`` plus the negative slack of the source relations.

    Non-conforming assignments are pushed above this value.  The conforming
    optimum can reach ``omega + epsilon / 2`` in Case 2, so ``omega`` alone
    does not separate the two.
    """
    return compute_omega(instance) + compute_epsilon(instance) + _slack(instance, language)


def gadget_threshold(instance: VCSPInstance, language: Language, budget=None) -> Fraction:
    """``2 |V|^2 omega_hat / epsilon * alpha^4``, ``omega_hat`` from :func:`separation_bound`."""
    sim = language_class(language, "SIM", budget)
    if not sim.member:
        raise LanguageError("gadget construction needs a SIM language")
    n = instance.n
    return 2 * n * n * separation_bound(instance, language) / compute_epsilon(instance) * sim.alpha**4


def build_gadget_instance(
    instance: VCSPInstance, language: Language, witness: GadgetWitness | None = None, budget=None
) -> GadgetInstance:
    """Build the Case 1 (``gamma*(1,1,1) = 0``) or Case 2 instance.

    ``instance`` must be a surjective instance whose relations carry
    provenance ``(source relation, pinned positions)`` into ``language``.
    """
    if language.domain_size < 3 or instance.domain_size != language.domain_size - 1:
        raise InputError("instance must live on the pinned domain of a language with at least three labels")
    prov = instance.language.provenance
    for c in instance.constraints:
        if c.relation not in prov:
            raise InputError(f"constraint relation {c.relation!r} carries no provenance")
        src, _ = prov[c.relation]
        if src not in language:
            raise InputError(f"provenance names {src!r}, which is not in the language")
    sim = language_class(language, "SIM", budget)
    if not sim.member:
        raise LanguageError("gadget construction needs a SIM language")
    alpha = sim.alpha
    n = instance.n
    eps = compute_epsilon(instance)
    omega = compute_omega(instance)
    bound = separation_bound(instance, language)
    threshold = 2 * n * n * bound / eps * alpha**4
    if witness is None:
        witness = find_sds_violation(language, threshold, budget)
        if witness is None:
            raise LanguageError("language satisfies the SDS inequality at the gadget threshold")
    _check_witness(language, witness, threshold, alpha)

    rel = language[witness.relation]
    r = rel.arity
    gs = witness.gamma_star
    nu = compute_nu(gs, bound)
    z = n
    cons = []
    offset = Fraction(0)
    if gs[(1, 1, 1)] == 0:
        case = 1
        pair = nu
        for x in range(n):
            for y in range(n):
                cons.append((nu, witness.relation, witness.pattern(x, y, y, r)))
                offset += nu * witness.offset
    else:
        case = 2
        cons.append((nu, witness.relation, witness.pattern(z, z, z, r)))
        offset += nu * witness.offset
        m = max(gs[(a, b, 0)] for a in range(1, rel.domain_size) for b in range(1, rel.domain_size))
        pair = eps / (2 * n * n * m) if m > 0 else nu
        for x in range(n):
            for y in range(n):
                cons.append((pair, witness.relation, witness.pattern(x, y, z, r)))
                offset += pair * witness.offset
    for c in instance.constraints:
        src, pinned = prov[c.relation]
        pinned = set(pinned)
        it = iter(c.scope)
        scope = tuple(z if j in pinned else next(it) for j in range(language[src].arity))
        cons.append((c.weight, src, scope))
    names = list(instance.variables) + ["z"]
    out = VCSPInstance(names, language, cons, Mode.surjective())
    return GadgetInstance(out, case, witness, eps, omega, nu, threshold, pair, offset)


def _check_witness(language: Language, w: GadgetWitness, threshold, alpha) -> None:
    if w.relation not in language:
        raise InputError(f"witness relation {w.relation!r} is not in the language")
    rel = language[w.relation]
    if set(w.X) & set(w.Y) or any(not 0 <= i < rel.arity for i in w.X + w.Y):
        raise InputError("witness index sets must be disjoint positions of the relation")
    f = relation_to_ksetfn(rel)
    lhs = f(*w.x_blocks)
    rhs = f(*(tuple(sorted(a + b)) for a, b in zip(w.x_blocks, w.y_blocks)))
    q = ratio(lhs, rhs)
    if q is None or q <= threshold:
        raise InputError("witness does not violate the SDS inequality at the threshold")
    # transported form: f(X, 0..) > threshold / alpha^2 * f(X u Y, 0..)
    if w.gamma_star != _gamma_star(rel, w.X, w.Y, f.offset):
        raise InputError("witness gamma* table does not match the relation")
    q8 = ratio(w.gamma_star[(1, 0, 0)], w.gamma_star[(1, 1, 0)])
    if q8 is None or q8 <= threshold / alpha**2:
        raise InputError("witness violates the SIM bound of the language")


def restrict_assignment(labels) -> tuple[int, ...]:
    """Drop ``z`` and map labels ``1..k`` to the pinned domain's ``0..k-1``."""
    return tuple(x - 1 for x in labels[:-1])


def conforming(labels) -> bool:
    """``z`` at label 0 and every other variable at a nonzero label."""
    return labels[-1] == 0 and all(x != 0 for x in labels[:-1])
