"""Set functions, k-set functions and their exhaustive property checkers.

Subsets of a ground set ``{0, ..., n-1}`` are bitmasks.  A k-tuple of
pairwise disjoint subsets is represented either as a tuple of bitmasks or,
equivalently, as a label tuple ``x`` in ``{0..k}^n`` with ``i in X_d`` iff
``x_i = d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import budget as _budget
from .errors import InputError, NormalisationError
from .ext import INF, ExtRational, to_ext
from .graphs import mask_of, members
from .relations import WeightedRelation


@dataclass(frozen=True)
class Check:
    """Outcome of an exhaustive check; truthy iff the property holds."""

    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _subset(mask: int) -> tuple[int, ...]:
    return tuple(members(mask))


def submasks(mask: int):
    """All submasks of ``mask`` in increasing order."""
    out = []
    s = 0
    while True:
        out.append(s)
        if s == mask:
            return out
        s = (s - mask) & mask


class SetFunction:
    """Oracle-style set function on ``{0, ..., n-1}``; call it with a bitmask."""

    kind = "abstract"

    def __init__(self, n: int):
        if n < 0:
            raise InputError("ground set size must be nonnegative")
        self.n = n

    def __call__(self, mask: int) -> ExtRational:
        raise NotImplementedError

    def of(self, subset: Iterable[int]) -> ExtRational:
        return self(mask_of(subset))

    def values(self) -> list:
        """Every value, indexed by bitmask."""
        return [self(m) for m in range(1 << self.n)]

    def materialise(self) -> "TableSetFunction":
        return TableSetFunction(self.n, dict(enumerate(self.values())))


class TableSetFunction(SetFunction):
    """Explicit table; subsets missing from ``entries`` evaluate to 0."""

    kind = "table"

    def __init__(self, n: int, entries: dict | None = None):
        super().__init__(n)
        table = {}
        for key, value in (entries or {}).items():
            mask = key if isinstance(key, int) else mask_of(key)
            if mask >> n:
                raise InputError(f"subset {key!r} outside ground set of size {n}")
            table[mask] = to_ext(value)
        self.entries = table

    def __call__(self, mask):
        return self.entries.get(mask, Fraction(0))


class GeneratorSetFunction(SetFunction):
    """``f(X) = sum of c_S over generator terms S contained in X``.

    Nonnegative coefficients on nonempty sets make this normalised and
    superadditive by construction.
    """

    kind = "generator"

    def __init__(self, n: int, terms: Iterable[tuple] = ()):
        super().__init__(n)
        parsed = []
        for subset, coeff in terms:
            mask = subset if isinstance(subset, int) else mask_of(subset)
            coeff = to_ext(coeff)
            if mask == 0:
                raise InputError("generator terms must be on nonempty sets")
            if mask >> n:
                raise InputError("generator term outside ground set")
            if coeff < 0:
                raise InputError("generator coefficients must be nonnegative")
            if coeff != 0:
                parsed.append((mask, coeff))
        self.terms = tuple(parsed)

    def __call__(self, mask):
        total = Fraction(0)
        for s, c in self.terms:
            if s & mask == s:
                total = total + c
        return total


class ShiftedSetFunction(SetFunction):
    """A base function seen through a vertex embedding, plus per-vertex charges.

    ``vertices[i]`` is the base-ground-set index of local vertex ``i``; the
    value of a local subset ``X`` is ``base(embed(X)) + sum(charges[i] for i in X)``.
    """

    kind = "shifted"

    def __init__(self, base: SetFunction, vertices: Sequence[int], charges: Sequence):
        super().__init__(len(vertices))
        if len(charges) != len(vertices):
            raise InputError("one charge per vertex is required")
        self.base = base
        self.vertices = tuple(vertices)
        self.charges = tuple(to_ext(c) for c in charges)
        if any(c < 0 for c in self.charges):
            raise InputError("charges must be nonnegative")

    def __call__(self, mask):
        embedded = 0
        extra = Fraction(0)
        i = 0
        while mask:
            if mask & 1:
                embedded |= 1 << self.vertices[i]
                extra = extra + self.charges[i]
            mask >>= 1
            i += 1
        return self.base(embedded) + extra


class KSetFunction:
    """Normalised k-set function backed by a weighted relation on ``{0..k}``.

    ``f(X_1, ..., X_k) = gamma(x) - offset`` where ``x_i = d`` iff ``i in X_d``.
    """

    def __init__(self, relation: WeightedRelation, offset=Fraction(0)):
        if relation.domain_size < 2:
            raise InputError("a k-set function needs k >= 1 (domain size >= 2)")
        self.relation = relation
        self.offset = to_ext(offset)
        if self.offset is INF:
            raise InputError("normalisation offset must be finite")
        self.k = relation.domain_size - 1
        self.n = relation.arity

    def at(self, labels: Sequence[int]) -> ExtRational:
        """Value at a label tuple."""
        return self.relation.values[self.relation.index(labels)] - self.offset

    def __call__(self, *blocks) -> ExtRational:
        # with k = 1 a lone sequence is the block itself, not a tuple of blocks
        if self.k > 1 and len(blocks) == 1 and isinstance(blocks[0], (tuple, list)):
            blocks = tuple(blocks[0])
        if len(blocks) != self.k:
            raise InputError(f"expected {self.k} subsets, got {len(blocks)}")
        labels = [0] * self.n
        seen = 0
        for d, block in enumerate(blocks, start=1):
            mask = block if isinstance(block, int) else mask_of(block)
            if mask & seen:
                raise InputError("k-set function arguments must be pairwise disjoint")
            if mask >> self.n:
                raise InputError("subset outside ground set")
            seen |= mask
            for i in members(mask):
                labels[i] = d
        return self.at(labels)

    def labelings(self):
        return product(range(self.k + 1), repeat=self.n)

    def to_relation(self) -> WeightedRelation:
        """Re-materialise the original relation (offset added back)."""
        return self.relation

    def restrict_first(self) -> SetFunction:
        """The set function ``X -> f(X, {}, ..., {})``."""
        n = self.n
        vals = {}
        for mask in range(1 << n):
            labels = [(mask >> i) & 1 for i in range(n)]
            vals[mask] = self.at(labels)
        return TableSetFunction(n, vals)


def blocks_of(labels: Sequence[int], k: int) -> tuple[tuple[int, ...], ...]:
    """Label tuple -> tuple of k sorted index tuples."""
    return tuple(tuple(i for i, x in enumerate(labels) if x == d) for d in range(1, k + 1))


def support(labels: Sequence[int]) -> int:
    m = 0
    for i, x in enumerate(labels):
        if x:
            m |= 1 << i
    return m


def relation_to_ksetfn(relation: WeightedRelation) -> KSetFunction:
    """The k-set function ``relation`` corresponds to under normalisation.

    Raises :class:`NormalisationError` when the all-zeros value is infinite or
    not minimal.
    """
    zero = relation.zero_value
    if zero is INF:
        raise NormalisationError("value of the all-zeros tuple is infinite", (0,) * relation.arity)
    for t, v in relation.items():
        if v < zero:
            raise NormalisationError(f"tuple {t} has value {v} below the all-zeros value {zero}", t)
    return KSetFunction(relation, zero)


def _as_kset(f):
    if isinstance(f, KSetFunction):
        return f
    if isinstance(f, SetFunction):
        return _SetAsKSet(f)
    raise TypeError(f"expected a set function or k-set function, got {type(f).__name__}")


class _SetAsKSet:
    """Adapter letting a set function be swept as a 1-set function."""

    def __init__(self, f: SetFunction):
        self.f = f
        self.k = 1
        self.n = f.n

    def at(self, labels):
        return self.f(support(labels))

    def labelings(self):
        return product((0, 1), repeat=self.n)


def is_normalised(f, budget=None) -> Check:
    g = _as_kset(f)
    _budget.check((g.k + 1) ** g.n, budget, "normalisation sweep")
    for labels in g.labelings():
        v = g.at(labels)
        if (not any(labels) and v != 0) or v < 0:
            w = _subset(support(labels)) if g.k == 1 else blocks_of(labels, g.k)
            return Check(False, w, "f(empty) != 0" if not any(labels) else "negative value")
    return Check(True)


def _disjoint_pairs(n: int):
    full = (1 << n) - 1
    for x in range(1 << n):
        for y in submasks(full & ~x):
            yield x, y


def is_superadditive(f: SetFunction, budget=None) -> Check:
    norm = is_normalised(f, budget)
    if not norm:
        return Check(False, norm.witness, "not normalised")
    _budget.check(3**f.n, budget, "superadditivity sweep")
    vals = f.values()
    for x, y in _disjoint_pairs(f.n):
        if vals[x] + vals[y] > vals[x | y]:
            return Check(False, (_subset(x), _subset(y)), "f(X) + f(Y) > f(X u Y)")
    return Check(True)


def is_increasing(f: SetFunction, budget=None) -> Check:
    norm = is_normalised(f, budget)
    if not norm:
        return Check(False, norm.witness, "not normalised")
    _budget.check(3**f.n, budget, "monotonicity sweep")
    vals = f.values()
    full = (1 << f.n) - 1
    for x in range(1 << f.n):
        for extra in submasks(full & ~x):
            if vals[x] > vals[x | extra]:
                return Check(False, (_subset(x), _subset(x | extra)), "f(X) > f(Y) for X subset of Y")
    return Check(True)


def approximates(g: SetFunction, f, alpha, budget=None) -> Check:
    """Sandwich ``g(U) <= f(X_1..X_k) <= alpha * g(U)`` with ``U`` the union.

    When ``g(U) = 0`` the upper bound is read as ``f(...) = 0``.
    """
    alpha = to_ext(alpha)
    fk = _as_kset(f)
    if g.n != fk.n:
        raise InputError("ground sets differ")
    _budget.check((fk.k + 1) ** fk.n, budget, "approximation sweep")
    gvals = g.values()
    for labels in fk.labelings():
        gv = gvals[support(labels)]
        fv = fk.at(labels)
        if gv == 0:
            upper_ok = fv == 0
        elif gv is INF:
            upper_ok = True
        else:
            upper_ok = fv <= alpha * gv
        if not (gv <= fv and upper_ok):
            w = _subset(support(labels)) if fk.k == 1 else blocks_of(labels, fk.k)
            return Check(False, w, "lower bound fails" if gv > fv else "upper bound fails")
    return Check(True)
