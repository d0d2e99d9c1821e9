"""Bounded Generalised Min-Cut: instances, optimum classification, enumeration.

An instance couples a weighted graph with a superadditive set function ``f``
and size bounds ``q <= |X| <= n - p``; the objective is ``h(X) = f(X) + w(X)``
with ``w`` the cut function.  :func:`enumerate_alpha_optimal` lists every
solution within a factor ``alpha`` of the optimum ``lam`` when
``0 < lam < inf``; :func:`brute_force_enumerate` is the exhaustive oracle with
the same output contract.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil as _intceil
from typing import Iterable, Protocol

from .errors import InfeasibleBounds, InputError, PreconditionError
from .ext import INF, ExtRational, ceil, to_ext
from .graphs import WeightedGraph, cut_weight, mask_of, members, popcount
from .setfunctions import (
    SetFunction,
    ShiftedSetFunction,
    TableSetFunction,
    is_superadditive,
    submasks,
)

BRUTE_FORCE_LIMIT = 16
_TABLE_LIMIT = 22


def tau(q: int, alpha) -> Fraction:
    """Exponent of the count bound for BGMC(q, 1): ``60 q alpha + 41 q + 7``."""
    return 60 * q * Fraction(alpha) + 41 * q + 7


def within_power(count: int, n: int, exponent) -> bool:
    """Exact test of ``count <= n ** exponent`` for a rational exponent."""
    exponent = Fraction(exponent)
    if exponent < 0:
        raise ValueError("negative exponent")
    if n == 0:
        return count <= (1 if exponent == 0 else 0)
    return count**exponent.denominator <= n**exponent.numerator


class BGMCInstance:
    """A BGMC(q, p) instance ``h = f + w`` on ``graph``.

    Table-backed ``f`` is checked for superadditivity on construction (pass
    ``check=False`` to skip); generator and shifted backings are trusted.
    """

    def __init__(self, graph: WeightedGraph, f: SetFunction, q: int, p: int, check: bool = True):
        if f.n != graph.n:
            raise InputError("set function and graph have different ground sets")
        if q < 0 or p < 0:
            raise InputError("bounds q and p must be nonnegative")
        if check and isinstance(f, TableSetFunction):
            res = is_superadditive(f)
            if not res:
                raise InputError(f"set function is not superadditive: {res.reason}, witness {res.witness}")
        self.graph = graph
        self.f = f
        self.q = q
        self.p = p
        self._table = None

    @property
    def n(self) -> int:
        return self.graph.n

    def __repr__(self):
        return f"BGMCInstance(n={self.n}, q={self.q}, p={self.p})"

    def value(self, subset) -> ExtRational:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        if self._table is not None:
            return self._table[mask]
        return self.f(mask) + cut_weight(self.graph, mask)

    def table(self) -> list:
        """``h`` at every bitmask (cached)."""
        if self._table is None:
            if self.n > _TABLE_LIMIT:
                raise PreconditionError(f"value table for n={self.n} is too large")
            edges = list(self.graph.edges.items())
            f = self.f
            tab = []
            for mask in range(1 << self.n):
                v = f(mask)
                for (u, w), c in edges:
                    if (mask >> u & 1) != (mask >> w & 1):
                        v = v + c
                tab.append(v)
            self._table = tab
        return self._table

    def is_solution(self, mask: int) -> bool:
        return self.q <= popcount(mask) <= self.n - self.p


@dataclass(frozen=True)
class OptimumClass:
    """Which of ``lam = 0``, ``0 < lam < inf`` or ``lam = inf`` holds.

    ``solution`` is a zero-valued solution for ``kind == "zero"`` and, for
    ``"positive_finite"``, some finite-valued solution found on the way.
    """

    kind: str
    solution: int | None = None

    ZERO = "zero"
    POSITIVE_FINITE = "positive_finite"
    INFINITE = "infinite"


@dataclass
class EnumerationResult:
    lam: ExtRational
    solutions: list[int] = field(default_factory=list)

    def as_sets(self) -> list[tuple[int, ...]]:
        return [tuple(members(m)) for m in self.solutions]


def classify_optimum(h: BGMCInstance) -> OptimumClass:
    """Decide whether the optimum is zero, positive and finite, or infinite.

    Only unions of at most ``q`` connected components are inspected: of the
    whole graph for the zero test, of the infinite-edge graph for the
    finiteness test.  Correct because ``f`` is increasing.
    """
    n, q, p = h.n, h.q, h.p
    if q > n - p:
        raise InfeasibleBounds(f"no solutions: q={q} > n - p = {n - p}")

    def unions(comps):
        for j in range(0, q + 1):
            for combo in combinations(comps, j):
                y = 0
                for c in combo:
                    y |= c
                if q <= popcount(y) <= n - p:
                    yield y

    for y in unions(h.graph.components()):
        if h.value(y) == 0:
            return OptimumClass(OptimumClass.ZERO, y)
    for y in unions(h.graph.components(infinite_only=True)):
        if h.value(y) is not INF:
            return OptimumClass(OptimumClass.POSITIVE_FINITE, y)
    return OptimumClass(OptimumClass.INFINITE)


def restrict_instance(h: BGMCInstance, vertices) -> BGMCInstance:
    """Instance on the induced subgraph ``G[V']`` with the same value on every ``X`` in ``V'``.

    Edges leaving ``V'`` become per-vertex charges on the set function.  The
    new instance's vertex ``i`` is the ``i``-th smallest vertex of ``V'``.
    """
    mask = vertices if isinstance(vertices, int) else mask_of(vertices)
    if mask >> h.n:
        raise InputError("V' is not a subset of V")
    keep = members(mask)
    charges = []
    for u in keep:
        c = Fraction(0)
        for v, w in h.graph.neighbours(u):
            if not mask >> v & 1:
                c = c + w
        charges.append(c)
    f = ShiftedSetFunction(h.f, keep, charges)
    return BGMCInstance(h.graph.induced(keep), f, h.q, h.p, check=False)


class GMCBackend(Protocol):
    """Pluggable GMC (q = p = 1) routine working on a global value table.

    ``universe`` is a bitmask; GMC solutions are its nonempty proper submasks.
    """

    def optimum(self, values, universe: int) -> tuple[ExtRational, int | None]: ...

    def enumerate(self, values, universe: int, alpha) -> list[int]: ...


class ExhaustiveGMC:
    """Reference GMC backend: sweeps every nonempty proper submask."""

    def optimum(self, values, universe):
        best, arg = INF, None
        for s in submasks(universe):
            if s == 0 or s == universe:
                continue
            v = values[s]
            if arg is None or v < best:
                best, arg = v, s
        return best, arg

    def enumerate(self, values, universe, alpha):
        lam, _ = self.optimum(values, universe)
        if lam is INF or lam == 0:
            raise PreconditionError("GMC enumeration needs 0 < lam < inf")
        bound = Fraction(alpha) * lam
        return [s for s in submasks(universe) if s and s != universe and values[s] <= bound]


DEFAULT_BACKEND = ExhaustiveGMC()


def _require_positive_finite(h: BGMCInstance) -> OptimumClass:
    cls = classify_optimum(h)
    if cls.kind != OptimumClass.POSITIVE_FINITE:
        raise PreconditionError(f"optimum must satisfy 0 < lam < inf, instance is {cls.kind}")
    return cls


def gmc_enumerate(h: BGMCInstance, alpha, backend: GMCBackend = DEFAULT_BACKEND) -> EnumerationResult:
    """All alpha-optimal solutions of a GMC instance (``q = p = 1``)."""
    if h.q != 1 or h.p != 1:
        raise PreconditionError("gmc_enumerate needs q = p = 1")
    alpha = to_ext(alpha)
    if alpha is INF or alpha < 1:
        raise PreconditionError("alpha must be a finite value >= 1")
    _require_positive_finite(h)
    values = h.table()
    full = (1 << h.n) - 1
    lam, _ = backend.optimum(values, full)
    sols = sorted(backend.enumerate(values, full, alpha))
    if not within_power(len(sols), h.n, 20 * _intceil(alpha) - 15):
        raise RuntimeError("GMC count bound n^(20 alpha - 15) violated")
    return EnumerationResult(lam, sols)


class _Recursion:
    """Case analysis over (current vertex set, Y-blocks, alpha).

    All sub-instances are restrictions of ``top``; by value preservation their
    objective on a subset equals ``top``'s, so one value table serves every
    level of the recursion.
    """

    def __init__(self, top: BGMCInstance, backend: GMCBackend):
        self.top = top
        self.q = top.q
        self.values = top.table()
        self.backend = backend
        self.memo: dict = {}
        self.classes: dict[int, str] = {}

    def _small_subsets(self, mask: int) -> list[int]:
        verts = members(mask)
        out = []
        for j in range(min(self.q, len(verts) + 1)):
            for combo in combinations(verts, j):
                out.append(mask_of(combo))
        return out

    def _positive_finite(self, universe: int) -> bool:
        kind = self.classes.get(universe)
        if kind is None:
            sub = restrict_instance(self.top, universe)
            sub.p = 1
            try:
                kind = classify_optimum(sub).kind
            except InfeasibleBounds:
                kind = OptimumClass.INFINITE
            self.classes[universe] = kind
        return kind == OptimumClass.POSITIVE_FINITE

    def run(self, universe: int, blocks: tuple[int, ...], alpha: Fraction) -> frozenset:
        key = (universe, blocks, alpha)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        q = self.q
        values = self.values
        y = 0
        for b in blocks:
            y |= b
        z = universe & ~y
        size = popcount(universe)
        if size <= q or z == 0:
            self.memo[key] = frozenset()
            return self.memo[key]

        def admissible(x):
            # solution of the current BGMC(q, 1) sub-instance, few vertices in Y
            return (
                q <= popcount(x) <= size - 1
                and popcount(x & y) < q
                and values[x] is not INF
            )

        out = set()
        small_y = self._small_subsets(y)
        lam_z, y_next = self.backend.optimum(values, z)

        # Case 1: X & Z is near-optimal for the GMC instance on Z, or all of Z.
        z_options = [z]
        if lam_z is not INF and lam_z > 0:
            z_options += self.backend.enumerate(values, z, ceil(3 * q * alpha + 2 * q))
        for s in z_options:
            for a in small_y:
                x = s | a
                if admissible(x):
                    out.add(x)

        # Case 2: a cheap GMC optimum of Z becomes a new Y-block.
        if y_next is not None and lam_z is not INF and popcount(y_next) < q:
            z2 = z & ~y_next
            # 2a: X contains at least q vertices of Y u Y_next.
            z2_options = self._small_subsets(z2)
            z2_options.append(z2)
            reduced = alpha - Fraction(1, 3)
            if reduced >= 1 and popcount(z2) > q and self._positive_finite(z2):
                z2_options.extend(self.run(z2, (), reduced))
            y2_options = {a | b for a in small_y for b in submasks(y_next)}
            for b in y2_options:
                if popcount(b) < q:
                    continue
                for s in z2_options:
                    x = s | b
                    if admissible(x):
                        out.add(x)
            # 2b: recurse on the refined partition.
            out |= self.run(universe, tuple(sorted(blocks + (y_next,))), alpha)

        result = frozenset(out)
        self.memo[key] = result
        return result


def _finite_edge_graph(h: BGMCInstance, alpha: Fraction, finite_solution: int | None) -> WeightedGraph:
    if not any(w is INF for w in h.graph.edges.values()):
        return h.graph
    full = (1 << h.n) - 1
    bound = h.f(full)
    if bound is INF:
        # f(V) is infinite: any finite solution value also bounds the optimum
        bound = h.value(finite_solution)
    big = alpha * (1 + bound + h.graph.total_finite_weight())
    return WeightedGraph(
        h.n, [(u, v, big if w is INF else w) for (u, v), w in h.graph.edges.items()]
    )


def _check_blocks(h: BGMCInstance, blocks) -> tuple[int, ...]:
    masks = []
    seen = 0
    for b in blocks:
        m = b if isinstance(b, int) else mask_of(b)
        if m & seen:
            raise PreconditionError("Y-blocks must be disjoint")
        if not 0 < popcount(m) < h.q:
            raise PreconditionError("every Y-block needs 0 < |Y_i| < q")
        if m >> h.n:
            raise PreconditionError("Y-block outside the vertex set")
        seen |= m
        masks.append(m)
    return tuple(sorted(masks))


def enumerate_bounded(
    h: BGMCInstance, blocks: Iterable = (), alpha=1, backend: GMCBackend = DEFAULT_BACKEND
) -> list[int]:
    """Candidate superset of the alpha-optimal solutions ``X`` with ``|X & Y| < q``.

    ``h`` must be BGMC(q, 1) with ``q >= 2``.  Returns bitmasks in ascending
    order; the caller filters by value.
    """
    if h.q < 2 or h.p != 1:
        raise PreconditionError("enumerate_bounded needs q >= 2 and p = 1")
    alpha = to_ext(alpha)
    if alpha is INF or alpha < 1:
        raise PreconditionError("alpha must be a finite value >= 1")
    block_masks = _check_blocks(h, blocks)
    if h.n <= h.q:
        return []
    cls = classify_optimum(h)
    if cls.kind == OptimumClass.INFINITE:
        return []
    if cls.kind == OptimumClass.ZERO:
        raise PreconditionError("optimum is zero; enumeration needs 0 < lam < inf")
    graph = _finite_edge_graph(h, alpha, cls.solution)
    top = BGMCInstance(graph, h.f, h.q, 1, check=False)
    rec = _Recursion(top, backend)
    return sorted(rec.run((1 << h.n) - 1, block_masks, alpha))


class _SizeCapped(SetFunction):
    """``f`` with value infinity on sets larger than ``limit``."""

    kind = "capped"

    def __init__(self, base: SetFunction, limit: int):
        super().__init__(base.n)
        self.base = base
        self.limit = limit

    def __call__(self, mask):
        if popcount(mask) > self.limit:
            return INF
        return self.base(mask)


def _finish(h: BGMCInstance, candidates: Iterable[int], alpha) -> EnumerationResult:
    values = h.table()
    pool = sorted({m for m in candidates if h.is_solution(m)})
    if not pool:
        return EnumerationResult(INF, [])
    lam = min(values[m] for m in pool)
    if lam is INF:
        return EnumerationResult(INF, [])
    if lam == 0:
        return EnumerationResult(lam, [m for m in pool if values[m] == 0])
    bound = alpha * lam
    return EnumerationResult(lam, [m for m in pool if values[m] <= bound])


def enumerate_alpha_optimal(h: BGMCInstance, alpha=1, backend: GMCBackend = DEFAULT_BACKEND) -> EnumerationResult:
    """Every alpha-optimal solution of a BGMC(q, p) instance with ``0 < lam < inf``.

    The instance is lifted to BGMC(max(q, 2), 1) by making sets larger than
    ``n - p`` infinitely expensive; the at most ``n + 2`` solutions the lift
    excludes (empty set, singletons, ``V``) are added back by hand.
    """
    alpha = to_ext(alpha)
    if alpha is INF or alpha < 1:
        raise PreconditionError("alpha must be a finite value >= 1")
    _require_positive_finite(h)
    n, q, p = h.n, h.q, h.p
    q2 = max(q, 2)
    f2 = _SizeCapped(h.f, n - p) if p > 0 else h.f
    lifted = BGMCInstance(h.graph, f2, q2, 1, check=False)
    candidates: set[int] = set()
    if n > q2:
        kind = classify_optimum(lifted).kind
        if kind == OptimumClass.ZERO:
            raise RuntimeError("lifted instance has zero optimum although the original does not")
        if kind == OptimumClass.POSITIVE_FINITE:
            candidates.update(enumerate_bounded(lifted, (), alpha, backend))
    if q == 0:
        candidates.add(0)
    if q <= 1:
        candidates.update(1 << v for v in range(n))
    if p == 0:
        candidates.add((1 << n) - 1)
    result = _finish(h, candidates, alpha)
    if not within_power(len(result.solutions), n, tau(q, alpha)):
        raise RuntimeError("count bound n^tau(q, alpha) violated")
    return result


def brute_force_enumerate(h: BGMCInstance, alpha=1, limit: int = BRUTE_FORCE_LIMIT) -> EnumerationResult:
    """Exhaustive oracle: sweep all ``2^n`` subsets.

    Same contract as :func:`enumerate_alpha_optimal`; for ``lam = 0`` it
    returns the zero-valued solutions and for ``lam = inf`` nothing.
    """
    if h.n > limit:
        raise PreconditionError(f"brute force limited to n <= {limit}, got n={h.n}")
    if h.q > h.n - h.p:
        raise InfeasibleBounds(f"no solutions: q={h.q} > n - p = {h.n - h.p}")
    alpha = to_ext(alpha)
    return _finish(h, range(1 << h.n), alpha)
