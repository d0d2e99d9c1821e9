"""Weighted relations stored as dense row-major value tables."""
from __future__ import annotations

from itertools import product
from typing import Callable, Iterable, Sequence

from .errors import InputError
from .ext import INF, ExtRational, to_ext


class WeightedRelation:
    """A function ``D^r -> Q u {inf}`` with ``D = {0, ..., domain_size - 1}``.

    ``values[i]`` holds the value of the ``i``-th tuple in row-major order,
    i.e. tuple ``(x_1, ..., x_r)`` sits at ``sum x_i * |D|^(r - i)``.
    """

    __slots__ = ("arity", "domain_size", "values")

    def __init__(self, arity: int, domain_size: int, values: Iterable):
        if arity < 0 or domain_size < 1:
            raise InputError("arity must be >= 0 and domain size >= 1")
        vals = tuple(to_ext(v) for v in values)
        if len(vals) != domain_size**arity:
            raise InputError(
                f"table has {len(vals)} entries, expected {domain_size}^{arity}"
            )
        self.arity = arity
        self.domain_size = domain_size
        self.values = vals

    @classmethod
    def from_function(cls, arity: int, domain_size: int, fn: Callable[..., object]):
        return cls(arity, domain_size, (fn(*t) for t in product(range(domain_size), repeat=arity)))

    def __repr__(self):
        return f"WeightedRelation(arity={self.arity}, domain_size={self.domain_size})"

    def __eq__(self, other):
        return (
            isinstance(other, WeightedRelation)
            and self.arity == other.arity
            and self.domain_size == other.domain_size
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.arity, self.domain_size, self.values))

    def index(self, t: Sequence[int]) -> int:
        i = 0
        d = self.domain_size
        for x in t:
            i = i * d + x
        return i

    def __call__(self, *t: int) -> ExtRational:
        if len(t) == 1 and isinstance(t[0], (tuple, list)):
            t = tuple(t[0])
        if len(t) != self.arity:
            raise InputError(f"expected {self.arity} labels, got {len(t)}")
        for x in t:
            if not 0 <= x < self.domain_size:
                raise InputError(f"label {x} outside domain of size {self.domain_size}")
        return self.values[self.index(t)]

    def tuples(self):
        return product(range(self.domain_size), repeat=self.arity)

    def items(self):
        return zip(self.tuples(), self.values)

    @property
    def zero_value(self) -> ExtRational:
        """Value of the all-zeros tuple."""
        return self.values[0]

    def finite_values(self) -> list:
        return [v for v in self.values if v is not INF]
