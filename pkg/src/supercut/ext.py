"""Exact extended rationals: ``fractions.Fraction`` plus a positive infinity.

Finite values are plain ``Fraction`` objects (always in lowest terms).  The
single :data:`INF` object stands for +infinity; it interoperates with
``Fraction`` and ``int`` through the reflected operator protocol, so ``sum``,
``min``, ``max`` and comparisons work without special casing.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union


class _Infinity:
    __slots__ = ()

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("supercut.INF")

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        _check_operand(other)
        return False

    def __le__(self, other):
        _check_operand(other)
        return other is self

    def __gt__(self, other):
        _check_operand(other)
        return other is not self

    def __ge__(self, other):
        _check_operand(other)
        return True

    def __add__(self, other):
        _check_operand(other)
        return self

    __radd__ = __add__

    def __sub__(self, other):
        _check_operand(other)
        if other is self:
            raise ArithmeticError("INF - INF is undefined")
        return self

    def __rsub__(self, other):
        raise ArithmeticError("finite - INF is not representable")

    def __mul__(self, other):
        _check_operand(other)
        if other is self:
            return self
        if other == 0:
            raise ArithmeticError("0 * INF is undefined")
        if other < 0:
            raise ArithmeticError("negative * INF is not representable")
        return self

    __rmul__ = __mul__

    def __truediv__(self, other):
        _check_operand(other)
        if other is self:
            raise ArithmeticError("INF / INF is undefined")
        if other <= 0:
            raise ArithmeticError("INF divided by a non-positive value")
        return self

    def __rtruediv__(self, other):
        _check_operand(other)
        return Fraction(0)

    def __bool__(self):
        return True


def _check_operand(other):
    if other is INF or isinstance(other, Rational):
        return
    raise TypeError(f"unsupported operand for extended rational: {other!r}")


INF = _Infinity()

ExtRational = Union[Fraction, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def to_ext(value) -> ExtRational:
    """Coerce ``value`` into an extended rational.

    Accepts ints, Fractions, :data:`INF`, and strings of the form ``"3"``,
    ``"-2/5"`` or ``"inf"``.  Floats are refused: every value in the system is
    exact.
    """
    if value is INF:
        return INF
    if isinstance(value, bool):
        raise TypeError("booleans are not extended rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "+infinity", "∞"):
            return INF
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an extended rational")


def fmt(x: ExtRational) -> str:
    """Serialise as ``"p/q"``, ``"p"`` or ``"inf"``."""
    if x is INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def scale(c, x: ExtRational) -> ExtRational:
    """``c * x`` for ``c >= 0`` with the convention ``0 * INF = 0``.

    Only for places where a zero factor provably removes the term (zero
    constraint weights).  Everywhere else plain ``*`` raises on ``0 * INF``.
    """
    if c == 0:
        return Fraction(0)
    if c < 0:
        raise ArithmeticError("negative scale factor")
    return c * x


def ceil(x: ExtRational) -> ExtRational:
    if x is INF:
        return INF
    x = Fraction(x)
    return Fraction(-(-x.numerator // x.denominator))


def ratio(lhs: ExtRational, rhs: ExtRational):
    """The factor ``a`` needed for ``lhs <= a * rhs``; ``None`` when any ``a`` works.

    Conventions: ``lhs <= 0`` never binds; ``rhs = 0 < lhs`` needs INF;
    ``lhs = INF`` needs INF unless ``rhs`` is INF too.
    """
    if lhs is not INF and lhs <= 0:
        return None
    if rhs is INF:
        return None
    if lhs is INF:
        return INF
    if rhs <= 0:
        return INF
    return Fraction(lhs) / Fraction(rhs)
