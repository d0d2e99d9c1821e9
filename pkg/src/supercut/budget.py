"""Evaluation budget for exhaustive sweeps.

Every exhaustive checker computes the number of evaluations it is about to
perform and refuses to start if that exceeds the budget.  The default can be
overridden process-wide with the ``SUPERCUT_BUDGET`` environment variable,
or for a block of code with :func:`scoped`.
"""
import os
from contextlib import contextmanager

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7

_override: int | None = None


@contextmanager
def scoped(budget: int | None):
    """Use ``budget`` for calls that pass none of their own; ``None`` changes nothing."""
    global _override
    saved = _override
    if budget is not None:
        _override = int(budget)
    try:
        yield
    finally:
        _override = saved


def resolve(budget=None, default: int = DEFAULT_BUDGET) -> int:
    if budget is not None:
        return int(budget)
    if _override is not None:
        return _override
    env = os.environ.get("SUPERCUT_BUDGET")
    if env:
        return int(env)
    return default


def check(count: int, budget=None, what: str = "sweep", default: int = DEFAULT_BUDGET) -> None:
    limit = resolve(budget, default)
    if count > limit:
        raise BudgetExceeded(f"{what} needs {count} evaluations, budget is {limit}")
