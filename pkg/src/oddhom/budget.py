"""Node budgets for exhaustive searches."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**8
ENV_VAR = "ODD_HOM_BUDGET"


class BudgetExceeded(RuntimeError):
    """A search ran out of node budget before finishing. Not a negative answer."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what}: node budget of {limit} expansions exhausted")
        self.what = what
        self.limit = limit

    def __reduce__(self):
        return (type(self), (self.what, self.limit))


def default_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    return DEFAULT_BUDGET


class Budget:
    __slots__ = ("limit", "used", "what")

    def __init__(self, limit: int | None = None, what: str = "search"):
        self.limit = default_budget() if limit is None else limit
        self.used = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.what, self.limit)
