"""Budget guard shared by every exhaustive routine."""

from __future__ import annotations


class BudgetExceeded(RuntimeError):
    """Raised before a computation would exceed its configured size cap."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: needs {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


def check_budget(what: str, needed: int, budget: int | None) -> None:
    if budget is not None and needed > budget:
        raise BudgetExceeded(what, needed, budget)
