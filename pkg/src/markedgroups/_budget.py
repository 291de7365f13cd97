"""Enumeration budgets.

Exponential enumerations are refused up front when their size exceeds the
configured cap, so no caller ever sees a silently truncated result.
"""
import os

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    def __init__(self, needed, budget, what="enumeration"):
        super().__init__(f"{what} needs {needed} items, budget is {budget}")
        self.needed = needed
        self.budget = budget


def default_budget():
    value = os.environ.get("MGL_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


def check_budget(needed, budget=None, what="enumeration"):
    budget = default_budget() if budget is None else budget
    if needed > budget:
        raise BudgetExceeded(needed, budget, what)
