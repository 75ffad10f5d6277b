"""Search-budget configuration shared by the exhaustive searches."""
from __future__ import annotations

import os

DEFAULT_BUDGET = 1 << 24
ENV_VAR = "FUSION2_BUDGET"


class BudgetExceeded(RuntimeError):
    """An exhaustive search would visit more candidates than allowed."""

    def __init__(self, required: int, budget: int, what: str = "search"):
        super().__init__(f"{what} needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    try:
        value = int(raw.strip().replace("_", ""), 0)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{ENV_VAR} must be positive")
    return value


def resolve_budget(budget: int | None) -> int:
    return default_budget() if budget is None else budget
