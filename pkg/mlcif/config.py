from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded

# ---- Desk-scale defaults -----------------------------------------------------

DEFAULT_MAX_K = 5
DEFAULT_MAX_N = 12

# compare_report verifies formulas by enumeration up to this ground-set size
ORACLE_MAX_N = 12

# upper end of the "sufficiently large n" scans, as a multiple of k
THRESHOLD_HORIZON_FACTOR = 10

# bitmask fast paths need every element to fit in a uint64 word
BITMASK_MAX_N = 63


@dataclass(frozen=True)
class Budget:
    """Resource guard for the exponential searches (PGS enumeration, census, oracles)."""

    max_k: int = DEFAULT_MAX_K
    max_n: int = DEFAULT_MAX_N
    time_budget: Optional[float] = None

    def deadline(self) -> Optional[float]:
        if self.time_budget is None:
            return None
        return time.monotonic() + float(self.time_budget)

    def check_k(self, k: int, what: str) -> None:
        if k > self.max_k:
            raise BudgetExceeded(f"{what}: k={k} exceeds the budget max_k={self.max_k}")

    def check_n(self, n: int, what: str) -> None:
        if n > self.max_n:
            raise BudgetExceeded(f"{what}: n={n} exceeds the budget max_n={self.max_n}")

    @staticmethod
    def check_deadline(deadline: Optional[float], what: str) -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded(f"{what}: time budget exhausted")


DEFAULT_BUDGET = Budget()

__all__ = [
    "DEFAULT_MAX_K",
    "DEFAULT_MAX_N",
    "ORACLE_MAX_N",
    "THRESHOLD_HORIZON_FACTOR",
    "BITMASK_MAX_N",
    "Budget",
    "DEFAULT_BUDGET",
]
