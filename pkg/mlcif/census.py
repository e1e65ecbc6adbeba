from __future__ import annotations

import logging
from typing import List, Optional, Set

from .build import is_mlcif
from .config import DEFAULT_BUDGET, Budget
from .errors import InputError
from .poset import UniformFamily, ZSet, k_sets, unit_decrements

log = logging.getLogger("mlcif.census")


def family_sort_key(fam: UniformFamily):
    return len(fam), tuple(m.elements for m in fam.sorted())


def census_mlcifs(n: int, k: int, budget: Optional[Budget] = None) -> List[UniformFamily]:
    """
    Every maximal left-compressed intersecting subfamily of C([n], k), by brute force.

    k-sets are visited along a linear extension of <= (coordinate sum, then
    lexicographic), so every lower cover is decided before the sets above it.
    A set may be included only when all its lower covers are in and it meets
    every included set; each leaf is then checked for maximality.
    """
    budget = budget or DEFAULT_BUDGET
    if k < 2 or n < 2 * k:
        raise InputError(f"census needs k >= 2 and n >= 2k, got n={n}, k={k}")
    budget.check_k(k, "census")
    budget.check_n(n, "census")
    deadline = budget.deadline()

    order = sorted(k_sets(n, k), key=lambda s: (sum(s.elements), s.elements))
    covers = [tuple(unit_decrements(s)) for s in order]
    included: Set[ZSet] = set()
    masks: List[int] = []
    found: List[UniformFamily] = []
    leaves = 0

    def rec(pos: int) -> None:
        nonlocal leaves
        if pos == len(order):
            leaves += 1
            if leaves % 256 == 0:
                Budget.check_deadline(deadline, "census")
            fam = UniformFamily(n, k, frozenset(included))
            if is_mlcif(fam):
                found.append(fam)
            return
        s = order[pos]
        if all(c in included for c in covers[pos]) and all(s.mask & m for m in masks):
            included.add(s)
            masks.append(s.mask)
            rec(pos + 1)
            masks.pop()
            included.discard(s)
        rec(pos + 1)

    rec(0)
    found.sort(key=family_sort_key)
    log.info("[census] n=%d k=%d: %d intersecting down-sets, %d MLCIFs", n, k, leaves, len(found))
    return found


__all__ = ["census_mlcifs", "family_sort_key"]
