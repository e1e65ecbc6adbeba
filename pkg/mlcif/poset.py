from __future__ import annotations

import functools
from dataclasses import dataclass, field
from itertools import combinations
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import BITMASK_MAX_N
from .errors import InputError

# ---- Set objects -------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class ZSet:
    """
    A finite subset of [n] kept in strictly ascending order.

    Equality, hashing and ordering use the element tuple only; ``n_max`` is an
    optional ground-set bound and ``mask`` an integer bitmask mirror (bit i set
    iff i is a member) used for fast disjointness tests.
    """

    elements: Tuple[int, ...] = ()
    n_max: Optional[int] = field(default=None, compare=False)
    mask: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        elems = tuple(int(e) for e in self.elements)
        prev = 0
        for e in elems:
            if e <= prev:
                raise InputError(f"ZSet elements must be strictly increasing and >= 1, got {elems}")
            prev = e
        if self.n_max is not None and elems and elems[-1] > self.n_max:
            raise InputError(f"ZSet {elems} exceeds ground set [{self.n_max}]")
        mask = 0
        for e in elems:
            mask |= 1 << e
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def of(cls, *elements: int, n_max: Optional[int] = None) -> "ZSet":
        return cls(tuple(sorted(set(elements))), n_max=n_max)

    @classmethod
    def from_iterable(cls, elements: Iterable[int], n_max: Optional[int] = None) -> "ZSet":
        return cls(tuple(sorted(set(int(e) for e in elements))), n_max=n_max)

    @classmethod
    def interval(cls, a: int, b: int) -> "ZSet":
        """The integer interval [a, b]; empty when a > b."""
        return cls(tuple(range(a, b + 1)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __getitem__(self, idx: int) -> int:
        return self.elements[idx]

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and x >= 0 and bool(self.mask >> x & 1)

    def __lt__(self, other: "ZSet") -> bool:
        if not isinstance(other, ZSet):
            return NotImplemented
        return self.elements < other.elements

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"

    def coord(self, i: int) -> int:
        """1-based coordinate a_i."""
        if not 1 <= i <= len(self.elements):
            raise InputError(f"coordinate {i} out of range for {self}")
        return self.elements[i - 1]

    @property
    def max(self) -> int:
        return self.elements[-1] if self.elements else 0

    def isdisjoint(self, other: "ZSet") -> bool:
        return not (self.mask & other.mask)

    def union(self, other: Iterable[int]) -> "ZSet":
        return ZSet.from_iterable(set(self.elements) | set(other))


@dataclass(frozen=True)
class UniformFamily:
    """A family of k-subsets of [n] with n and k carried explicitly."""

    n: int
    k: int
    members: FrozenSet[ZSet] = frozenset()

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        for m in members:
            if len(m) != self.k:
                raise InputError(f"member {m} has size {len(m)}, family is {self.k}-uniform")
            if m.max > self.n:
                raise InputError(f"member {m} is not a subset of [{self.n}]")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "UniformFamily":
        return cls(n, k, frozenset(s if isinstance(s, ZSet) else ZSet.from_iterable(s) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, s: object) -> bool:
        return s in self.members

    def __iter__(self) -> Iterator[ZSet]:
        return iter(self.sorted())

    def sorted(self) -> List[ZSet]:
        return sorted(self.members)

    def masks(self) -> np.ndarray:
        """Member bitmasks in canonical order (uint64 when n fits, else object ints)."""
        dtype = np.uint64 if self.n <= BITMASK_MAX_N else object
        return np.array([m.mask for m in self.sorted()], dtype=dtype)


# ---- Prefix profiles and the two orders --------------------------------------


def _mu(elements: Sequence[int], ell: int) -> int:
    count = 0
    for e in elements:
        if e > ell:
            break
        count += 1
    return count


def mu(X: ZSet, ell: int, n: Optional[int] = None) -> int:
    """
    |X ∩ [ell]|.

    ell must lie in [1, n]; n defaults to ``X.n_max``. With neither given only
    ell >= 1 is enforced.
    """
    bound = n if n is not None else X.n_max
    if n is not None and X.max > n:
        raise InputError(f"mu: {X} is not a subset of [{n}]")
    if ell < 1 or (bound is not None and ell > bound):
        raise InputError(f"mu: ell={ell} outside [1, {bound if bound is not None else 'n'}]")
    return _mu(X.elements, ell)


def leq_uniform(A: ZSet, B: ZSet) -> bool:
    """Coordinatewise order on equal-size sets."""
    if len(A) != len(B):
        raise InputError(f"leq_uniform: size mismatch |{A}|={len(A)} vs |{B}|={len(B)}")
    return all(a <= b for a, b in zip(A.elements, B.elements))


def strictly_less(A: ZSet, B: ZSet) -> bool:
    return A != B and leq_uniform(A, B)


def preceq(A: ZSet, B: ZSet) -> bool:
    """A ⪯ B: A is at least as long as B and its first |B| coordinates are bounded by B's."""
    if len(A) < len(B):
        return False
    return all(a <= b for a, b in zip(A.elements, B.elements))


def wedge(sets: Sequence[ZSet]) -> ZSet:
    """Coordinatewise minimum, padding shorter sets with +infinity."""
    sets = list(sets)
    if not sets:
        raise InputError("wedge of an empty list is undefined")
    if any(len(s) == 0 for s in sets):
        raise InputError("wedge operands must be non-empty")
    d = max(len(s) for s in sets)
    out = [min(s.elements[i] for s in sets if len(s) > i) for i in range(d)]
    return ZSet(tuple(out))


# ---- Closures and k-set enumeration ------------------------------------------


def k_sets(n: int, k: int) -> List[ZSet]:
    """All k-subsets of [n] in lexicographic order."""
    return [ZSet(c, n_max=n) for c in combinations(range(1, n + 1), k)]


def _below(bound: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    r = len(bound)
    prefix: List[int] = []

    def rec(i: int, lo: int) -> Iterator[Tuple[int, ...]]:
        if i == r:
            yield tuple(prefix)
            return
        for v in range(lo, bound[i] + 1):
            prefix.append(v)
            yield from rec(i + 1, v + 1)
            prefix.pop()

    return rec(0, 1)


def compression_closure(A: ZSet, n: Optional[int] = None) -> UniformFamily:
    """L(A): every |A|-set S with S <= A."""
    if not len(A):
        raise InputError("compression_closure of the empty set is undefined")
    ground = n if n is not None else (A.n_max or A.max)
    return UniformFamily(ground, len(A), frozenset(ZSet(t) for t in _below(A.elements)))


def maximal_elements(family: Iterable[ZSet], order: str = "leq") -> List[ZSet]:
    """Members not strictly dominated under ``order`` ("leq" or "preceq"), in canonical order."""
    members = sorted(set(family))
    if order == "leq":
        if len({len(m) for m in members}) > 1:
            raise InputError("maximal_elements: mixed sizes under leq")
        rel = lambda a, b: all(x <= y for x, y in zip(a.elements, b.elements))  # noqa: E731
    elif order == "preceq":
        rel = preceq
    else:
        raise InputError(f"unknown order {order!r}")
    return [
        a for a in members
        if not any(b != a and rel(a, b) for b in members)
    ]


def unit_decrements(A: ZSet) -> Iterator[ZSet]:
    """Lower covers of A under <=: decrease one coordinate by one."""
    elems = A.elements
    for i, a in enumerate(elems):
        floor = elems[i - 1] if i else 0
        if a - 1 > floor:
            yield ZSet(elems[:i] + (a - 1,) + elems[i + 1:])


def is_left_compressed(family: UniformFamily) -> bool:
    members = family.members
    return all(b in members for a in members for b in unit_decrements(a))


# ---- Intersection properties of families -------------------------------------


def find_disjoint_pair(family: UniformFamily) -> Optional[Tuple[ZSet, ZSet]]:
    """First disjoint pair of members in canonical order, or None."""
    ordered = family.sorted()
    if family.n <= BITMASK_MAX_N and ordered:
        masks = family.masks()
        for i in range(len(ordered)):
            hits = np.flatnonzero((masks[i] & masks[i:]) == 0)
            if hits.size:
                return ordered[i], ordered[i + int(hits[0])]
        return None
    for i, a in enumerate(ordered):
        for b in ordered[i:]:
            if a.isdisjoint(b):
                return a, b
    return None


def is_intersecting(family: UniformFamily) -> bool:
    return find_disjoint_pair(family) is None


def is_trivial(family: UniformFamily) -> bool:
    """All members share a common element (an empty family counts as trivial)."""
    if not family.members:
        return True
    common = ~0
    for m in family.members:
        common &= m.mask
    return common != 0


def are_cross_intersecting(A: Iterable[ZSet], B: Iterable[ZSet]) -> bool:
    left = list(A)
    return all(not a.isdisjoint(b) for b in B for a in left)


__all__ = [
    "ZSet",
    "UniformFamily",
    "mu",
    "leq_uniform",
    "strictly_less",
    "preceq",
    "wedge",
    "k_sets",
    "compression_closure",
    "maximal_elements",
    "unit_decrements",
    "is_left_compressed",
    "find_disjoint_pair",
    "is_intersecting",
    "is_trivial",
    "are_cross_intersecting",
]
