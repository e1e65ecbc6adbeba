from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, List, Optional, Tuple

from .errors import ContractViolation, InputError
from .poset import ZSet, _below, _mu

# ---- Witness types -----------------------------------------------------------


@dataclass(frozen=True)
class SiWitness:
    """Smallest ell with mu_G(ell) + mu_H(ell) > ell."""

    ell: int
    mu_g: int
    mu_h: int

    def __post_init__(self) -> None:
        if self.mu_g + self.mu_h <= self.ell:
            raise ContractViolation(f"not a strong-intersection witness: {self}")


@dataclass(frozen=True)
class DisjointWitness:
    """S <= G and T <= H with S and T disjoint."""

    s: ZSet
    t: ZSet

    def __post_init__(self) -> None:
        if not self.s.isdisjoint(self.t):
            raise ContractViolation(f"witness sets {self.s} and {self.t} intersect")


@dataclass(frozen=True)
class PairVerdict:
    g: ZSet
    h: ZSet
    si: Optional[SiWitness]
    disjoint: Optional[DisjointWitness]

    @property
    def ok(self) -> bool:
        return self.si is not None

    def describe(self) -> str:
        pair = f"{self.g} ~ {self.h}" if self.g != self.h else f"{self.g} (self)"
        if self.si is not None:
            return f"{pair}: strongly intersecting at ell={self.si.ell}"
        if self.disjoint is not None:
            return f"{pair}: NOT strongly intersecting, disjoint witness ({self.disjoint.s}, {self.disjoint.t})"
        return f"{pair}: NOT strongly intersecting"


# ---- Strong intersection -----------------------------------------------------


def _check_pair(G: ZSet, H: ZSet, n: Optional[int]) -> int:
    if not len(G) or not len(H):
        raise InputError("strong intersection is not defined for an empty generator")
    top = max(G.max, H.max)
    if n is not None and top > n:
        raise InputError(f"generators {G}, {H} are not subsets of [{n}]")
    return top


def strongly_intersecting(G: ZSet, H: ZSet, n: Optional[int] = None) -> Optional[SiWitness]:
    """
    Decide whether every S <= G meets every T <= H.

    Returns the minimal ell with mu_G(ell) + mu_H(ell) > ell, or None. The scan
    stops at max(G ∪ H): past it both profiles are saturated.
    """
    top = _check_pair(G, H, n)
    mg = mh = 0
    g_set, h_set = G.mask, H.mask
    for ell in range(1, top + 1):
        mg += g_set >> ell & 1
        mh += h_set >> ell & 1
        if mg + mh > ell:
            return SiWitness(ell=ell, mu_g=mg, mu_h=mh)
    return None


def si_profile(G: ZSet, H: ZSet, n: Optional[int] = None) -> List[Tuple[int, int]]:
    """(ell, mu_G(ell) + mu_H(ell)) for every ell in [1, n]."""
    top = _check_pair(G, H, n)
    bound = n if n is not None else top
    return [(ell, _mu(G.elements, ell) + _mu(H.elements, ell)) for ell in range(1, bound + 1)]


def meet_indices(G: ZSet, H: ZSet) -> Tuple[int, int]:
    """
    Indices (p, q) with g_p = h_q = p + q - 1, read off the minimal witness ell.
    For G == H this gives p == q and g_p = 2p - 1.
    """
    w = strongly_intersecting(G, H)
    if w is None:
        raise ContractViolation(f"meet_indices: {G} and {H} are not strongly intersecting", diagnostic=(G, H))
    return w.mu_g, w.mu_h


@lru_cache(maxsize=4096)
def _closure_sorted(bound: Tuple[int, ...]) -> Tuple[ZSet, ...]:
    return tuple(ZSet(t) for t in _below(bound))


def disjoint_witness(G: ZSet, H: ZSet) -> Optional[DisjointWitness]:
    """Brute-force oracle: lexicographically least disjoint (S, T) in L(G) x L(H)."""
    if not len(G) or not len(H):
        raise InputError("disjoint_witness needs non-empty generators")
    right = _closure_sorted(H.elements)
    for s in _closure_sorted(G.elements):
        for t in right:
            if not (s.mask & t.mask):
                return DisjointWitness(s, t)
    return None


def pairwise_report(gens: Iterable[ZSet], n: Optional[int] = None) -> List[PairVerdict]:
    """Verdict for every unordered pair of generators, self-pairs included."""
    ordered = sorted(set(gens))
    out: List[PairVerdict] = []
    for g, h in combinations_with_replacement(ordered, 2):
        w = strongly_intersecting(g, h, n)
        out.append(PairVerdict(g, h, w, None if w is not None else disjoint_witness(g, h)))
    return out


def is_si_family(gens: Iterable[ZSet], n: Optional[int] = None) -> bool:
    ordered = sorted(set(gens))
    return all(
        strongly_intersecting(g, h, n) is not None
        for g, h in combinations_with_replacement(ordered, 2)
    )


__all__ = [
    "SiWitness",
    "DisjointWitness",
    "PairVerdict",
    "strongly_intersecting",
    "si_profile",
    "meet_indices",
    "disjoint_witness",
    "pairwise_report",
    "is_si_family",
]
