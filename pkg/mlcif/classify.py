from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .build import PGS, GeneratingSet, build_mlcif, validate_pgs
from .errors import ContractViolation, InputError
from .poset import UniformFamily, ZSet, k_sets

log = logging.getLogger("mlcif.classify")

NAMED_FAMILIES = ("star", "a23", "hilton_milner", "ahm")

_ALIASES = {
    "star": "star",
    "a23": "a23",
    "a_23": "a23",
    "hilton_milner": "hilton_milner",
    "hilton-milner": "hilton_milner",
    "hm": "hilton_milner",
    "ahm": "ahm",
}


@dataclass(frozen=True)
class FamilyProfile:
    rank: int
    max_gen_count: int
    max_gens: Tuple[ZSet, ...]
    recognized_form: str = "other"

    def __post_init__(self) -> None:
        if self.rank < 1 or self.max_gen_count < 1 or self.max_gen_count != len(self.max_gens):
            raise ContractViolation(f"inconsistent profile {self}")

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "max_gen_count": self.max_gen_count,
            "max_gens": [list(g.elements) for g in self.max_gens],
            "recognized_form": self.recognized_form,
        }


@dataclass(frozen=True)
class TwoMaxgenDiagnostic:
    """A two-maximal-generator family whose generators are not [a,b] and {1} ∪ [b-a+2, b]."""

    pgs: PGS
    max_gens: Tuple[ZSet, ...]

    def __str__(self) -> str:
        gens = ", ".join(str(g) for g in self.max_gens)
        return f"PGS {self.pgs} (k={self.pgs.k}) has maximal generators {gens}, not of the form [a,b], {{1}} ∪ [b-a+2,b]"


# ---- Two maximal generators --------------------------------------------------


def _interval_bounds(G: ZSet) -> Optional[Tuple[int, int]]:
    if not len(G) or G.elements != tuple(range(G[0], G.max + 1)):
        return None
    return G[0], G.max


def _match_two(max_gens: List[ZSet]) -> Optional[Tuple[int, int]]:
    free = [g for g in max_gens if 1 not in g]
    with_one = [g for g in max_gens if 1 in g]
    if len(free) != 1 or len(with_one) != 1:
        return None
    bounds = _interval_bounds(free[0])
    if bounds is None:
        return None
    a, b = bounds
    if a < 2 or b <= 2 * a - 1:
        return None
    if with_one[0] != ZSet((1,) + tuple(range(b - a + 2, b + 1))):
        return None
    return a, b


def classify_two_maxgen(gens: GeneratingSet) -> Optional[Tuple[int, int]]:
    """(a, b) with maximal generators [a, b] and {1} ∪ [b-a+2, b], b > 2a-1; None when the shape fails."""
    max_gens = gens.maximal()
    if len(max_gens) != 2:
        raise ContractViolation(
            f"classify_two_maxgen needs exactly 2 maximal generators, got {len(max_gens)}",
            diagnostic=tuple(max_gens),
        )
    match = _match_two(max_gens)
    if match is None:
        diag = TwoMaxgenDiagnostic(gens.pgs, tuple(max_gens))
        log.warning("[classify] two-maximal-generator shape violated: %s", diag)
    return match


def recognize(gens: GeneratingSet) -> str:
    max_gens = gens.maximal()
    k = gens.k
    if max_gens == [ZSet((1,))]:
        return "star"
    if max_gens == [ZSet((2, 3))]:
        return "a23"
    if len(max_gens) == 2:
        match = _match_two(max_gens)
        if match is not None:
            a, b = match
            if a == 2 and b == k + 1:
                return "hilton_milner"
            if a == 2:
                return f"ahm({b})"
            return f"two_maxgen({a},{b})"
    return "other"


def profile(gens: GeneratingSet) -> FamilyProfile:
    max_gens = gens.maximal()
    return FamilyProfile(
        rank=gens.rank(),
        max_gen_count=len(max_gens),
        max_gens=tuple(max_gens),
        recognized_form=recognize(gens),
    )


def two_maxgen_diagnostics(catalog: Iterable[GeneratingSet]) -> List[TwoMaxgenDiagnostic]:
    """Every catalog entry with two maximal generators that misses the [a,b] shape."""
    out: List[TwoMaxgenDiagnostic] = []
    for gens in catalog:
        max_gens = gens.maximal()
        if len(max_gens) == 2 and _match_two(max_gens) is None:
            out.append(TwoMaxgenDiagnostic(gens.pgs, tuple(max_gens)))
    return out


# ---- Named families ----------------------------------------------------------


def canonical_name(name: str) -> str:
    key = name.strip().lower()
    if key not in _ALIASES:
        raise InputError(f"unknown named family {name!r}; expected one of {NAMED_FAMILIES}")
    return _ALIASES[key]


def named_pgs(name: str, k: int, b: Optional[int] = None) -> PGS:
    name = canonical_name(name)
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if name == "star":
        return validate_pgs(k, [])
    if name == "a23":
        return validate_pgs(k, [ZSet((2, 3))])
    if name == "hilton_milner":
        return validate_pgs(k, [ZSet.interval(2, k + 1)])
    if b is None or not 4 <= b <= k + 1:
        raise InputError(f"ahm needs 4 <= b <= k+1, got b={b}, k={k}")
    return validate_pgs(k, [ZSet.interval(2, b)])


def make_named(name: str, n: int, k: int, b: Optional[int] = None) -> Tuple[UniformFamily, GeneratingSet]:
    return build_mlcif(n, k, named_pgs(name, k, b))


def definitional_family(name: str, n: int, k: int, b: Optional[int] = None) -> UniformFamily:
    """The set-builder form of a named family, enumerated over C([n], k)."""
    name = canonical_name(name)
    if name == "star":
        keep = lambda s: 1 in s  # noqa: E731
    elif name == "a23":
        keep = lambda s: len({1, 2, 3} & set(s.elements)) >= 2  # noqa: E731
    else:
        top = k + 1 if name == "hilton_milner" else b
        if name == "ahm" and (top is None or not 4 <= top <= k + 1):
            raise InputError(f"ahm needs 4 <= b <= k+1, got b={top}, k={k}")
        block = set(range(2, top + 1))

        def keep(s: ZSet) -> bool:
            members = set(s.elements)
            if 1 in members:
                return bool(members & block)
            return block <= members

    return UniformFamily(n, k, frozenset(s for s in k_sets(n, k) if keep(s)))


__all__ = [
    "NAMED_FAMILIES",
    "FamilyProfile",
    "TwoMaxgenDiagnostic",
    "classify_two_maxgen",
    "recognize",
    "profile",
    "two_maxgen_diagnostics",
    "canonical_name",
    "named_pgs",
    "make_named",
    "definitional_family",
]
