from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .build import PGS, build_mlcif
from .config import BITMASK_MAX_N, DEFAULT_BUDGET, ORACLE_MAX_N, THRESHOLD_HORIZON_FACTOR, Budget
from .errors import BudgetExceeded, ContractViolation, InputError, WrongCaseError
from .poset import UniformFamily, ZSet, _mu, k_sets

log = logging.getLogger("mlcif.counting")

# ---- Binomials and closure counts --------------------------------------------


def binom(n: int, r: int) -> int:
    """Exact C(n, r), zero outside 0 <= r <= n."""
    if r < 0 or n < 0 or r > n:
        return 0
    return comb(n, r)


@lru_cache(maxsize=65536)
def _count_below(bounds: Tuple[int, ...]) -> int:
    if not bounds:
        return 1
    head, rest = bounds[0], bounds[1:]
    return sum(_count_below(tuple(b - i for b in rest)) for i in range(1, head + 1))


def count_L(G: ZSet) -> int:
    """|L(G)| by the first-coordinate recursion, memoized on the shifted bound tuple."""
    return _count_below(G.elements)


def count_interval_L(a: int, b: int) -> int:
    """|L([a, b])| = C(b, a - 1)."""
    if a > b:
        raise InputError(f"count_interval_L needs a <= b, got [{a}, {b}]")
    if a < 1:
        raise InputError(f"interval [{a}, {b}] leaves [1, n]")
    return binom(b, a - 1)


def count_F(n: int, k: int, G: ZSet) -> int:
    """|F(n, k, {G})| = |L(G ∪ [n-k+r+1, n])| with r = |G|."""
    r = len(G)
    if not 1 <= r <= k:
        raise InputError(f"count_F needs 1 <= |G| <= k, got |G|={r}, k={k}")
    if G.max > n:
        raise InputError(f"{G} is not a subset of [{n}]")
    pad_start = n - k + r + 1
    if G.max >= pad_start:
        raise InputError(
            f"count_F: {G} collides with the padding interval [{pad_start}, {n}]; "
            f"the padded sequence would not be a {k}-set"
        )
    return count_L(ZSet(G.elements + tuple(range(pad_start, n + 1))))


# ---- AHM_b sizes -------------------------------------------------------------


def _check_ahm(n: int, k: int, b: int) -> None:
    if not 4 <= b <= k + 1:
        raise InputError(f"AHM_b needs 4 <= b <= k+1, got b={b}, k={k}")
    if k + 1 > n - k + 1:
        raise InputError(f"AHM_b needs n >= 2k, got n={n}, k={k}")


def count_F_interval(n: int, k: int, b: int) -> int:
    """|F([2, b])|."""
    return b * binom(n - b, k - b + 1) + binom(n - b, k - b)


def count_F_one_b(n: int, k: int, b: int) -> int:
    """|F({1, b})|."""
    return binom(n - 1, k - 1) - binom(n - b, k - 1)


def count_F_overlap(n: int, k: int, b: int) -> int:
    """|F({1} ∪ [3, b])| = |F([2, b]) ∩ F({1, b})|."""
    return (b - 1) * binom(n - b, k - b + 1) + binom(n - b, k - b)


def size_ahm(n: int, k: int, b: int) -> int:
    _check_ahm(n, k, b)
    return binom(n - 1, k - 1) - binom(n - b, k - 1) + binom(n - b, k - b + 1)


def ahm_parts(n: int, k: int, b: int) -> Dict[str, int]:
    _check_ahm(n, k, b)
    return {
        "interval": count_F_interval(n, k, b),
        "one_b": count_F_one_b(n, k, b),
        "overlap": count_F_overlap(n, k, b),
    }


def ekr_bound_holds(fam: UniformFamily) -> bool:
    """|A| <= C(n-1, k-1)."""
    return len(fam) <= binom(fam.n - 1, fam.k - 1)


# ---- Families meeting a test set X -------------------------------------------


def star_count_X(n: int, k: int, d: int) -> int:
    """|S(X)| for any X ⊆ [2, n] with |X| = d."""
    if not 0 <= d <= n - 1:
        raise InputError(f"star_count_X needs 0 <= d <= n-1, got d={d}, n={n}")
    return binom(n - 1, k - 1) - binom(n - d - 1, k - 1)


def count_AX_case1(n: int, k: int, b: int, d: int, mu_b: int) -> int:
    """|A(X)| for AHM_b when X meets [2, b]."""
    _check_ahm(n, k, b)
    if mu_b < 1:
        raise WrongCaseError("count_AX_case1 needs X ∩ [2, b] non-empty (mu_X(b) >= 1); use count_AX_case2")
    if mu_b > min(d, b - 1):
        raise InputError(f"mu_X(b)={mu_b} exceeds min(d, b-1)={min(d, b - 1)}")
    return (
        binom(n - 1, k - 1)
        - binom(n - b, k - 1)
        + binom(n - b, k - b + 1)
        - binom(n - d - 1, k - 1)
        + binom(n - d - b + mu_b, k - 1)
    )


def count_A0X_case2(n: int, k: int, b: int, d: int) -> int:
    """|A_0(X)| for AHM_b when X avoids [2, b]."""
    _check_ahm(n, k, b)
    if d > n - b:
        raise WrongCaseError(f"X ∩ [2, b] = ∅ forces d <= n - b, got d={d}")
    return binom(n - d - 1, k - 1) - binom(n - d - b, k - 1) + binom(n - b - d, k - b + 1)


def count_AX_case2(n: int, k: int, b: int, d: int) -> int:
    """|A(X)| for AHM_b when X avoids [2, b]."""
    _check_ahm(n, k, b)
    if d > n - b:
        raise WrongCaseError(f"X ∩ [2, b] = ∅ forces d <= n - b, got d={d}")
    return (
        binom(n - 1, k - 1)
        - binom(n - b, k - 1)
        + binom(n - b, k - b + 1)
        - binom(n - d - 1, k - 1)
        + binom(n - d - b, k - 1)
        - binom(n - b - d, k - b + 1)
    )


def enumerate_AX(fam: UniformFamily, X: ZSet) -> Tuple[int, int]:
    """(members meeting X, members avoiding X) by direct filtering."""
    if X.max > fam.n:
        raise InputError(f"X={X} is not a subset of [{fam.n}]")
    if not len(fam):
        return 0, 0
    if fam.n <= BITMASK_MAX_N:
        hits = int(np.count_nonzero(fam.masks() & np.uint64(X.mask)))
    else:
        hits = sum(1 for m in fam.members if not m.isdisjoint(X))
    return hits, len(fam) - hits


def _verdict(a: int, s: int) -> str:
    return "<" if a < s else (">" if a > s else "=")


def borg_compare(fam: UniformFamily, X: ZSet) -> Tuple[int, int, str]:
    """Enumerated |A(X)| against |S(X)| for an arbitrary family and X ⊆ [2, n]."""
    if 1 in X:
        raise InputError("X must be a subset of [2, n]")
    a_X, _ = enumerate_AX(fam, X)
    s_X = star_count_X(fam.n, fam.k, len(X))
    return a_X, s_X, _verdict(a_X, s_X)


@dataclass(frozen=True)
class CountReport:
    n: int
    k: int
    b: int
    d: int
    mu_X_b: int
    X: ZSet
    a_total: int
    a_X: int
    a_0_X: int
    s_X: int
    method: str
    verdict: str

    def __post_init__(self) -> None:
        if self.a_X + self.a_0_X != self.a_total:
            raise ContractViolation(f"inconsistent report: {self.a_X} + {self.a_0_X} != {self.a_total}")
        if min(self.a_X, self.a_0_X, self.s_X) < 0:
            raise ContractViolation("negative count in report")
        if self.verdict != _verdict(self.a_X, self.s_X):
            raise ContractViolation(f"verdict {self.verdict!r} disagrees with a_X={self.a_X}, s_X={self.s_X}")

    @property
    def case(self) -> int:
        return 1 if self.mu_X_b >= 1 else 2

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["X"] = list(self.X.elements)
        for key in ("a_total", "a_X", "a_0_X", "s_X"):
            out[key] = str(out[key])
        out["case"] = self.case
        return out


def _oracle_ahm(n: int, k: int, b: int, budget: Budget) -> UniformFamily:
    if n > min(budget.max_n, ORACLE_MAX_N):
        raise BudgetExceeded(f"enumeration oracle: n={n} exceeds the budget max_n={min(budget.max_n, ORACLE_MAX_N)}")
    fam, _ = build_mlcif(n, k, PGS(k, (ZSet.interval(2, b),)))
    return fam


def compare_report(
    n: int,
    k: int,
    b: int,
    X: ZSet,
    oracle: bool = False,
    budget: Optional[Budget] = None,
) -> CountReport:
    """Formula counts of A(X) against S(X) for AHM_b, optionally checked by enumeration."""
    _check_ahm(n, k, b)
    if 1 in X:
        raise InputError("X must be a subset of [2, n] (it contains 1)")
    if X.max > n:
        raise InputError(f"X={X} is not a subset of [{n}]")
    d = len(X)
    mu_b = _mu(X.elements, b)
    a_total = size_ahm(n, k, b)
    a_X = count_AX_case1(n, k, b, d, mu_b) if mu_b else count_AX_case2(n, k, b, d)
    s_X = star_count_X(n, k, d)
    method = "formula"
    if oracle:
        fam = _oracle_ahm(n, k, b, budget or DEFAULT_BUDGET)
        e_X, e_0 = enumerate_AX(fam, X)
        star_hits = sum(1 for s in k_sets(n, k) if 1 in s and not s.isdisjoint(X))
        if (e_X, e_0, star_hits) != (a_X, a_total - a_X, s_X):
            raise ContractViolation(
                f"formula/enumeration mismatch at n={n} k={k} b={b} X={X}: "
                f"formula ({a_X}, {a_total - a_X}, {s_X}) vs enumeration ({e_X}, {e_0}, {star_hits})"
            )
        method = "enumeration"
        log.debug("[compare] n=%d k=%d b=%d X=%s verified by enumeration", n, k, b, X)
    return CountReport(
        n=n, k=k, b=b, d=d, mu_X_b=mu_b, X=X,
        a_total=a_total, a_X=a_X, a_0_X=a_total - a_X, s_X=s_X,
        method=method, verdict=_verdict(a_X, s_X),
    )


# ---- Large-n behaviour -------------------------------------------------------


def hockey_stick(m: int, d: int, r: int) -> Tuple[int, int]:
    """Both sides of C(m, r) - C(m-d, r) = sum_{j<d} C(m-d+j, r-1)."""
    if d < 0 or m - d < 0:
        raise InputError(f"hockey_stick needs 0 <= d <= m, got m={m}, d={d}")
    lhs = binom(m, r) - binom(m - d, r)
    rhs = sum(binom(m - d + j, r - 1) for j in range(d))
    return lhs, rhs


def ahm_ratio(n: int, k: int, b: int) -> Fraction:
    """C(n-b, k-b+1) / C(n-b-1, k-2); below 1 exactly when mixed X lose to the star."""
    _check_ahm(n, k, b)
    return Fraction(binom(n - b, k - b + 1), binom(n - b - 1, k - 2))


def mixed_x(n: int, b: int, d: int, mu: int) -> ZSet:
    """X ⊆ [2, n] with |X| = d and mu_X(b) = mu: [2, mu+1] then [b+1, b+d-mu]."""
    if not 0 <= mu <= min(d, b - 1):
        raise InputError(f"mu={mu} must lie in [0, min(d, b-1)]")
    if b + d - mu > n:
        raise InputError(f"no such X inside [2, {n}] for b={b}, d={d}, mu={mu}")
    return ZSet(tuple(range(2, mu + 2)) + tuple(range(b + 1, b + d - mu + 1)))


def _persistent_from(holds, lo: int, hi: int) -> Optional[int]:
    if hi < lo or not holds(hi):
        return None
    n0 = hi
    while n0 - 1 >= lo and holds(n0 - 1):
        n0 -= 1
    return n0


def ratio_threshold(k: int, b: int, horizon: Optional[int] = None) -> Optional[int]:
    """Smallest N0 >= 2k with R < 1 for every n in [N0, horizon]; None if R >= 1 at the horizon."""
    hi = horizon if horizon is not None else THRESHOLD_HORIZON_FACTOR * k
    return _persistent_from(lambda n: ahm_ratio(n, k, b) < 1, 2 * k, hi)


def mixed_threshold(k: int, b: int, d: int, mu: int, horizon: Optional[int] = None) -> Optional[int]:
    """Smallest N0 with a_X < s_X for the canonical mixed X on every n in [N0, horizon]."""
    if mu >= d:
        raise InputError(f"X is not mixed: mu={mu} equals d={d}")
    hi = horizon if horizon is not None else THRESHOLD_HORIZON_FACTOR * k
    lo = max(2 * k, b + d - mu)

    def holds(n: int) -> bool:
        return compare_report(n, k, b, mixed_x(n, b, d, mu)).verdict == "<"

    return _persistent_from(holds, lo, hi)


__all__ = [
    "binom",
    "count_L",
    "count_interval_L",
    "count_F",
    "count_F_interval",
    "count_F_one_b",
    "count_F_overlap",
    "size_ahm",
    "ahm_parts",
    "ekr_bound_holds",
    "star_count_X",
    "count_AX_case1",
    "count_A0X_case2",
    "count_AX_case2",
    "enumerate_AX",
    "borg_compare",
    "CountReport",
    "compare_report",
    "hockey_stick",
    "ahm_ratio",
    "mixed_x",
    "ratio_threshold",
    "mixed_threshold",
]
