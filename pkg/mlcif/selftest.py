from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence

from .build import (
    GeneratingSet,
    all_selections,
    build_mlcif,
    companion,
    enumerate_pgs,
    extend_family,
    hset_generators,
    in_universe,
    is_mlcif,
    is_self_si_candidate,
    normalized_wedge,
    recover_pgs,
    selection_wedge,
    universe_Gk,
)
from .census import census_mlcifs
from .classify import classify_two_maxgen, definitional_family, make_named, two_maxgen_diagnostics
from .config import DEFAULT_BUDGET, THRESHOLD_HORIZON_FACTOR, Budget
from .counting import (
    ahm_parts,
    ahm_ratio,
    binom,
    count_AX_case1,
    count_AX_case2,
    count_interval_L,
    count_L,
    ekr_bound_holds,
    enumerate_AX,
    hockey_stick,
    mixed_threshold,
    ratio_threshold,
    size_ahm,
    star_count_X,
)
from .errors import MlcifError
from .intersect import disjoint_witness, is_si_family, strongly_intersecting
from .poset import (
    UniformFamily,
    ZSet,
    _mu,
    compression_closure,
    is_left_compressed,
    k_sets,
    leq_uniform,
    maximal_elements,
    preceq,
    wedge,
)

log = logging.getLogger("mlcif.selftest")


class SuiteFailure(AssertionError):
    pass


def expect(cond: bool, message: str) -> None:
    if not cond:
        raise SuiteFailure(message)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class SelftestContext:
    seed: int = 0
    budget: Budget = DEFAULT_BUDGET
    rng: random.Random = field(init=False)
    _catalogs: Dict[int, List[GeneratingSet]] = field(default_factory=dict, init=False)

    def __post_init__(self) -> None:
        self.rng = random.Random(self.seed)

    def catalog(self, k: int) -> List[GeneratingSet]:
        if k not in self._catalogs:
            self._catalogs[k] = [GeneratingSet.from_pgs(p) for p in enumerate_pgs(k, self.budget)]
        return self._catalogs[k]


Suite = Callable[[SelftestContext], str]
SUITES: Dict[str, Suite] = {}


def suite(name: str) -> Callable[[Suite], Suite]:
    def register(fn: Suite) -> Suite:
        SUITES[name] = fn
        return fn
    return register


def _subsets(n: int) -> List[ZSet]:
    return [ZSet(c) for r in range(1, n + 1) for c in combinations(range(1, n + 1), r)]


def _as_keys(families: Sequence[UniformFamily]) -> List[frozenset]:
    return [f.members for f in families]


# ---- Strong intersection -----------------------------------------------------


@suite("si_oracle")
def _si_oracle(ctx: SelftestContext) -> str:
    sets = _subsets(7)
    pairs = 0
    for i, g in enumerate(sets):
        if strongly_intersecting(g, g) is not None:
            expect(is_self_si_candidate(g), f"{g} is self-si without a coordinate g_p = 2p-1")
        for h in sets[i:]:
            si = strongly_intersecting(g, h) is not None
            dw = disjoint_witness(g, h) is not None
            expect(si != dw, f"criterion and oracle disagree on ({g}, {h})")
            pairs += 1
    return f"{pairs} unordered pairs of non-empty subsets of [7]"


@suite("poset_laws")
def _poset_laws(ctx: SelftestContext) -> str:
    six = _subsets(6)
    for a in six:
        for b in six:
            if preceq(b, a):
                expect(wedge([b, a]) == b, f"wedge([{b}, {a}]) != {b}")
            for ell in range(1, 7):
                ma, mb = _mu(a.elements, ell), _mu(b.elements, ell)
                if preceq(a, b):
                    expect(ma >= mb, f"mu not monotone under preceq at ({a}, {b}, {ell})")
                if set(a.elements) <= set(b.elements):
                    expect(mb >= ma, f"mu not monotone under inclusion at ({a}, {b}, {ell})")
    five = _subsets(5)
    for a in five:
        for b in five:
            ab = wedge([a, b])
            for c in five:
                expect(preceq(c, ab) == (preceq(c, a) and preceq(c, b)), f"wedge meet law fails at ({a}, {b}, {c})")
                if preceq(a, b) and preceq(b, c):
                    expect(preceq(a, c), f"preceq not transitive at ({a}, {b}, {c})")
                if preceq(a, b) and strongly_intersecting(b, c) is not None:
                    expect(strongly_intersecting(a, c) is not None, f"si not inherited downward at ({a}, {b}, {c})")
            if a != b:
                expect(not (preceq(a, b) and preceq(b, a)), f"preceq not antisymmetric at ({a}, {b})")
    triples = k_sets(7, 3)
    for a in triples:
        for b in triples:
            if leq_uniform(a, b):
                expect(preceq(a, b), f"{a} <= {b} but not {a} ⪯ {b}")
                if a != b:
                    expect(not leq_uniform(b, a), f"<= not antisymmetric at ({a}, {b})")
    checked = 0
    for n in range(4, 7):
        for k in (2, 3):
            universe = k_sets(n, k)
            for _ in range(150):
                fam = UniformFamily(n, k, frozenset(s for s in universe if ctx.rng.random() < 0.5))
                closed = all(compression_closure(a, n).members <= fam.members for a in fam.members)
                expect(is_left_compressed(fam) == closed, f"left-compression check disagrees on {sorted(fam.members)}")
                checked += 1
    return f"order, wedge and mu laws over [5]/[6]; {checked} sampled families for left-compression"


@suite("companion_avoidance")
def _companion_avoidance(ctx: SelftestContext) -> str:
    samples = 0
    for k in (3, 4):
        n = 2 * k + 2
        pool = [s for s in k_sets(n, k) if s[0] >= 2]
        for g in universe_Gk(k, "without1"):
            expect(in_universe(g, k), f"{g} escaped G_{k}")
            for i in range(1, len(g) + 1):
                c = companion(g, i)
                eligible = [s for s in pool if s[i - 1] >= g[i - 1] + 1]
                for s in ctx.rng.sample(eligible, min(len(eligible), 10)):
                    expect(strongly_intersecting(s, c) is None, f"{s} and companion {c} of {g} strongly intersect")
                    samples += 1
    return f"{samples} sampled k-sets against companions"


# ---- Generating sets ---------------------------------------------------------


@suite("wedges")
def _wedges(ctx: SelftestContext) -> str:
    count = 0
    for k in (2, 3, 4):
        for gens in ctx.catalog(k):
            pgs = gens.pgs
            if pgs.members:
                for sel in all_selections(pgs):
                    expect(normalized_wedge(pgs, sel) == selection_wedge(pgs, sel),
                           f"closed-form wedge differs for PGS {pgs}, selection {sel.indices}")
                    count += 1
            hgens = hset_generators(pgs)
            expect(all(1 in h for h in hgens), f"hgen without 1 for PGS {pgs}")
            expect(maximal_elements(hgens, "preceq") == hgens, f"hgens of {pgs} are not an antichain")
            expect(is_si_family(list(pgs.members) + hgens), f"generators of {pgs} are not strongly intersecting")
            expect(all(in_universe(g, k) for g in gens.generators()), f"generator outside G_{k} for {pgs}")
    return f"{count} selections checked"


@suite("round_trip")
def _round_trip(ctx: SelftestContext) -> str:
    built = 0
    for k in (2, 3, 4):
        for n in range(2 * k, 2 * k + 3):
            seen = set()
            for gens in ctx.catalog(k):
                fam, _ = build_mlcif(n, k, gens.pgs)
                verdict = is_mlcif(fam)
                expect(verdict.ok, f"PGS {gens.pgs} at n={n}: {verdict.describe()}")
                expect(recover_pgs(fam).pgs == gens.pgs, f"round trip changed PGS {gens.pgs} at n={n}")
                expect(fam.members not in seen, f"two PGS build the same family at n={n}, k={k}")
                seen.add(fam.members)
                built += 1
    return f"{built} families built and recovered"


def _census_suite(ctx: SelftestContext, k: int, ns: Sequence[int]) -> str:
    parts = []
    for n in ns:
        census = census_mlcifs(n, k, ctx.budget)
        built = [build_mlcif(n, k, g.pgs)[0] for g in ctx.catalog(k)]
        expect(len(census) == len(built), f"census found {len(census)} MLCIFs at n={n}, k={k}; catalog has {len(built)}")
        expect(set(_as_keys(census)) == set(_as_keys(built)), f"census and catalog differ at n={n}, k={k}")
        parts.append(f"n={n}: {len(census)}")
    return ", ".join(parts)


@suite("census_k2")
def _census_k2(ctx: SelftestContext) -> str:
    return _census_suite(ctx, 2, (4, 5, 6))


@suite("census_k3")
def _census_k3(ctx: SelftestContext) -> str:
    return _census_suite(ctx, 3, (6,))


@suite("extension")
def _extension(ctx: SelftestContext) -> str:
    families = census_mlcifs(6, 3, ctx.budget)
    for fam in families:
        base = recover_pgs(fam).pgs
        for n_new in (7, 8):
            ext = extend_family(fam, n_new)
            expect(is_mlcif(ext).ok, f"extension of PGS {base} to n={n_new} is not an MLCIF")
            expect(recover_pgs(ext).pgs == base, f"extension of PGS {base} to n={n_new} changed the PGS")
    return f"{len(families)} census families extended to n=7,8"


@suite("two_maxgen")
def _two_maxgen(ctx: SelftestContext) -> str:
    matched = 0
    for k in (3, 4):
        for gens in ctx.catalog(k):
            if len(gens.maximal()) != 2:
                continue
            match = classify_two_maxgen(gens)
            if match is None:
                continue
            a, b = match
            expect(b > 2 * a - 1, f"PGS {gens.pgs}: (a, b) = ({a}, {b}) has b <= 2a-1")
            if gens.rank() == 2:
                expect(a == 2 and 4 <= b <= k + 1, f"rank-2 PGS {gens.pgs} matched ({a}, {b})")
            matched += 1
    hm, _ = make_named("hilton_milner", 8, 3)
    expect(hm.members == definitional_family("hilton_milner", 8, 3).members, "Hilton-Milner family differs from its definition")
    ahm, _ = make_named("ahm", 8, 3, 4)
    expect(ahm.members == hm.members, "AHM_{k+1} differs from Hilton-Milner")
    diagnostics = two_maxgen_diagnostics(ctx.catalog(3) + ctx.catalog(4))
    expect(not diagnostics, "; ".join(str(d) for d in diagnostics))
    return f"{matched} two-maximal-generator families matched"


# ---- Counting ----------------------------------------------------------------


@suite("closure_counts")
def _closure_counts(ctx: SelftestContext) -> str:
    sets = _subsets(8)
    for g in sets:
        expect(count_L(g) == len(compression_closure(g)), f"count_L({g}) disagrees with the closure")
    for a in range(1, 11):
        for b in range(a, 11):
            expect(count_interval_L(a, b) == binom(b, a - 1) == count_L(ZSet.interval(a, b)), f"interval count fails at [{a}, {b}]")
    return f"{len(sets)} subsets of [8] and intervals inside [10]"


@suite("ahm_sizes")
def _ahm_sizes(ctx: SelftestContext) -> str:
    checked = 0
    for k in (3, 4, 5):
        for n in range(2 * k, min(12, ctx.budget.max_n) + 1):
            for b in range(4, k + 2):
                fam, _ = make_named("ahm", n, k, b)
                expect(len(fam) == size_ahm(n, k, b), f"|AHM_{b}| at n={n}, k={k}: {len(fam)} vs {size_ahm(n, k, b)}")
                parts = ahm_parts(n, k, b)
                expect(parts["interval"] + parts["one_b"] - parts["overlap"] == size_ahm(n, k, b),
                       f"AHM_{b} components do not add up at n={n}, k={k}")
                expect(ekr_bound_holds(fam), f"AHM_{b} breaks the EKR bound at n={n}, k={k}")
                checked += 1
    expect(size_ahm(8, 3, 4) == 16, "size_ahm(8, 3, 4) != 16")
    return f"{checked} (n, k, b) instances"


@suite("ax_formulas")
def _ax_formulas(ctx: SelftestContext) -> str:
    checked = 0
    for k in (3, 4, 5):
        for n in range(2 * k, 11):
            for b in range(4, k + 2):
                fam, _ = make_named("ahm", n, k, b)
                for d in range(0, 5):
                    for xs in combinations(range(2, n + 1), d):
                        X = ZSet(xs)
                        mu_b = _mu(xs, b)
                        a_X, a_0 = enumerate_AX(fam, X)
                        s_X = star_count_X(n, k, d)
                        if mu_b:
                            expect(count_AX_case1(n, k, b, d, mu_b) == a_X, f"case 1 formula fails at n={n} k={k} b={b} X={X}")
                            if mu_b == d:
                                expect(a_X == s_X + binom(n - b, k - b + 1), f"X ⊆ [2,b] identity fails at n={n} k={k} b={b} X={X}")
                        else:
                            expect(count_AX_case2(n, k, b, d) == a_X, f"case 2 formula fails at n={n} k={k} b={b} X={X}")
                            expect(a_X <= s_X, f"case 2 inequality fails at n={n} k={k} b={b} X={X}")
                        expect(a_X + a_0 == len(fam), "partition counts do not add up")
                        checked += 1
    return f"{checked} (n, k, b, X) instances"


@suite("asymptotic")
def _asymptotic(ctx: SelftestContext) -> str:
    found = []
    for k in range(3, 9):
        horizon = THRESHOLD_HORIZON_FACTOR * k
        for b in range(4, k + 2):
            n_ratio = ratio_threshold(k, b, horizon)
            expect(n_ratio is not None, f"R >= 1 at n={horizon} for k={k}, b={b}")
            expect(all(ahm_ratio(n, k, b) < 1 for n in range(n_ratio, horizon + 1)), f"R climbs back to 1 for k={k}, b={b}")
            for d in range(1, 5):
                for mu in range(0, min(d - 1, b - 1) + 1):
                    n0 = mixed_threshold(k, b, d, mu, horizon)
                    expect(n0 is not None, f"no threshold for k={k} b={b} d={d} mu={mu} up to n={horizon}")
                    found.append(n0)
    return f"{len(found)} thresholds, largest N0={max(found)}"


@suite("bounds")
def _bounds(ctx: SelftestContext) -> str:
    for n in range(0, 41):
        for b in range(1, n // 2 + 1):
            for a in range(0, b):
                expect(binom(n, a) < binom(n, b), f"C({n},{a}) >= C({n},{b})")
    for _ in range(200):
        m = ctx.rng.randint(0, 40)
        d = ctx.rng.randint(0, m)
        r = ctx.rng.randint(0, 12)
        lhs, rhs = hockey_stick(m, d, r)
        expect(lhs == rhs, f"hockey-stick identity fails at m={m}, d={d}, r={r}")
    families = 0
    for k in (2, 3):
        for gens in ctx.catalog(k):
            fam, _ = build_mlcif(2 * k + 2, k, gens.pgs)
            expect(ekr_bound_holds(fam), f"PGS {gens.pgs} breaks the EKR bound")
            families += 1
    return f"binomial monotonicity to n=40, 200 hockey-stick samples, EKR on {families} families"


# ---- Runner ------------------------------------------------------------------


def run_selftest(
    names: Optional[Sequence[str]] = None,
    seed: int = 0,
    budget: Optional[Budget] = None,
) -> List[SuiteResult]:
    chosen = list(names) if names else list(SUITES)
    unknown = [n for n in chosen if n not in SUITES]
    if unknown:
        raise MlcifError(f"unknown selftest suite(s): {', '.join(unknown)}")
    ctx = SelftestContext(seed=seed, budget=budget or DEFAULT_BUDGET)
    results: List[SuiteResult] = []
    for name in chosen:
        t0 = time.perf_counter()
        try:
            detail = SUITES[name](ctx)
            passed = True
        except (SuiteFailure, MlcifError) as e:
            detail, passed = str(e), False
        elapsed = time.perf_counter() - t0
        log.info("[selftest] %-16s %s (%.2fs)", name, "ok" if passed else "FAILED", elapsed)
        results.append(SuiteResult(name, passed, detail, elapsed))
    return results


__all__ = ["SUITES", "SuiteFailure", "SuiteResult", "SelftestContext", "run_selftest", "expect"]
