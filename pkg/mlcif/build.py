from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .config import BITMASK_MAX_N, DEFAULT_BUDGET, Budget
from .errors import ContractViolation, InputError, InvalidPgsError
from .intersect import DisjointWitness, disjoint_witness, strongly_intersecting
from .poset import (
    UniformFamily,
    ZSet,
    find_disjoint_pair,
    k_sets,
    maximal_elements,
    preceq,
    unit_decrements,
    wedge,
)

log = logging.getLogger("mlcif.build")

ONE = ZSet((1,))

# ---- Generator universe ------------------------------------------------------

_BRANCHES = ("all", "with1", "without1")


def in_universe(G: ZSet, k: int) -> bool:
    """G ⊆ [2k-1], 1 <= |G| <= k and max(G) <= k + |G| - 1."""
    return 1 <= len(G) <= k and G.max <= k + len(G) - 1


def universe_Gk(k: int, branch: str = "all") -> List[ZSet]:
    if k < 2:
        raise InputError(f"universe_Gk needs k >= 2, got {k}")
    if branch not in _BRANCHES:
        raise InputError(f"unknown branch {branch!r}; expected one of {_BRANCHES}")
    out: List[ZSet] = []
    for r in range(1, k + 1):
        for c in combinations(range(1, k + r), r):
            has_one = c[0] == 1
            if branch == "with1" and not has_one:
                continue
            if branch == "without1" and has_one:
                continue
            out.append(ZSet(c))
    return sorted(out, key=lambda g: (len(g), g.elements))


def is_self_si_candidate(G: ZSet) -> bool:
    """Some coordinate sits exactly at g_p = 2p - 1."""
    return any(g == 2 * p - 1 for p, g in enumerate(G.elements, start=1))


# ---- Principal generating sets -----------------------------------------------


def _canonical(members: Iterable[ZSet]) -> Tuple[ZSet, ...]:
    return tuple(sorted(set(members)))


@dataclass(frozen=True)
class PgsViolation:
    kind: str
    members: Tuple[ZSet, ...]
    witness: Optional[DisjointWitness] = None

    def __str__(self) -> str:
        names = ", ".join(str(m) for m in self.members)
        text = f"{self.kind}: {names}"
        if self.witness is not None:
            text += f" (disjoint witness {self.witness.s}, {self.witness.t})"
        return text


@dataclass(frozen=True)
class PGS:
    """A validated principal generating set: an si antichain inside G_k(1̄)."""

    k: int
    members: Tuple[ZSet, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", _canonical(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[ZSet]:
        return iter(self.members)

    def sort_key(self) -> Tuple[int, Tuple[Tuple[int, ...], ...]]:
        return len(self.members), tuple(m.elements for m in self.members)

    def __str__(self) -> str:
        if not self.members:
            return "{}"
        return "{" + ", ".join(str(m) for m in self.members) + "}"


def pgs_violations(k: int, members: Iterable[ZSet]) -> List[PgsViolation]:
    """Every reason ``members`` fails to be a canonical PGS for k, in a stable order."""
    gens = _canonical(members)
    found: List[PgsViolation] = []
    for g in gens:
        if not len(g):
            found.append(PgsViolation("empty generator", (g,)))
            continue
        if 1 in g:
            found.append(PgsViolation("contains 1", (g,)))
        if not in_universe(g, k):
            found.append(PgsViolation(f"outside G_{k} (needs |G| <= {k} and max(G) <= {k} + |G| - 1)", (g,)))
        if strongly_intersecting(g, g) is None:
            found.append(PgsViolation("not self strongly intersecting", (g,), disjoint_witness(g, g)))
    nonempty = [g for g in gens if len(g)]
    for g, h in combinations(nonempty, 2):
        if strongly_intersecting(g, h) is None:
            found.append(PgsViolation("pair not strongly intersecting", (g, h), disjoint_witness(g, h)))
        if preceq(g, h) or preceq(h, g):
            found.append(PgsViolation("not a preceq-antichain", (g, h)))
    return found


def validate_pgs(k: int, members: Iterable[ZSet]) -> PGS:
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    members = list(members)
    violations = pgs_violations(k, members)
    if violations:
        raise InvalidPgsError(violations)
    return PGS(k, tuple(members))


# ---- Companions and wedges ---------------------------------------------------


def companion(G: ZSet, i: int) -> ZSet:
    """{1} ∪ [i+1, g_i]."""
    if not 1 <= i <= len(G):
        raise InputError(f"companion index {i} outside [1, {len(G)}] for {G}")
    g_i = G.elements[i - 1]
    return ZSet((1,) + tuple(range(i + 1, g_i + 1)))


def companions(G: ZSet) -> List[ZSet]:
    return [companion(G, i) for i in range(1, len(G) + 1)]


@dataclass(frozen=True)
class WedgeSelection:
    """One companion index per PGS member, in the PGS's canonical member order."""

    indices: Tuple[int, ...]

    def check(self, pgs: PGS) -> None:
        if len(self.indices) != len(pgs.members):
            raise InputError(f"selection {self.indices} has {len(self.indices)} indices for {len(pgs.members)} members")
        for i, g in zip(self.indices, pgs.members):
            if not 1 <= i <= len(g):
                raise InputError(f"selection index {i} outside [1, {len(g)}] for {g}")

    def companions(self, pgs: PGS) -> List[ZSet]:
        self.check(pgs)
        return [companion(g, i) for g, i in zip(pgs.members, self.indices)]


def all_selections(pgs: PGS) -> Iterator[WedgeSelection]:
    for idx in product(*(range(1, len(g) + 1) for g in pgs.members)):
        yield WedgeSelection(tuple(idx))


def selection_wedge(pgs: PGS, sel: WedgeSelection) -> ZSet:
    """Plain wedge of the selected companions."""
    return wedge(sel.companions(pgs))


def normalized_wedge(pgs: PGS, sel: WedgeSelection) -> ZSet:
    """
    Closed-form wedge of a selection.

    Companions that dominate another selected companion under ⪯ are redundant
    and dropped; the survivors, ordered by index i_1 < ... < i_p, have strictly
    increasing sizes s_1 < ... < s_p and the wedge is

        {1} ∪ [s_0 + i_1, s_1 + i_1 - 1] ∪ ... ∪ [s_{p-1} + i_p, s_p + i_p - 1]

    with s_0 = 1.
    """
    comps = sorted(set(zip(sel.indices, sel.companions(pgs))))
    if not comps:
        raise InputError("normalized_wedge needs a non-empty selection")
    kept = [
        (i, c) for i, c in comps
        if not any(c2 != c and preceq(c2, c) for _, c2 in comps)
    ]
    # equal companions reached from different members collapse to one
    unique: dict[ZSet, int] = {}
    for i, c in kept:
        unique.setdefault(c, i)
    chain = sorted((i, len(c)) for c, i in unique.items())
    out = [1]
    prev_size = 1
    for i, size in chain:
        out.extend(range(prev_size + i, size + i))
        prev_size = size
    return ZSet(tuple(out))


def hset_generators(pgs: PGS) -> List[ZSet]:
    """
    ⪯-maximal wedges of companions over all selections, in canonical order.

    The product is folded member by member keeping only ⪯-maximal partial
    wedges; w ⪯ w' implies w∧c ⪯ w'∧c, so pruning never loses a maximal wedge.
    The empty PGS yields {{1}}, the Star.
    """
    if not pgs.members:
        return [ONE]
    partial: List[ZSet] = maximal_elements(companions(pgs.members[0]), order="preceq")
    for g in pgs.members[1:]:
        comps = maximal_elements(companions(g), order="preceq")
        partial = maximal_elements({wedge([w, c]) for w in partial for c in comps}, order="preceq")
    return partial


# ---- Generating sets ---------------------------------------------------------


def maximal_generators(gens: Iterable[ZSet]) -> List[ZSet]:
    return maximal_elements(gens, order="preceq")


@dataclass(frozen=True)
class GeneratingSet:
    """A PGS together with its 1-containing generators."""

    pgs: PGS
    hgens: Tuple[ZSet, ...] = field(default=())

    def __post_init__(self) -> None:
        hgens = _canonical(self.hgens)
        for h in hgens:
            if 1 not in h:
                raise ContractViolation(f"hgen {h} does not contain 1")
        object.__setattr__(self, "hgens", hgens)

    @classmethod
    def from_pgs(cls, pgs: PGS) -> "GeneratingSet":
        return cls(pgs=pgs, hgens=tuple(hset_generators(pgs)))

    @property
    def k(self) -> int:
        return self.pgs.k

    def generators(self) -> List[ZSet]:
        return sorted(set(self.pgs.members) | set(self.hgens))

    def maximal(self) -> List[ZSet]:
        return maximal_generators(self.generators())

    def rank(self) -> int:
        return min(len(g) for g in self.generators())


# ---- Materialization ---------------------------------------------------------


def materialize(n: int, k: int, gens: Iterable[ZSet]) -> UniformFamily:
    """
    F(n, k, gens): every k-subset S of [n] with S ⪯ G for some generator G.

    Prefixes are grown in ascending order; a prefix survives only while some
    generator still bounds every coordinate chosen so far.
    """
    if not 4 <= 2 * k <= n:
        raise InputError(f"materialize needs 4 <= 2k <= n, got n={n}, k={k}")
    bounds: List[Tuple[int, ...]] = []
    for g in set(gens):
        if not len(g):
            raise InputError("empty generator")
        if len(g) > k:
            raise InputError(f"generator {g} is larger than k={k}")
        bounds.append(g.elements)
    out: List[ZSet] = []
    prefix: List[int] = []

    def rec(t: int, lo: int, alive: List[Tuple[int, ...]]) -> None:
        if t == k:
            out.append(ZSet(tuple(prefix)))
            return
        cap = n - (k - t - 1)
        top = lo - 1
        for b in alive:
            top = max(top, b[t] if t < len(b) else cap)
        for v in range(lo, min(top, cap) + 1):
            nxt = [b for b in alive if t >= len(b) or v <= b[t]]
            prefix.append(v)
            rec(t + 1, v + 1, nxt)
            prefix.pop()

    if bounds:
        rec(0, 1, bounds)
    log.debug("[materialize] n=%d k=%d: %d generators -> %d sets", n, k, len(bounds), len(out))
    return UniformFamily(n, k, frozenset(out))


def build_mlcif(n: int, k: int, pgs: PGS) -> Tuple[UniformFamily, GeneratingSet]:
    """F(pgs) ∪ F(H(pgs)) together with its generating set."""
    if pgs.k != k:
        raise InputError(f"PGS was validated for k={pgs.k}, asked to build k={k}")
    if n < 2 * k:
        raise InputError(f"build_mlcif needs n >= 2k, got n={n}, k={k}")
    validate_pgs(k, pgs.members)
    gens = GeneratingSet.from_pgs(pgs)
    fam = materialize(n, k, gens.generators())
    return fam, gens


# ---- Verification ------------------------------------------------------------


@dataclass(frozen=True)
class MlcifVerdict:
    ok: bool
    reason: str = "ok"
    witness: Tuple[ZSet, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "maximal left-compressed intersecting family"
        return f"{self.reason}: witness " + ", ".join(str(w) for w in self.witness)


def _first_addable(fam: UniformFamily) -> Optional[ZSet]:
    outside = [s for s in k_sets(fam.n, fam.k) if s not in fam.members]
    if not outside:
        return None
    if not fam.members:
        return outside[0]
    if fam.n <= BITMASK_MAX_N:
        out_masks = np.array([s.mask for s in outside], dtype=np.uint64)
        fam_masks = fam.masks()
        meets_all = np.all((out_masks[:, None] & fam_masks[None, :]) != 0, axis=1)
        hits = np.flatnonzero(meets_all)
        return outside[int(hits[0])] if hits.size else None
    for s in outside:
        if all(not s.isdisjoint(m) for m in fam.members):
            return s
    return None


def is_mlcif(fam: UniformFamily) -> MlcifVerdict:
    """Intersecting, left-compressed, and no outside k-set can be added while staying intersecting."""
    pair = find_disjoint_pair(fam)
    if pair is not None:
        return MlcifVerdict(False, "not intersecting", pair)
    for a in fam.sorted():
        for b in unit_decrements(a):
            if b not in fam.members:
                return MlcifVerdict(False, "not left-compressed", (a, b))
    addable = _first_addable(fam)
    if addable is not None:
        return MlcifVerdict(False, "not maximal", (addable,))
    return MlcifVerdict(True)


def truncate(A: ZSet, k: int) -> ZSet:
    """π(A): the prefix a_1..a_r with r the largest index such that a_r < r + k."""
    r = 0
    for i, a in enumerate(A.elements, start=1):
        if a < i + k:
            r = i
    return ZSet(A.elements[:r])


def recover_pgs(fam: UniformFamily) -> GeneratingSet:
    """Read the generating set back off an MLCIF via its ≤-maximal members."""
    verdict = is_mlcif(fam)
    if not verdict:
        raise ContractViolation(f"recover_pgs: input is not an MLCIF ({verdict.describe()})", diagnostic=verdict)
    tops = maximal_elements(fam.members, order="leq")
    cut = [truncate(a, fam.k) for a in tops]
    if any(not len(c) for c in cut):
        raise ContractViolation("recover_pgs: a maximal member truncated to the empty set", diagnostic=verdict)
    pgs_side = maximal_elements([c for c in cut if 1 not in c], order="preceq")
    h_side = maximal_elements([c for c in cut if 1 in c], order="preceq")
    pgs = validate_pgs(fam.k, pgs_side)
    log.debug("[recover] n=%d k=%d: pgs=%s hgens=%s", fam.n, fam.k, pgs, [str(h) for h in h_side])
    return GeneratingSet(pgs=pgs, hgens=tuple(h_side))


def extend_family(fam: UniformFamily, n_new: int) -> UniformFamily:
    """Rebuild an MLCIF on a larger (or equal) ground set from its recovered PGS."""
    if fam.n < 2 * fam.k or n_new < 2 * fam.k:
        raise InputError(f"extend_family needs n >= 2k and n_new >= 2k (k={fam.k}, n={fam.n}, n_new={n_new})")
    verdict = is_mlcif(fam)
    if not verdict:
        raise InputError(f"extend_family: input is not an MLCIF ({verdict.describe()})")
    gens = recover_pgs(fam)
    extended, _ = build_mlcif(n_new, fam.k, gens.pgs)
    return extended


# ---- PGS enumeration ---------------------------------------------------------


def compatibility_graph(k: int) -> nx.Graph:
    """Self-si members of G_k(1̄); an edge joins two strongly intersecting, ⪯-incomparable members."""
    pool = [g for g in universe_Gk(k, "without1") if is_self_si_candidate(g)]
    graph = nx.Graph()
    graph.add_nodes_from(pool)
    for g, h in combinations(pool, 2):
        if preceq(g, h) or preceq(h, g):
            continue
        if strongly_intersecting(g, h) is not None:
            graph.add_edge(g, h)
    return graph


def enumerate_pgs(k: int, budget: Optional[Budget] = None) -> List[PGS]:
    """Every canonical PGS for k (the empty one included), sorted by size then members."""
    budget = budget or DEFAULT_BUDGET
    if k < 2:
        raise InputError(f"enumerate_pgs needs k >= 2, got {k}")
    budget.check_k(k, "enumerate_pgs")
    deadline = budget.deadline()
    graph = compatibility_graph(k)
    found = [PGS(k, ())]
    for clique in nx.enumerate_all_cliques(graph):
        Budget.check_deadline(deadline, "enumerate_pgs")
        found.append(PGS(k, tuple(clique)))
    found.sort(key=PGS.sort_key)
    log.info(
        "[enumerate] k=%d: %d self-si candidates, %d edges, %d PGS",
        k, graph.number_of_nodes(), graph.number_of_edges(), len(found),
    )
    return found


__all__ = [
    "ONE",
    "in_universe",
    "universe_Gk",
    "is_self_si_candidate",
    "PgsViolation",
    "PGS",
    "pgs_violations",
    "validate_pgs",
    "companion",
    "companions",
    "WedgeSelection",
    "all_selections",
    "selection_wedge",
    "normalized_wedge",
    "hset_generators",
    "maximal_generators",
    "GeneratingSet",
    "materialize",
    "build_mlcif",
    "MlcifVerdict",
    "is_mlcif",
    "truncate",
    "recover_pgs",
    "extend_family",
    "compatibility_graph",
    "enumerate_pgs",
]
