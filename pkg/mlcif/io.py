from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .build import PGS, GeneratingSet, build_mlcif, validate_pgs
from .classify import profile
from .errors import ContractViolation, InputError, ParseError
from .poset import UniformFamily, ZSet

PathLike = Union[str, Path]

CATALOG_FORMAT = "mlcif-catalog"
CATALOG_VERSION = 1

_EMPTY_LITERALS = {"", "{}", "∅", "empty"}
_HEADER = re.compile(r"^n\s*=\s*(\d+)\s+k\s*=\s*(\d+)$")

# ---- Set literals ------------------------------------------------------------


def parse_zset(text: str, n_max: Optional[int] = None) -> ZSet:
    """
    Parse "2,3,5" (whitespace and surrounding braces ignored) into a ZSet.
    Elements may come in any order; repeats are an error.
    """
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    body = "".join(body.split())
    if not body:
        return ZSet((), n_max=n_max)
    try:
        values = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise ParseError(f"not a set literal: {text!r}") from None
    if len(set(values)) != len(values):
        raise ParseError(f"repeated element in {text!r}")
    if any(v < 1 for v in values):
        raise ParseError(f"elements must be positive integers: {text!r}")
    try:
        return ZSet.from_iterable(values, n_max=n_max)
    except InputError as e:
        raise ParseError(str(e)) from None


def parse_zsets(text: str, n_max: Optional[int] = None) -> List[ZSet]:
    """Parse "2,3;2,4,5" into a list of ZSets; "", "{}" and "∅" mean no sets."""
    if text.strip() in _EMPTY_LITERALS:
        return []
    out: List[ZSet] = []
    for piece in text.split(";"):
        if not piece.strip():
            continue
        s = parse_zset(piece, n_max=n_max)
        if not len(s):
            raise ParseError(f"empty set inside {text!r}")
        out.append(s)
    return out


def format_zset(s: ZSet) -> str:
    return ",".join(str(e) for e in s.elements)


def format_zsets(sets: Iterable[ZSet]) -> str:
    parts = [format_zset(s) for s in sets]
    return ";".join(parts) if parts else "{}"


def read_x_file(path: PathLike) -> List[ZSet]:
    """One X literal per line; blank lines and '#' comments skipped."""
    out: List[ZSet] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_zset(line))
    return out


# ---- Family files ------------------------------------------------------------


def format_family(fam: UniformFamily) -> str:
    lines = [f"n={fam.n} k={fam.k}"]
    lines.extend(format_zset(m) for m in fam.sorted())
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> UniformFamily:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("family file is empty (expected header 'n=<n> k=<k>')")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParseError(f"bad family header {lines[0]!r}; expected 'n=<n> k=<k>'")
    n, k = int(m.group(1)), int(m.group(2))
    members = [parse_zset(ln, n_max=n) for ln in lines[1:]]
    if len(set(members)) != len(members):
        raise ParseError("family file lists a member twice")
    try:
        return UniformFamily(n, k, frozenset(members))
    except InputError as e:
        raise ParseError(f"family file: {e}") from None


def write_family(fam: UniformFamily, path: PathLike) -> None:
    Path(path).write_text(format_family(fam))


def read_family(path: PathLike) -> UniformFamily:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"family file not found: {path}")
    return parse_family(p.read_text())


# ---- Catalog -----------------------------------------------------------------


@dataclass(frozen=True)
class CatalogRecord:
    k: int
    pgs: Tuple[ZSet, ...]
    hgens: Tuple[ZSet, ...]
    rank: int
    max_gen_count: int
    recognized_form: str
    size_at: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_generating_set(cls, gens: GeneratingSet, n_list: Sequence[int]) -> "CatalogRecord":
        prof = profile(gens)
        sizes = {n: len(build_mlcif(n, gens.k, gens.pgs)[0]) for n in sorted(set(n_list))}
        return cls(
            k=gens.k,
            pgs=gens.pgs.members,
            hgens=gens.hgens,
            rank=prof.rank,
            max_gen_count=prof.max_gen_count,
            recognized_form=prof.recognized_form,
            size_at=sizes,
        )

    def to_pgs(self) -> PGS:
        return validate_pgs(self.k, self.pgs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "pgs": [list(g.elements) for g in self.pgs],
            "hgens": [list(h.elements) for h in self.hgens],
            "rank": self.rank,
            "max_gen_count": self.max_gen_count,
            "recognized_form": self.recognized_form,
            "size_at": {str(n): str(v) for n, v in sorted(self.size_at.items())},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CatalogRecord":
        try:
            return cls(
                k=int(data["k"]),
                pgs=tuple(ZSet(tuple(g)) for g in data["pgs"]),
                hgens=tuple(ZSet(tuple(h)) for h in data["hgens"]),
                rank=int(data["rank"]),
                max_gen_count=int(data["max_gen_count"]),
                recognized_form=str(data["recognized_form"]),
                size_at={int(n): int(v) for n, v in data.get("size_at", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed catalog record: {e}") from None


def revalidate_record(rec: CatalogRecord) -> None:
    """Rebuild the record's family at every stored n and compare sizes and generators."""
    pgs = rec.to_pgs()
    gens = GeneratingSet.from_pgs(pgs)
    if gens.hgens != rec.hgens:
        raise ContractViolation(f"catalog hgens for PGS {pgs} do not match the rebuilt ones")
    for n, size in rec.size_at.items():
        got = len(build_mlcif(n, rec.k, pgs)[0])
        if got != size:
            raise ContractViolation(f"catalog size for PGS {pgs} at n={n}: stored {size}, rebuilt {got}")


def dumps_catalog(records: Sequence[CatalogRecord]) -> str:
    doc = {
        "format": CATALOG_FORMAT,
        "version": CATALOG_VERSION,
        "records": [r.to_dict() for r in records],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads_catalog(text: str, revalidate: bool = False) -> List[CatalogRecord]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"catalog is not valid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("format") != CATALOG_FORMAT:
        raise ParseError("not an mlcif catalog document")
    if doc.get("version") != CATALOG_VERSION:
        raise ParseError(f"unsupported catalog version {doc.get('version')!r}")
    records = [CatalogRecord.from_dict(d) for d in doc.get("records", [])]
    if revalidate:
        for r in records:
            revalidate_record(r)
    return records


def write_catalog(records: Sequence[CatalogRecord], path: PathLike) -> None:
    Path(path).write_text(dumps_catalog(records))


def read_catalog(path: PathLike, revalidate: bool = False) -> List[CatalogRecord]:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"catalog not found: {path}")
    return loads_catalog(p.read_text(), revalidate=revalidate)


__all__ = [
    "parse_zset",
    "parse_zsets",
    "format_zset",
    "format_zsets",
    "read_x_file",
    "format_family",
    "parse_family",
    "write_family",
    "read_family",
    "CatalogRecord",
    "revalidate_record",
    "dumps_catalog",
    "loads_catalog",
    "write_catalog",
    "read_catalog",
]
