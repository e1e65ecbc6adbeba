import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .build import (
    GeneratingSet,
    PGS,
    build_mlcif,
    enumerate_pgs,
    is_mlcif,
    pgs_violations,
    recover_pgs,
    validate_pgs,
)
from .classify import classify_two_maxgen, named_pgs, profile
from .config import DEFAULT_MAX_K, DEFAULT_MAX_N, Budget
from .counting import CountReport, compare_report
from .errors import InputError, InvalidPgsError, MlcifError, ParseError
from .intersect import pairwise_report
from .io import (
    CatalogRecord,
    dumps_catalog,
    format_family,
    format_zset,
    format_zsets,
    parse_zset,
    parse_zsets,
    read_family,
    read_x_file,
    write_catalog,
    write_family,
)
from .poset import ZSet
from .selftest import SUITES, run_selftest

log = logging.getLogger("mlcif")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _configure_logging(verbose: bool, quiet: bool) -> None:
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
        log.addHandler(handler)
    if verbose:
        log.setLevel(logging.DEBUG)
    elif quiet:
        log.setLevel(logging.WARNING)
    else:
        log.setLevel(logging.INFO)


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(max_k=args.max_k, max_n=args.max_n, time_budget=args.time_budget)


def _emit_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def infer_k(gens: List[ZSet]) -> int:
    """Smallest k >= 2 whose G_k could hold every generator."""
    k = 2
    for g in gens:
        k = max(k, len(g), g.max - len(g) + 1)
    return k


def _profile_doc(gens: GeneratingSet) -> dict:
    return profile(gens).to_dict()


# ---- Subcommands -------------------------------------------------------------


def cmd_check_pgs(args: argparse.Namespace) -> int:
    text = Path(args.file).read_text() if args.file else (args.pgs or "")
    gens = parse_zsets(text.strip())
    k = args.k if args.k is not None else infer_k(gens)
    pairs = pairwise_report(gens)
    violations = pgs_violations(k, gens) if k >= 2 else []
    valid = k >= 2 and not violations
    if args.json:
        _emit_json({
            "k": k,
            "pgs": [list(g.elements) for g in sorted(gens)],
            "valid": valid,
            "pairs": [
                {
                    "g": list(p.g.elements),
                    "h": list(p.h.elements),
                    "strongly_intersecting": p.ok,
                    "ell": p.si.ell if p.si else None,
                    "disjoint_witness": [list(p.disjoint.s.elements), list(p.disjoint.t.elements)] if p.disjoint else None,
                }
                for p in pairs
            ],
            "violations": [str(v) for v in violations],
        })
    else:
        print(f"PGS {format_zsets(sorted(gens))} (k={k})")
        for p in pairs:
            print(f"  {p.describe()}")
        for v in violations:
            if v.kind == "not self strongly intersecting":
                print(f"  {format_zset(v.members[0])} fails self strong intersection")
            print(f"  violation: {v}")
        print("valid" if valid else "invalid")
    return EXIT_OK if valid else EXIT_DOMAIN


def _pgs_from_args(args: argparse.Namespace) -> PGS:
    if args.named:
        return named_pgs(args.named, args.k, args.b)
    return validate_pgs(args.k, parse_zsets(args.pgs or ""))


def cmd_build(args: argparse.Namespace) -> int:
    pgs = _pgs_from_args(args)
    fam, gens = build_mlcif(args.n, args.k, pgs)
    prof = profile(gens)
    status = EXIT_OK
    verdict = None
    diagnostic = None
    if args.verify:
        verdict = is_mlcif(fam)
        if not verdict:
            status = EXIT_DOMAIN
        if prof.max_gen_count == 2 and classify_two_maxgen(gens) is None:
            diagnostic = (
                f"maximal generators {format_zsets(prof.max_gens)} are not of the form "
                f"[a,b], {{1}} ∪ [b-a+2,b]"
            )
            status = EXIT_DOMAIN
    if args.output:
        write_family(fam, args.output)
        log.info("[build] wrote %d sets to %s", len(fam), args.output)
    if args.json:
        doc = {
            "n": fam.n,
            "k": fam.k,
            "size": str(len(fam)),
            "pgs": [list(g.elements) for g in gens.pgs.members],
            "hgens": [list(h.elements) for h in gens.hgens],
            "profile": prof.to_dict(),
        }
        if not args.output:
            doc["members"] = [list(m.elements) for m in fam.sorted()]
        if verdict is not None:
            doc["verify"] = {"ok": verdict.ok, "reason": verdict.reason, "witness": [list(w.elements) for w in verdict.witness]}
        if diagnostic:
            doc["theorem_violation"] = diagnostic
        _emit_json(doc)
    else:
        if not args.output:
            sys.stdout.write(format_family(fam))
        print(f"# pgs: {format_zsets(gens.pgs.members)}")
        print(f"# hgens: {format_zsets(gens.hgens)}")
        print(f"# size: {len(fam)} rank: {prof.rank} maximal generators: {format_zsets(prof.max_gens)} form: {prof.recognized_form}")
        if verdict is not None:
            print(f"# verify: {verdict.describe()}")
        if diagnostic:
            print(f"# theorem violation: {diagnostic}")
    return status


def cmd_enumerate(args: argparse.Namespace) -> int:
    budget = _budget(args)
    n_list = sorted(set(args.n or [2 * args.k]))
    for n in n_list:
        if n < 2 * args.k:
            raise InputError(f"n={n} is below 2k={2 * args.k}")
        budget.check_n(n, "enumerate")
    deadline = budget.deadline()
    catalog = enumerate_pgs(args.k, budget)
    records = []
    for p in catalog:
        Budget.check_deadline(deadline, "enumerate")
        records.append(CatalogRecord.from_generating_set(GeneratingSet.from_pgs(p), n_list))
    if args.output:
        write_catalog(records, args.output)
        print(f"[enumerate] k={args.k}: {len(records)} records -> {args.output}")
    else:
        sys.stdout.write(dumps_catalog(records))
    return EXIT_OK


def cmd_recover(args: argparse.Namespace) -> int:
    fam = read_family(args.family)
    verdict = is_mlcif(fam)
    if not verdict:
        if args.json:
            _emit_json({"ok": False, "reason": verdict.reason, "witness": [list(w.elements) for w in verdict.witness]})
        else:
            print(f"not an MLCIF: {verdict.describe()}")
        return EXIT_DOMAIN
    gens = recover_pgs(fam)
    if args.json:
        _emit_json({
            "ok": True,
            "n": fam.n,
            "k": fam.k,
            "pgs": [list(g.elements) for g in gens.pgs.members],
            "hgens": [list(h.elements) for h in gens.hgens],
            "profile": _profile_doc(gens),
        })
    else:
        prof = profile(gens)
        print(f"pgs: {format_zsets(gens.pgs.members)}")
        print(f"hgens: {format_zsets(gens.hgens)}")
        print(f"rank: {prof.rank}  maximal generators: {format_zsets(prof.max_gens)}  form: {prof.recognized_form}")
    return EXIT_OK


def _format_report(r: CountReport) -> str:
    return "\n".join([
        f"n={r.n} k={r.k} b={r.b} X={r.X} d={r.d} mu_X(b)={r.mu_X_b} case={r.case}",
        f"|A|={r.a_total} |A(X)|={r.a_X} |A_0(X)|={r.a_0_X} |S(X)|={r.s_X} method={r.method}",
        f"verdict: |A(X)| {r.verdict} |S(X)|",
    ])


def cmd_compare(args: argparse.Namespace) -> int:
    budget = _budget(args)
    if args.x_file:
        for X in read_x_file(args.x_file):
            report = compare_report(args.n, args.k, args.b, X, oracle=args.oracle, budget=budget)
            print(json.dumps(report.to_dict(), sort_keys=True))
        return EXIT_OK
    if args.x is None:
        raise ParseError("compare needs an X literal or --x-file")
    report = compare_report(args.n, args.k, args.b, parse_zset(args.x), oracle=args.oracle, budget=budget)
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(_format_report(report))
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    if args.list:
        for name in SUITES:
            print(name)
        return EXIT_OK
    results = run_selftest(args.suite, seed=args.seed, budget=_budget(args))
    if args.json:
        _emit_json({"passed": all(r.passed for r in results), "suites": [r.to_dict() for r in results]})
    else:
        for r in results:
            mark = "ok" if r.passed else "FAILED"
            print(f"{r.name:<16} {mark:<6} {r.seconds:8.2f}s  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_DOMAIN


# ---- CLI ---------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Shared flags; subcommand copies use SUPPRESS so they never clobber values given earlier."""
    p = argparse.ArgumentParser(add_help=False)

    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--json", action="store_true", default=d(False), help="Emit JSON instead of tables")
    p.add_argument("--oracle", action="store_true", default=d(False), help="Verify formulas by enumeration")
    p.add_argument("--seed", type=int, default=d(0), help="Seed for sampled property suites")
    p.add_argument("--max-n", type=int, default=d(DEFAULT_MAX_N), help="Largest ground set for enumerations")
    p.add_argument("--max-k", type=int, default=d(DEFAULT_MAX_K), help="Largest k for PGS enumeration")
    p.add_argument("--time-budget", type=float, default=d(None), help="Seconds before exhaustive searches abort")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False), help="Debug logging")
    p.add_argument("-q", "--quiet", action="store_true", default=d(False), help="Warnings only")
    return p


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mlcif",
        description="Maximal left-compressed intersecting families: build, verify, enumerate, count.",
        parents=[_global_flags(suppress=False)],
    )
    sub = p.add_subparsers(dest="command", required=True)
    shared = [_global_flags(suppress=True)]

    c = sub.add_parser("check-pgs", parents=shared, help="Validate a principal generating set")
    c.add_argument("pgs", nargs="?", default=None, help='Generators, e.g. "2,3;2,4,5" ("{}" for none)')
    c.add_argument("--k", type=int, default=None, help="Uniformity (inferred from the generators when omitted)")
    c.add_argument("--file", default=None, help="Read the generator literal from a file")
    c.set_defaults(func=cmd_check_pgs)

    b = sub.add_parser("build", parents=shared, help="Build the MLCIF of a PGS")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    src = b.add_mutually_exclusive_group()
    src.add_argument("--pgs", default=None, help='Generators, e.g. "2,3,4"; empty for the Star')
    src.add_argument("--named", default=None, help="star, a23, hilton-milner or ahm")
    b.add_argument("--b", type=int, default=None, help="b for --named ahm")
    b.add_argument("--verify", action="store_true", help="Run the MLCIF check on the result")
    b.add_argument("--output", default=None, help="Write the family file here")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("enumerate", parents=shared, help="Catalog every PGS for k")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=int, nargs="+", default=None, help="Ground-set sizes to record (default 2k)")
    e.add_argument("--output", default=None, help="Catalog JSON path (stdout when omitted)")
    e.set_defaults(func=cmd_enumerate)

    r = sub.add_parser("recover", parents=shared, help="Recover the PGS of an MLCIF family file")
    r.add_argument("family", help="Family file with header 'n=<n> k=<k>'")
    r.set_defaults(func=cmd_recover)

    m = sub.add_parser("compare", parents=shared, help="|A(X)| against |S(X)| for AHM_b")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--b", type=int, required=True)
    m.add_argument("x", nargs="?", default=None, help='X literal, e.g. "5,6"')
    m.add_argument("--x-file", default=None, help="One X per line; emits JSON lines")
    m.set_defaults(func=cmd_compare)

    s = sub.add_parser("selftest", parents=shared, help="Run the invariant suites")
    s.add_argument("--suite", action="append", default=None, choices=sorted(SUITES), help="Run only this suite (repeatable)")
    s.add_argument("--list", action="store_true", help="List suite names and exit")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    try:
        return args.func(args)
    except InvalidPgsError as e:
        for v in e.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MlcifError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
