"""Command-line entry point ``oddhom``.

Exit codes: 0 every check passed, 1 a check failed (or a homomorphism does not exist),
2 a search budget was exhausted, 64 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .andrasfai import AndrasfaiParams, andrasfai_graph, verify_andrasfai
from .budget import BudgetExceeded
from .constructions import (blowup_even, blowup_odd, certify_counterexample, expected_min_degree,
                            expected_order, max_eps, tetra_star)
from .cycles import check_lemma_N, contains_cycle, contains_D, odd_girth, shortest_odd_cycle
from .graph import Graph, GraphFormatError, decode, encode, is_cycle, sniff_format
from .homomorphism import (Homomorphism, HomomorphismSearch, find_homomorphism, hom_to_andrasfai,
                           recognize_tetra, validate_tetra, verify_homomorphism)
from .presets import PRESETS
from .reduction import ReductionError, ReductionParams, reduce
from .report import CertificateReport

EXIT_USAGE = 64
FORMATS = ("edgelist", "graph6")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return value


def _positive_fraction(text: str) -> Fraction:
    value = _fraction(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--report", metavar="PATH", help="write the JSON report here instead of stdout")
    p.add_argument("--format", choices=FORMATS, help="graph format (input default: detect; output: edgelist)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--budget", type=int, default=None, help="search node budget (env ODD_HOM_BUDGET)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="oddhom", description="Odd-cycle homomorphism threshold certificates.")
    parser.add_argument("--version", action="version", version=f"oddhom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a graph")
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    ga = gsub.add_parser("andrasfai", parents=[common], help="Andrasfai graph A_{k,r}")
    ga.add_argument("--k", type=int, required=True)
    ga.add_argument("--r", type=int, required=True)
    gt = gsub.add_parser("tetra", parents=[common], help="the tetrahedron T* on 4k vertices")
    gt.add_argument("--k", type=int, required=True)
    gb = gsub.add_parser("blowup", parents=[common], help="counterexample blow-up of T*")
    gb.add_argument("--k", type=int, required=True)
    gb.add_argument("--f", type=int, required=True)
    gb.add_argument("--parity", choices=("even", "odd"), required=True)
    for g in (ga, gt, gb):
        g.add_argument("--verify", action="store_true", help="also emit a verification report")
        g.add_argument("--out", metavar="PATH", help="write the graph here instead of stdout")

    check = sub.add_parser("check", help="cycle-structure checks")
    csub = check.add_subparsers(dest="what", required=True, parser_class=_Parser)
    cc = csub.add_parser("cfree", parents=[common], help="no cycle of length exactly L")
    cc.add_argument("--l", type=int, required=True)
    cd = csub.add_parser("dfree", parents=[common], help="no D_L subgraph")
    cd.add_argument("--l", type=int, required=True)
    cd.add_argument("--k", type=int, default=None)
    co = csub.add_parser("oddgirth", parents=[common], help="odd girth with a witness cycle")
    cl = csub.add_parser("lemmas", parents=[common], help="degree-hypothesis lemma audit")
    cl.add_argument("--k", type=int, required=True)
    cl.add_argument("--eps", type=_positive_fraction, required=True)
    cl.add_argument("--force", action="store_true", help="run the checks even if hypotheses fail")
    for c in (cc, cd, co, cl):
        c.add_argument("file")

    h = sub.add_parser("hom", parents=[common], help="decide SOURCE -> TARGET")
    h.add_argument("source")
    h.add_argument("target")
    ha = sub.add_parser("hom-andrasfai", parents=[common], help="decide G -> A_{k,r} for r <= rmax")
    ha.add_argument("--k", type=int, required=True)
    ha.add_argument("--rmax", type=int, required=True)
    ha.add_argument("file")
    rt = sub.add_parser("recognize-tetra", parents=[common], help="is G a (2k+1)-tetrahedron")
    rt.add_argument("--k", type=int, required=True)
    rt.add_argument("file")

    rd = sub.add_parser("reduce", parents=[common], help="bounded reduced graph H with G -> H")
    rd.add_argument("--k", type=int, required=True)
    rd.add_argument("--eps", type=_positive_fraction, required=True)
    rd.add_argument("--m", type=int, required=True)
    rd.add_argument("--rounds", type=int, default=None)
    rd.add_argument("--seed", type=int, default=0)
    rd.add_argument("--class-min", type=int, default=None, help="minimum kept Q-class size")
    rd.add_argument("--out", metavar="PATH", help="write H here")
    rd.add_argument("file")

    ce = sub.add_parser("certify", parents=[common], help="certify a counterexample blow-up")
    ce.add_argument("--k", type=int, required=True)
    ce.add_argument("--f", type=int, required=True)
    ce.add_argument("--rmax", type=int, required=True)
    ce.add_argument("--eps", type=_positive_fraction, required=True)

    pr = sub.add_parser("preset", parents=[common], help="run a bundled batch")
    pr.add_argument("name", choices=sorted(PRESETS))
    return parser


# -- io ---------------------------------------------------------------------------

def read_graph(path: str, fmt: str | None) -> Graph:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}")
    try:
        return decode(data, fmt or sniff_format(data))
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}")
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def _out_format(args, path: str | None) -> str:
    if args.format:
        return args.format
    if path and path.endswith((".g6", ".graph6")):
        return "graph6"
    return "edgelist"


def write_graph(g: Graph, path: str | None, fmt: str) -> None:
    data = encode(g, fmt)
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def emit_report(rep: CertificateReport, path: str | None, stream=None) -> None:
    text = rep.to_json()
    if path:
        Path(path).write_text(text)
    else:
        (stream or sys.stdout).write(text)


# -- commands --------------------------------------------------------------------

def _gen(args) -> tuple[CertificateReport | None, Graph]:
    if args.family == "andrasfai":
        p = AndrasfaiParams(args.k, args.r)
        g = andrasfai_graph(p)
        return (verify_andrasfai(p) if args.verify else None), g
    if args.family == "tetra":
        g, tet = tetra_star(args.k)
        rep = None
        if args.verify:
            rep = CertificateReport(f"T*(k={args.k})", params={"k": args.k})
            rep.digest("graph", g)
            rep.add("member", "T* is a (2k+1)-tetrahedron", validate_tetra(g, tet),
                    witness={"center": tet.center, "branches": tet.branches})
            og = odd_girth(g)
            rep.add("odd_girth", "odd girth is 2k+1", og == 2 * args.k + 1, witness=og)
        return rep, g
    build = blowup_even if args.parity == "even" else blowup_odd
    g = build(args.k, args.f)
    rep = None
    if args.verify:
        k, f, parity = args.k, args.f, args.parity
        rep = CertificateReport(f"blowup(k={k},f={f},{parity})",
                                params={"k": k, "f": f, "parity": parity, "max_eps": max_eps(parity, k, f)})
        rep.digest("graph", g)
        rep.add("order", "blow-up order matches the closed form", g.n == expected_order(parity, k, f),
                witness=g.n)
        rep.add("degree", "minimum degree matches the closed form",
                g.min_degree() == expected_min_degree(parity, k, f), witness=g.min_degree())
        og = odd_girth(g)
        rep.add("odd_girth", "odd girth is 2k+1", og == 2 * k + 1, witness=og)
    return rep, g


def _check(args) -> CertificateReport:
    g = read_graph(args.file, args.format)
    rep = CertificateReport(f"check {args.what}")
    rep.digest("graph", g)
    if args.what == "cfree":
        if args.l < 3:
            raise UsageError("--l must be at least 3")
        rep.params["l"] = args.l
        cyc = contains_cycle(g, args.l, args.budget)
        rep.add("cfree", f"G has no cycle of length {args.l}", cyc is None, witness=cyc)
    elif args.what == "dfree":
        if args.l < 3 or args.l % 2 == 0:
            raise UsageError("--l must be odd and at least 3")
        rep.params.update(l=args.l, k=args.k)
        w = contains_D(g, args.l, args.k, args.budget)
        rep.add("dfree", f"G has no D_{args.l}", w is None, witness=w)
    elif args.what == "oddgirth":
        og = odd_girth(g)
        cyc = shortest_odd_cycle(g)
        rep.params["odd_girth"] = og
        rep.add("witness", "shortest odd cycle has length equal to the odd girth",
                (cyc is None) if og == float("inf") else (is_cycle(g, cyc) and len(cyc) == og), witness=cyc)
    else:
        rep.extend(check_lemma_N(g, args.k, args.eps, force=args.force))
        rep.params.update(k=args.k, eps=args.eps)
    return rep


def _hom(args, jobs: int) -> CertificateReport:
    src = read_graph(args.source, args.format)
    tgt = read_graph(args.target, args.format)
    rep = CertificateReport("hom")
    rep.digest("source", src)
    rep.digest("target", tgt)
    claim = "SOURCE maps homomorphically into TARGET"
    try:
        h = find_homomorphism(src, tgt, args.budget, jobs=jobs)
    except BudgetExceeded as exc:
        rep.abort("hom", claim, str(exc))
        return rep
    if h is None:
        obstruction = HomomorphismSearch(src, tgt)
        obstruction._prepare()
        rep.params["outcome"] = "none"
        rep.add("hom", claim, False, detail=obstruction.obstruction or "search exhausted")
    else:
        rep.params["outcome"] = "exists"
        rep.add("hom", claim, verify_homomorphism(Homomorphism(src, tgt, h.map)), witness=h.map)
    return rep


def _hom_andrasfai(args) -> CertificateReport:
    g = read_graph(args.file, args.format)
    rep = CertificateReport("hom-andrasfai", params={"k": args.k, "rmax": args.rmax})
    rep.digest("graph", g)
    for res in hom_to_andrasfai(g, args.k, args.rmax, args.budget):
        name = f"r{res.r}"
        claim = f"G maps into A_{{{args.k},{res.r}}}"
        if res.status == "abort":
            rep.abort(name, claim, res.reason)
        else:
            rep.add(name, claim, res.status == "exists", witness=res.map,
                    detail=f"{res.reason}; nodes={res.nodes}".lstrip("; "))
    return rep


def _recognize(args) -> CertificateReport:
    g = read_graph(args.file, args.format)
    rep = CertificateReport("recognize-tetra", params={"k": args.k})
    rep.digest("graph", g)
    tet = recognize_tetra(g, args.k)
    witness = None if tet is None else {"cycle": tet.cycle, "branches": tet.branches,
                                         "center": tet.center, "spokes": tet.spokes}
    rep.add("tetra", f"G is a {2 * args.k + 1}-tetrahedron", tet is not None, witness=witness)
    return rep


def _reduce(args) -> CertificateReport:
    g = read_graph(args.file, args.format)
    try:
        p = ReductionParams(args.k, args.eps, args.m, rounds=args.rounds, class_min=args.class_min,
                            seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    try:
        res = reduce(g, p)
    except ReductionError as exc:
        rep = exc.report or CertificateReport("reduce")
        if not rep.failures():
            rep.add(exc.stage, "pipeline stage succeeds", False, detail=str(exc))
        rep.params["failed_stage"] = exc.stage
        return rep
    if args.out:
        write_graph(res.reduced.H, args.out, _out_format(args, args.out))
    return res.report


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is not None and args.budget < 1:
        parser.error("--budget must be positive")
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1:
        parser.error("--jobs must be positive")
    try:
        if args.command == "gen":
            rep, g = _gen(args)
            write_graph(g, args.out, _out_format(args, args.out))
            if rep is not None:
                emit_report(rep, args.report, sys.stderr)
                return rep.exit_code()
            return 0
        if args.command == "check":
            rep = _check(args)
        elif args.command == "hom":
            rep = _hom(args, jobs)
        elif args.command == "hom-andrasfai":
            rep = _hom_andrasfai(args)
        elif args.command == "recognize-tetra":
            rep = _recognize(args)
        elif args.command == "reduce":
            rep = _reduce(args)
        elif args.command == "certify":
            try:
                rep = certify_counterexample(args.k, args.f, args.rmax, args.eps, args.budget)
            except BudgetExceeded as exc:
                rep = CertificateReport("certify")
                rep.abort("search", "exhaustive search completes", str(exc))
        else:
            rep = PRESETS[args.name]()
    except UsageError as exc:
        print(f"oddhom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"oddhom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit_report(rep, args.report)
    return rep.exit_code()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
