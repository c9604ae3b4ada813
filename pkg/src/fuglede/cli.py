"""Command-line surface.

Matrices and point sets stream through stdin/stdout so subcommands compose
as pipelines (``fuglede construct tao12 | fuglede rank``).  Reports are JSON
(canonical) or text (human view); exit code 0 iff every executed check held,
1 on a failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import acceptance
from ._version import __version__
from .construct import (
    CounterexampleParams,
    build_modified,
    build_original,
    build_spectral_pair,
    smallest_nonsquare,
    tao_dephased_12,
)
from .deciders import graph_on_subspace, spectral, tiles, verify_spectrum
from .formats import (
    ParseError,
    bundled_library,
    load_library,
    parse_gf_matrix_text,
    parse_point_set_text,
    serialize_gf_matrix,
    serialize_point_set,
)
from .gfmat import rank
from .loghad import dephase, is_log_hadamard
from .reports import Metrics, ReportTimer, VerdictReport
from .scans import ScanConfig, fuglede_scan, rank3_probe, rank_sweep, size_feasibility


def _read_source(path: str | None) -> tuple[str, str]:
    if path is None or path == "-":
        return sys.stdin.read(), "<stdin>"
    return Path(path).read_text(encoding="utf-8"), path


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_report(report: VerdictReport, args: argparse.Namespace,
                 text_body: str | None = None) -> int:
    """Write a report (or its text-mode body) and map the verdict to an exit code."""
    if args.format == "json":
        _emit(report.to_json(), args.output)
    else:
        _emit(text_body if text_body is not None else report.render_text(), args.output)
    return 0 if report.passed else 1


def _data_report(claim_id: str, inputs: dict, payload: dict,
                 args: argparse.Namespace) -> VerdictReport:
    return VerdictReport(claim_id, inputs, "found", payload,
                         Metrics(0.0, 1, 1), seed=getattr(args, "seed", None))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_rank(args) -> int:
    text, source = _read_source(args.file)
    m = parse_gf_matrix_text(text, source)
    r = rank(m)
    report = _data_report("rank", {"source": source, "shape": list(m.shape), "p": m.p},
                          {"rank": r}, args)
    return _emit_report(report, args, text_body=str(r))


def _cmd_dephase(args) -> int:
    text, source = _read_source(args.file)
    m = parse_gf_matrix_text(text, source)
    out = serialize_gf_matrix(dephase(m))
    report = _data_report("dephase", {"source": source, "shape": list(m.shape), "p": m.p},
                          {"matrix": out}, args)
    return _emit_report(report, args, text_body=out.rstrip("\n"))


def _cmd_check_log_hadamard(args) -> int:
    text, source = _read_source(args.file)
    m = parse_gf_matrix_text(text, source)
    nrows, ncols = m.shape
    inputs = {"source": source, "shape": [nrows, ncols], "p": m.p}
    if nrows != ncols:
        inputs["warning"] = "matrix is not square"
    ok = is_log_hadamard(m)
    report = VerdictReport("check-log-hadamard", inputs, "holds" if ok else "fails",
                           {"rank": rank(m)} if ok else None, Metrics(0.0, 1, 1))
    return _emit_report(report, args, text_body="holds" if ok else "fails")


def _cmd_construct(args) -> int:
    what = args.what
    if what == "tao12":
        out = serialize_gf_matrix(tao_dephased_12())
        report = _data_report("construct-tao12", {}, {"matrix": out}, args)
        return _emit_report(report, args, text_body=out.rstrip("\n"))
    p = args.p
    if p is None:
        raise SystemExit("construct: --p is required")
    n = args.n if args.n is not None else smallest_nonsquare(p)
    if what == "original":
        out = serialize_gf_matrix(build_original(p, n))
        report = _data_report("construct-original", {"p": p, "n": n}, {"matrix": out}, args)
        return _emit_report(report, args, text_body=out.rstrip("\n"))
    alpha = args.alpha if args.alpha is not None else 1
    if what == "modified":
        if args.beta is not None:
            params = CounterexampleParams(p, n, alpha % p, args.beta % p)
        else:
            params = CounterexampleParams.from_alpha(p, n, alpha)
        out = serialize_gf_matrix(build_modified(params))
        report = _data_report("construct-modified",
                              {"p": p, "n": n, "alpha": params.alpha, "beta": params.beta},
                              {"matrix": out}, args)
        return _emit_report(report, args, text_body=out.rstrip("\n"))
    # what == "pair"
    e, b = build_spectral_pair(p, n, alpha)
    chosen = e if args.part == "set" else b
    out = serialize_point_set(chosen)
    report = _data_report("construct-pair", {"p": p, "n": n, "alpha": alpha,
                                             "part": args.part},
                          {"points": out}, args)
    return _emit_report(report, args, text_body=out.rstrip("\n"))


def _universe_kwargs(args) -> dict:
    return {"max_universe": args.budget} if args.budget else {}


def _cmd_check_tile(args) -> int:
    text, source = _read_source(args.file)
    e = parse_point_set_text(text, source)
    timer = ReportTimer(args.deterministic)
    cert = tiles(e, **_universe_kwargs(args))
    inputs = {"source": source, "p": e.p, "d": e.d, "size": e.size}
    if cert is None:
        report = VerdictReport("check-tile", inputs, "none", None, timer.metrics())
        return _emit_report(report, args, text_body="none")
    payload = {"translations": [list(t) for t in cert.translations.sorted_points()]}
    report = VerdictReport("check-tile", inputs, "found", payload, timer.metrics())
    body = "found\n" + serialize_point_set(cert.translations).rstrip("\n")
    return _emit_report(report, args, text_body=body)


def _cmd_check_spectral(args) -> int:
    text, source = _read_source(args.file)
    e = parse_point_set_text(text, source)
    timer = ReportTimer(args.deterministic)
    cert = spectral(e, **_universe_kwargs(args))
    inputs = {"source": source, "p": e.p, "d": e.d, "size": e.size}
    if cert is None:
        report = VerdictReport("check-spectral", inputs, "none", None, timer.metrics())
        return _emit_report(report, args, text_body="none")
    payload = {"exponents": [list(t) for t in cert.exponents.sorted_points()]}
    report = VerdictReport("check-spectral", inputs, "found", payload, timer.metrics())
    body = "found\n" + serialize_point_set(cert.exponents).rstrip("\n")
    return _emit_report(report, args, text_body=body)


def _cmd_check_graph(args) -> int:
    text, source = _read_source(args.file)
    e = parse_point_set_text(text, source)
    timer = ReportTimer(args.deterministic)
    witness = graph_on_subspace(e, **_universe_kwargs(args))
    inputs = {"source": source, "p": e.p, "d": e.d, "size": e.size}
    if witness is None:
        report = VerdictReport("check-graph", inputs, "none", None, timer.metrics())
        return _emit_report(report, args, text_body="none")
    payload = {"subspace_basis": [list(v) for v in witness.subspace_basis],
               "complement_basis": [list(v) for v in witness.complement_basis]}
    report = VerdictReport("check-graph", inputs, "found", payload, timer.metrics())
    return _emit_report(report, args)


def _cmd_verify_spectrum(args) -> int:
    set_text, set_source = _read_source(args.set_file)
    spec_text, spec_source = _read_source(args.spectrum_file)
    e = parse_point_set_text(set_text, set_source)
    lam = parse_point_set_text(spec_text, spec_source)
    ok = verify_spectrum(e, lam)
    report = VerdictReport("verify-spectrum",
                           {"set": set_source, "spectrum": spec_source,
                            "p": e.p, "d": e.d, "size": e.size},
                           "holds" if ok else "fails", None, Metrics(0.0, 1, 1))
    return _emit_report(report, args, text_body="holds" if ok else "fails")


def _cmd_fuglede_scan(args) -> int:
    explicit = None
    if args.set:
        sets = []
        for path in args.set:
            text, source = _read_source(path)
            sets.append(parse_point_set_text(text, source))
        explicit = tuple(sets)
    kwargs = {}
    if args.budget:
        kwargs["work_budget"] = args.budget
    cfg = ScanConfig(
        p=args.p, d=args.d,
        size_filter=frozenset(args.sizes) if args.sizes else None,
        sample_budget=args.sample,
        thread_count=args.threads,
        deterministic=args.deterministic,
        seed=args.seed,
        checkpoint_path=args.checkpoint,
        explicit=explicit,
        **kwargs,
    )
    report = fuglede_scan(cfg)
    return _emit_report(report, args)


def _cmd_rank_sweep(args) -> int:
    library = load_library(args.library) if args.library else bundled_library()
    entries = library.entries_for(args.order)
    timer = ReportTimer(args.deterministic)
    result = rank_sweep(args.order, entries)
    timer.add_work(len(result.ranks))
    report = VerdictReport("rank-sweep",
                           {"order": args.order,
                            "library": args.library or "bundled",
                            "representatives": len(result.ranks)},
                           "found", {"sweep": result.to_dict()}, timer.metrics())
    return _emit_report(report, args)


def _cmd_size_feasibility(args) -> int:
    library = load_library(args.library) if args.library else None
    result = size_feasibility(args.p, args.d, args.m, library)
    report = VerdictReport("size-feasibility",
                           {"p": args.p, "d": args.d, "m": args.m,
                            "library": args.library or "bundled"},
                           "found", result.to_dict(), Metrics(0.0, 1, 1))
    return _emit_report(report, args, text_body=result.verdict)


def _cmd_rank3_probe(args) -> int:
    kwargs = {}
    if args.budget:
        kwargs["node_budget"] = args.budget
    if args.vertex_budget:
        kwargs["vertex_budget"] = args.vertex_budget
    report = rank3_probe(args.p, deterministic=args.deterministic, **kwargs)
    return _emit_report(report, args)


def _cmd_verify_paper(args) -> int:
    numbers = None
    if args.claims:
        numbers = [int(tok) for tok in args.claims.split(",") if tok.strip()]
    reports = acceptance.run_claims(numbers, threads=args.threads,
                                    deterministic=args.deterministic,
                                    seed=args.seed if args.seed is not None else 0)
    if args.format == "json":
        _emit(json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2),
              args.output)
    else:
        lines = []
        for rep in reports:
            mark = "PASS" if rep.passed else "FAIL"
            lines.append(f"{mark}  {rep.claim_id}: {rep.verdict}")
        ok_count = sum(r.passed for r in reports)
        lines.append(f"{ok_count}/{len(reports)} claims hold")
        _emit("\n".join(lines), args.output)
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# parser


def _env_int(name: str, default: int | None) -> int | None:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return int(raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int,
                        default=_env_int("FUGLEDE_THREADS", 1),
                        help="worker count for parallel scans")
    common.add_argument("--deterministic", action="store_true", default=True,
                        help="byte-stable reports (elapsed time reported as 0)")
    common.add_argument("--no-deterministic", dest="deterministic", action="store_false")
    common.add_argument("--seed", type=int, default=None, help="RNG seed for sampling")
    common.add_argument("--budget", type=int,
                        default=_env_int("FUGLEDE_BUDGET", None),
                        help="work/universe budget override")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--output", metavar="PATH", default=None,
                        help="write the report to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="fuglede",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rank", parents=[common], help="mod-p rank of a matrix")
    sp.add_argument("file", nargs="?", help="matrix file (default stdin)")
    sp.set_defaults(func=_cmd_rank)

    sp = sub.add_parser("dephase", parents=[common],
                        help="zero the first row and column by equivalence moves")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(func=_cmd_dephase)

    sp = sub.add_parser("check-log-hadamard", parents=[common],
                        help="test the row-difference equidistribution property")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(func=_cmd_check_log_hadamard)

    sp = sub.add_parser("construct", parents=[common],
                        help="emit one of the built-in matrices or point sets")
    sp.add_argument("what", choices=("original", "modified", "pair", "tao12"))
    sp.add_argument("--p", type=int, default=None, help="odd prime")
    sp.add_argument("--n", type=int, default=None,
                    help="quadratic nonresidue mod p (default: smallest)")
    sp.add_argument("--alpha", type=int, default=None, help="shift parameter (default 1)")
    sp.add_argument("--beta", type=int, default=None,
                    help="shift parameter (default from the parallelism relation)")
    sp.add_argument("--part", choices=("set", "spectrum"), default="set",
                    help="which half of the pair to emit")
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("check-tile", parents=[common],
                        help="decide tiling; emits a translation set if one exists")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(func=_cmd_check_tile)

    sp = sub.add_parser("check-spectral", parents=[common],
                        help="decide spectrality; emits a spectrum if one exists")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(func=_cmd_check_spectral)

    sp = sub.add_parser("check-graph", parents=[common],
                        help="decide whether the set is a graph on a subspace")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(func=_cmd_check_graph)

    sp = sub.add_parser("verify-spectrum", parents=[common],
                        help="re-verify a claimed spectrum against a set")
    sp.add_argument("set_file")
    sp.add_argument("spectrum_file")
    sp.set_defaults(func=_cmd_verify_spectrum)

    sp = sub.add_parser("fuglede-scan", parents=[common],
                        help="scan subsets for tile/spectral discrepancies")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--sizes", type=lambda s: [int(t) for t in s.split(",")],
                    default=None, help="comma-separated size filter")
    sp.add_argument("--sample", type=int, default=None,
                    help="number of seeded random subsets (default: exhaustive)")
    sp.add_argument("--set", action="append", default=None, metavar="FILE",
                    help="scan exactly these point-set files")
    sp.add_argument("--checkpoint", default=None, metavar="PATH",
                    help="resumable JSONL progress ledger")
    sp.set_defaults(func=_cmd_fuglede_scan)

    sp = sub.add_parser("rank-sweep", parents=[common],
                        help="dephased ranks of the representatives of one order")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--library", default=None, metavar="DIR",
                    help="directory of sign-matrix files (default: bundled)")
    sp.set_defaults(func=_cmd_rank_sweep)

    sp = sub.add_parser("size-feasibility", parents=[common],
                        help="rank-based exclusion of spectral sets of a given size")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--library", default=None, metavar="DIR")
    sp.set_defaults(func=_cmd_size_feasibility)

    sp = sub.add_parser("rank3-probe", parents=[common],
                        help="search for a rank-3 log-Hadamard matrix of size 2p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--vertex-budget", type=int, default=None)
    sp.set_defaults(func=_cmd_rank3_probe)

    sp = sub.add_parser("verify-paper", parents=[common],
                        help="run the full desk-scale verification suite")
    sp.add_argument("--claims", default=None,
                    help="comma-separated claim numbers (default: all)")
    sp.set_defaults(func=_cmd_verify_paper)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
