"""Command-line front end.

Examples::

    symdiff p2 product.w --order 12
    symdiff classify monodromy.w --point 0,0 --format structured
    symdiff classify --all            # every bundled example, in parallel
    symdiff jetdim --m 2 --n 2 --samples 5 --seed 7
    symdiff curvecount --g 3 --m 2

Exit status is 0 on analytic success, 2 on a negative verdict and 1 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .classify import FIRST_KIND, classify_point
from .coeff import fmt, parse_rational
from .curves import CurveDivisor, count_by_enumeration, count_representations
from .errors import AnalysisError, ExpansionError, ParseError, SeriesError
from .expr import expand_expr_at, parse_document
from .jets import JetDimQuery, jacobian_rank_closed_locus, jet_dims
from .series import DEFAULT_ORDER
from .surface import det_w, disc_w, exact_decomposition, p2, split_local

__all__ = ["main", "run", "build_parser", "BUNDLED_EXAMPLES"]

BUNDLED_EXAMPLES = Path(__file__).parent / "examples"
FILE_COMMANDS = ("p2", "classify", "decompose", "split", "det")

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE = 0, 1, 2


class UsageError(Exception):
    pass


def _point(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected a,b with rational a and b")
    try:
        return tuple(parse_rational(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symdiff", description="Closedness and first-kind analysis of symmetric 2-differentials.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-determinism)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in FILE_COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file", nargs="?")
        p.add_argument("--point", type=_point, default=(0, 0))
        p.add_argument("--order", type=int, default=DEFAULT_ORDER)
        p.add_argument("--all", nargs="?", const=str(BUNDLED_EXAMPLES), metavar="DIR", help="run on every .w file in DIR (default: bundled examples)")
        p.add_argument("--jobs", type=int, default=None, help="worker processes for --all")
    j = sub.add_parser("jetdim", parents=[common])
    j.add_argument("--m", type=int, required=True)
    j.add_argument("--n", type=int, required=True)
    j.add_argument("--samples", type=int, default=5)
    j.add_argument("--seed", type=int, default=0)
    c = sub.add_parser("curvecount", parents=[common])
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--enumerate", action="store_true", help="also count by exhaustive enumeration")
    return parser


# ---------------------------------------------------------------------------
# reports


def _report(command, digest, order, certified, verdict, evidence, summary, code, elapsed=None):
    return {
        "doc": {
            "certified_order": certified,
            "command": command,
            "evidence": evidence,
            "input_digest": digest,
            "order": order,
            "timings": None if elapsed is None else {"seconds": round(elapsed, 6)},
            "verdict": verdict,
        },
        "summary": summary,
        "code": code,
    }


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _analyze_file(command: str, path: str, point, order: int):
    """Returns (certified, verdict, evidence, summary, code)."""
    doc = parse_document(Path(path).read_text(encoding="utf-8"))
    pt = f"({fmt(point[0])}, {fmt(point[1])})"
    try:
        if command == "p2":
            w = expand_expr_at(doc.expr, point, order + 2, doc.params)
            val = p2(w).truncate(order)
            k = val.certified_order
            if val.is_zero(k):
                return k, "Closed", {"p2": "0", "point": pt}, f"P2 == 0 to order {k}", EXIT_OK
            v = val.valuation(k)
            return k, "NotClosedHere", {"p2": val.to_text(upto=min(k, v + 4)), "point": pt, "valuation": v}, f"P2 != 0 (lowest nonzero degree {v}; certified to order {k})", EXIT_NEGATIVE
        if command == "classify":
            c = classify_point(doc, point, order=order)
            ev = c.evidence_dict() or {}
            ev = dict(ev, point=pt)
            if c.notice:
                ev["notice"] = c.notice
            ev["disc_at_point"] = None if c.disc_at_point is None else fmt(c.disc_at_point)
            code = EXIT_OK if c.verdict == FIRST_KIND else EXIT_NEGATIVE
            return c.certified_order, c.label, ev, f"{c.label} at {pt}", code
        w = expand_expr_at(doc.expr, point, order, doc.params)
        if command == "det":
            d, s = det_w(w), disc_w(w)
            degenerate = not s.constant
            ev = {"det": d.to_text(upto=min(order, 6)), "disc": s.to_text(upto=min(order, 6)), "degenerate_at_point": degenerate, "point": pt}
            return min(d.certified_order, s.certified_order), "Degenerate" if degenerate else "Nondegenerate", ev, f"disc(w) at {pt} = {fmt(s.constant)}", EXIT_OK
        if command == "split":
            phi1, phi2 = split_local(w)
            back = phi1 * phi2
            k = min(back.certified_order, w.certified_order)
            ev = {"phi1": _form_text(phi1), "phi2": _form_text(phi2), "point": pt, "reassembles": back.eq_to(w, k)}
            return k, "Split", ev, f"split at {pt}", EXIT_OK
        if command == "decompose":
            dec = exact_decomposition(w)
            k = dec.reassemble().certified_order
            ev = {"F1": dec.F1.to_text(upto=min(k, 6)), "F2": dec.F2.to_text(upto=min(k, 6)), "point": pt, "scalar": fmt(dec.scalar)}
            return k, "ExactDecomposition", ev, f"w = {fmt(dec.scalar)} dF1 dF2 to order {k}", EXIT_OK
    except AnalysisError as exc:
        return None, exc.verdict, {"point": pt, "witness": str(exc)}, f"{exc.verdict} at {pt}: {exc}", EXIT_NEGATIVE
    except (ExpansionError, SeriesError) as exc:
        name = type(exc).__name__
        return None, name, {"point": pt, "witness": str(exc)}, f"{name} at {pt}: {exc}", EXIT_NEGATIVE
    raise UsageError(f"unknown command {command}")


def _form_text(phi, upto: int = 6) -> str:
    return f"({phi.p.to_text(upto=upto)}) dz1 + ({phi.q.to_text(upto=upto)}) dz2"


def _file_job(args: tuple) -> dict:
    command, path, point, order, timings = args
    t0 = time.perf_counter()
    data = Path(path).read_bytes()
    try:
        certified, verdict, evidence, summary, code = _analyze_file(command, path, point, order)
    except ParseError as exc:
        return _report(command, _digest(data), order, None, "ParseError", {"line": exc.line, "column": exc.col, "message": str(exc)}, f"{path}: {exc}", EXIT_USAGE)
    elapsed = time.perf_counter() - t0 if timings else None
    return _report(command, _digest(data), order, certified, verdict, evidence, summary, code, elapsed)


def run(args: argparse.Namespace) -> tuple[str, int]:
    """Execute a parsed job; returns (output text, exit status)."""
    t0 = time.perf_counter()
    if args.command in FILE_COMMANDS:
        if args.order < 0:
            raise UsageError("--order must be nonnegative")
        if args.all:
            files = sorted(Path(args.all).glob("*.w"))
            if not files:
                raise UsageError(f"no .w files in {args.all}")
            jobs = [(args.command, str(f), args.point, args.order, args.timings) for f in files]
            workers = args.jobs or min(len(jobs), os.cpu_count() or 1)
            if workers > 1:
                with ProcessPoolExecutor(workers) as ex:
                    reports = list(ex.map(_file_job, jobs))
            else:
                reports = [_file_job(j) for j in jobs]
            names = [f.name for f in files]
            if args.format == "structured":
                out = _dump({n: r["doc"] for n, r in zip(names, reports)})
            else:
                out = "\n".join(f"{n}: {r['summary']}" for n, r in zip(names, reports))
            codes = {r["code"] for r in reports}
            code = EXIT_USAGE if EXIT_USAGE in codes else (EXIT_NEGATIVE if EXIT_NEGATIVE in codes else EXIT_OK)
            return out, code
        if not args.file:
            raise UsageError(f"{args.command} needs an input file or --all")
        if not Path(args.file).is_file():
            raise UsageError(f"no such file: {args.file}")
        rep = _file_job((args.command, args.file, args.point, args.order, args.timings))
    elif args.command == "jetdim":
        try:
            q = JetDimQuery(args.m, args.n, args.samples, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        r = jacobian_rank_closed_locus(q)
        ambient, bound, predicate = jet_dims(q)
        verdict = "Proper" if r.proper else "Full"
        summary = f"ambient {ambient}, bound {bound}, rank {r.observed_rank}, {'proper' if r.proper else 'not proper'}"
        elapsed = time.perf_counter() - t0 if args.timings else None
        digest = _digest(f"jetdim m={args.m} n={args.n} samples={args.samples} seed={args.seed}".encode())
        rep = _report("jetdim", digest, args.n, None, verdict, r.to_dict(), summary, EXIT_OK, elapsed)
    elif args.command == "curvecount":
        try:
            d = CurveDivisor(args.g, args.m)
            count = count_representations(args.g, args.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ev = {"count": str(count), "g": args.g, "m": args.m}
        if args.enumerate:
            ev["enumerated"] = str(count_by_enumeration(d))
        summary = f"{count} representations" + (f" ({ev['enumerated']} enumerated)" if args.enumerate else "")
        elapsed = time.perf_counter() - t0 if args.timings else None
        digest = _digest(f"curvecount g={args.g} m={args.m}".encode())
        rep = _report("curvecount", digest, None, None, "Count", ev, summary, EXIT_OK, elapsed)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {args.command}")
    if args.format == "structured":
        return _dump(rep["doc"]), rep["code"]
    return _text(rep["doc"], rep["summary"]), rep["code"]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def _text(doc: dict, summary: str) -> str:
    lines = [summary, f"verdict: {doc['verdict']}"]
    if doc["certified_order"] is not None:
        lines.append(f"certified order: {doc['certified_order']}")
    ev = doc["evidence"]
    if isinstance(ev, dict):
        for k in sorted(ev):
            v = ev[k]
            if isinstance(v, dict):
                for k2 in sorted(v):
                    lines.append(f"  {k2}: {_plain(v[k2])}")
            else:
                lines.append(f"{k}: {_plain(v)}")
    if doc["timings"]:
        lines.append(f"time: {doc['timings']['seconds']}s")
    return "\n".join(lines)


def _plain(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out, code = run(args)
    except UsageError as exc:
        print(f"symdiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out)
    if code == EXIT_USAGE and args.command in FILE_COMMANDS and not args.all:
        print(out.splitlines()[0], file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
