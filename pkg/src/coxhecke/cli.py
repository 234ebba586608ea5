"""Command-line front end: ``coxhecke <command> MATRIX --radius L [options]``.

MATRIX is a JSON document {"gens": [...], "m": [[...]]} with 0 for infinity,
or a preset such as ``triangle:3,4,6``, ``universal:3``, ``dihedral:5``,
``type_a:3``.  Every report starts with a header echoing the run
configuration and the content hash of the ball.
"""

from __future__ import annotations

import argparse
import glob
import json
import logging
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

from .cells import block_dag_dot, cell_report, gamma_set, mu_graph_dot
from .coxeter import CoxeterMatrix
from .errors import CoxHeckeError, MatrixError, MissingPrerequisite
from .hecke import t_mult
from .kl import a_assign, j_table
from .laurent import expand_in
from .verify import SUITES, Workspace, run_suite

CACHE_ENV = "COXHECKE_CACHE_DIR"

EXIT_OK, EXIT_SUITE_FAILED, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_matrix(text: str) -> CoxeterMatrix:
    if os.path.exists(text):
        try:
            return CoxeterMatrix.load(text)
        except json.JSONDecodeError as exc:
            raise MatrixError(f"{text}: not valid JSON ({exc})") from None
    m = re.fullmatch(r"(triangle|universal|dihedral|type_a):([0-9,]+)", text)
    if not m:
        raise UsageError(f"{text!r} is neither a file nor a preset")
    kind, nums = m.group(1), [int(k) for k in m.group(2).split(",")]
    inf = float("inf")
    nums = [inf if k == 0 else k for k in nums]
    if kind == "triangle" and len(nums) == 3:
        return CoxeterMatrix.triangle(*nums)
    if kind == "dihedral" and len(nums) == 1:
        return CoxeterMatrix.dihedral(nums[0])
    if kind in ("universal", "type_a") and len(nums) == 1:
        return getattr(CoxeterMatrix, kind)(int(nums[0]))
    raise UsageError(f"bad preset {text!r}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Output:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def header(self, header: dict):
        if self.fmt == "jsonl":
            self.stream.write(_dump({"header": header}) + "\n")
        elif self.fmt == "dot":
            self.stream.write(f"// {_dump(header)}\n")
        else:
            self.stream.write("# " + " ".join(f"{k}={_dump(v)}" for k, v in sorted(header.items())) + "\n")

    def record(self, rec: dict, text: str | None = None):
        if self.fmt == "text":
            self.stream.write((text if text is not None else _dump(rec)) + "\n")
        else:
            self.stream.write(_dump(rec) + "\n")

    def raw(self, text: str):
        self.stream.write(text)


def _cache_path(args, matrix: CoxeterMatrix) -> str | None:
    directory = args.cache or os.environ.get(CACHE_ENV)
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, f"kl-{matrix.content_hash}.jsonl")


def _workspace(args) -> Workspace:
    matrix = load_matrix(args.matrix)
    if args.radius is None:
        raise UsageError("--radius is required")
    if args.radius < 0:
        raise UsageError("--radius must be non-negative")
    return Workspace(
        matrix,
        args.radius,
        pair_budget=args.pair_budget,
        margin=args.margin,
        cache_path=_cache_path(args, matrix),
    )


def _header(args, ws: Workspace, command: str) -> dict:
    return {
        "command": command,
        "matrix": ws.matrix.to_document(),
        "matrix_hash": ws.matrix.content_hash,
        "radius": ws.radius,
        "pair_budget": ws.pair_budget,
        "margin": ws.margin,
        "threads": 1 if args.deterministic else args.threads,
        "deterministic": args.deterministic,
        "format": args.format,
        "ball_hash": ws.ball.content_hash,
        "elements": len(ws.ball),
    }


def _elem(ws: Workspace, text: str) -> int:
    try:
        return ws.ball.parse_word(text)
    except (KeyError, ValueError, MatrixError) as exc:
        raise UsageError(f"cannot parse word {text!r}: {exc}") from None


# -- commands ----------------------------------------------------------------------------


def cmd_ball(args, ws: Workspace, out: Output) -> int:
    ball = ws.ball
    gens = ws.matrix.gens
    for w in range(len(ball)):
        rec = {
            "id": w,
            "word": ball.format_word(w),
            "length": ball.lengths[w],
            "left_descents": sorted(gens[s] for s in ball.descents(w, "left")),
            "right_descents": sorted(gens[s] for s in ball.descents(w, "right")),
        }
        out.record(rec, f"{w}\t{rec['word']}\t{rec['length']}\tL={','.join(rec['left_descents'])}\tR={','.join(rec['right_descents'])}")
    return EXIT_OK


def cmd_profile(args, ws: Workspace, out: Output) -> int:
    rec = ws.profile.to_dict(ws.matrix.gens)
    out.record(rec, " ".join(f"{k}={_dump(v)}" for k, v in sorted(rec.items())))
    return EXIT_OK


def _kl_record(ws, y, w):
    kl = ws.kl
    ball = ws.ball
    p = kl.kl_poly(y, w)
    rec = {"y": ball.format_word(y), "w": ball.format_word(w), "P": p.to_q_json(), "mu": kl.mu(y, w)}
    return rec, f"{rec['y']} {rec['w']}: P = {p.to_text()}, mu = {rec['mu']}"


def cmd_kl(args, ws: Workspace, out: Output) -> int:
    kl = ws.kl
    if args.all:
        for w in range(len(ws.ball)):
            for y in sorted(kl.interval(w)):
                out.record(*_kl_record(ws, y, w))
    else:
        if args.y is None or args.w is None:
            raise UsageError("kl needs --y and --w, or --all")
        out.record(*_kl_record(ws, _elem(ws, args.y), _elem(ws, args.w)))
    ws.save_cache()
    return EXIT_OK


def cmd_hecke(args, ws: Workspace, out: Output) -> int:
    if args.x is None or args.y is None:
        raise UsageError("hecke needs --x and --y")
    ball = ws.ball
    x, y = _elem(ws, args.x), _elem(ws, args.y)
    prod = t_mult(ball, x, y)
    only = _elem(ws, args.z) if args.z is not None else None
    for z, p in prod.items():
        if only is not None and z != only:
            continue
        exp = expand_in(p, "XI")
        rec = {"x": args.x, "y": args.y, "z": ball.format_word(z), "f_xi": list(exp.coeffs), "laurent": p.to_json()}
        out.record(rec, f"f[{ball.format_word(x)}, {ball.format_word(y)}, {rec['z']}] = {exp}")
    if only is not None and only not in prod.terms:
        out.record({"x": args.x, "y": args.y, "z": args.z, "f_xi": [], "laurent": []}, f"f[{args.x}, {args.y}, {args.z}] = 0")
    return EXIT_OK


def cmd_afun(args, ws: Workspace, out: Output) -> int:
    survey = ws.a_scan
    omega = ws.omega
    for v in range(len(ws.ball)):
        rec = a_assign(ws.kl, v, ws.pair_budget, omega, survey).to_dict(ws.ball)
        rec["certified"] = ws.certified(v)
        out.record(rec, f"{rec['element']}\ta={rec['a_hat']}\t{rec['exactness']}\t{rec['reason']}")
    ws.save_cache()
    return EXIT_OK


def cmd_cells(args, ws: Workspace, out: Output) -> int:
    parts = {"LEFT": ws.left_cells, "RIGHT": ws.right_cells, "TWO_SIDED": ws.two_sided}
    part = parts[args.side]
    if args.format == "dot":
        out.raw(mu_graph_dot(ws.graph, args.side) if args.graph else block_dag_dot(ws.ball, part))
    elif args.format == "jsonl":
        for rec in cell_report(ws.ball, ws.left_cells, ws.two_sided, ws.omega):
            out.record(rec)
    else:
        for b, blk in enumerate(part.blocks):
            status = "CERTIFIED" if part.certified[b] else "PARTIAL"
            out.record({}, f"block {b} {status} size={len(blk)} min={ws.ball.format_word(blk[0])}")
    ws.save_cache()
    return EXIT_OK


def cmd_lowest(args, ws: Workspace, out: Output) -> int:
    ball = ws.ball
    fw = ball.format_word
    omega = ws.omega
    for x in omega.members:
        z, u, y = omega.witness(x)
        rec = {"kind": "omega", "element": fw(x), "certified": ws.certified(x), "witness": [fw(z), fw(u), fw(y)]}
        out.record(rec, f"omega {fw(x)} = {fw(z)} | {fw(u)} | {fw(y)}")
    dp = ws.dprime
    for mem in dp.members:
        gam = gamma_set(ball, mem.x)
        rec = {
            "kind": "d_prime",
            "element": fw(mem.x),
            "w": fw(mem.w),
            "y": fw(mem.y),
            "d": fw(mem.d) if mem.d is not None else None,
            "d_word": ball.format_letters(mem.d_word),
            "gamma_size": len(gam),
        }
        out.record(rec, f"d' {rec['element']} = {rec['w']} | {rec['y']}  D={rec['d'] or rec['d_word']}  |Gamma|={len(gam)}")
    for x in dp.undecided:
        out.record({"kind": "undecided", "element": fw(x)}, f"undecided {fw(x)}")
    return EXIT_OK


def cmd_jtable(args, ws: Workspace, out: Output) -> int:
    ball = ws.ball
    fw = ball.format_word
    omega = ws.omega
    unit = None
    if args.set == "omega":
        elems = [x for x in omega.members if ws.certified(x)]
    else:
        w0 = omega.seeds[0][0]
        mask = ball.ldesc[w0]
        gam = {x for x in range(len(ball)) if ball.rdesc[x] & mask == mask}
        elems = [x for x in gam if ball.inverse(x) in gam and omega.member[x]]
        unit = w0
    table = j_table(ws.kl, elems, ws.pair_budget, omega, unit=unit)
    for (w, u, v), g in sorted(table.gamma.items()):
        out.record({"w": fw(w), "u": fw(u), "v": fw(v), "gamma": g}, f"gamma[{fw(w)}, {fw(u)}, {fw(v)}] = {g}")
    incomplete = sum(1 for ok in table.complete.values() if not ok)
    summary = {"elements": len(elems), "incomplete_pairs": incomplete, "unit": fw(unit) if unit is not None else None, "unit_ok": table.unit_ok}
    out.record({"summary": summary}, "summary " + _dump(summary))
    ws.save_cache()
    return EXIT_OK


def _suite_options(args) -> dict:
    opts = {}
    if args.radii:
        opts["radii"] = tuple(int(r) for r in args.radii.split(","))
    if args.max_word is not None:
        opts["max_word"] = args.max_word
    return opts


def cmd_check(args, ws: Workspace, out: Output) -> int:
    if args.suite:
        ids = args.suite
        explicit = True
    else:
        ids = list(SUITES)
        explicit = False
    for sid in ids:
        if sid not in SUITES:
            raise UsageError(f"unknown suite {sid!r}")
    opts = _suite_options(args)

    def one(sid):
        kw = {k: v for k, v in opts.items() if (k != "radii" or sid == "PROP_3_2_PROBE") and (k != "max_word" or sid.startswith("WORD"))}
        try:
            return run_suite(sid, ws, deterministic=args.deterministic, **kw)
        except MissingPrerequisite as exc:
            if explicit:
                raise
            return {"suite": sid, "not_applicable": str(exc)}

    # shared artifacts are built once before suites fan out
    ws.kl, ws.two_sided, ws.omega
    threads = 1 if args.deterministic else max(1, args.threads)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            reports = list(pool.map(one, ids))
    else:
        reports = [one(sid) for sid in ids]
    failed = False
    for rep in reports:
        if isinstance(rep, dict):
            out.record(rep, f"N/A  {rep['suite']}: {rep['not_applicable']}")
            continue
        if not rep.passed and rep.kind != "PROBE":
            failed = True
        out.record(rep.to_dict(), rep.summary_line() + ("  " + _dump(rep.observations) if rep.observations else ""))
    ws.save_cache()
    return EXIT_SUITE_FAILED if failed else EXIT_OK


def cmd_cache(args, out: Output) -> int:
    directory = args.cache or os.environ.get(CACHE_ENV)
    if not directory:
        raise UsageError(f"no cache directory: pass --cache or set {CACHE_ENV}")
    files = sorted(glob.glob(os.path.join(directory, "kl-*.jsonl")))
    if args.matrix is not None:
        h = load_matrix(args.matrix).content_hash
        files = [f for f in files if os.path.basename(f) == f"kl-{h}.jsonl"]
    out.header({"command": "cache", "action": args.action, "directory": directory})
    for path in files:
        with open(path) as fh:
            head = json.loads(fh.readline() or "{}")
            records = sum(1 for _ in fh)
        rec = {"file": os.path.basename(path), "schema": head.get("schema"), "matrix_hash": head.get("matrix"), "radius": head.get("radius"), "records": records}
        if args.action == "clear":
            os.remove(path)
            rec["removed"] = True
        out.record(rec, " ".join(f"{k}={v}" for k, v in rec.items()))
    return EXIT_OK


COMMANDS = {
    "ball": cmd_ball,
    "profile": cmd_profile,
    "kl": cmd_kl,
    "hecke": cmd_hecke,
    "afun": cmd_afun,
    "cells": cmd_cells,
    "lowest": cmd_lowest,
    "jtable": cmd_jtable,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", "-L", type=int, help="length radius of the ball")
    common.add_argument("--pair-budget", type=int, help="bound on l(x)+l(y) for product surveys (default: radius)")
    common.add_argument("--margin", type=int, help="certification margin (default: a0 + 1)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cache", help=f"KL cache directory (default: ${CACHE_ENV})")
    common.add_argument("--format", choices=("jsonl", "dot", "text"), default="jsonl")
    common.add_argument("--deterministic", action="store_true", help="single worker, timing fields omitted")

    p = argparse.ArgumentParser(prog="coxhecke", description="Kazhdan-Lusztig cells and Hecke structure constants on truncated Coxeter groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("matrix", help="matrix JSON path or preset (triangle:3,4,6, universal:3, dihedral:5, type_a:3)")
        return sp

    add("ball", "enumerate elements with words, lengths and descents")
    add("profile", "a0, longest-order pairs and rank-2 classes")
    sp = add("kl", "Kazhdan-Lusztig polynomials and mu")
    sp.add_argument("--y")
    sp.add_argument("--w")
    sp.add_argument("--all", action="store_true")
    sp = add("hecke", "T~_x T~_y and its xi-coefficients")
    sp.add_argument("--x")
    sp.add_argument("--y")
    sp.add_argument("--z")
    add("afun", "truncated a-values with exactness flags")
    sp = add("cells", "left/right/two-sided blocks; DOT export with --format dot")
    sp.add_argument("--side", choices=("LEFT", "RIGHT", "TWO_SIDED"), default="TWO_SIDED")
    sp.add_argument("--graph", action="store_true", help="with --format dot, emit the mu-graph instead of the block DAG")
    add("lowest", "lowest two-sided cell, witnesses and D' elements")
    sp = add("jtable", "leading coefficients on the lowest cell")
    sp.add_argument("--set", choices=("omega", "gamma"), default="gamma")
    sp = add("check", "run verification suites")
    sp.add_argument("--suite", action="append", help="suite id (repeatable); default all")
    sp.add_argument("--radii", help="comma-separated radii for PROP_3_2_PROBE")
    sp.add_argument("--max-word", type=int, help="word-length cap for the WORD_* suites")
    sp = sub.add_parser("cache", parents=[common], help="inspect or clear the KL cache")
    sp.add_argument("action", choices=("inspect", "clear"))
    sp.add_argument("matrix", nargs="?")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    out = Output(args.format, sys.stdout)
    try:
        if args.command == "cache":
            return cmd_cache(args, out)
        if args.format == "dot" and args.command != "cells":
            raise UsageError("--format dot is only available for cells")
        ws = _workspace(args)
        out.header(_header(args, ws, args.command))
        return COMMANDS[args.command](args, ws, out)
    except (UsageError, MatrixError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoxHeckeError as exc:
        print(f"{exc.kind}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
