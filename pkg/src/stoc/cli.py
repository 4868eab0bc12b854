"""`stoc` command-line front end."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import bounds as bd
from . import formats as fm
from . import search
from .codes import WORD_CAP, rate, verify_storage_code
from .construct import (clique_partition_code, edge_to_vertex_code, gcd_scheme_code, lattice_tiling,
                        matching_code, row_parity_code, tiling_code)
from .designs import (EXAMPLE_TRIANGLE_FAMILY, affine_design, builtin_family_3x5, family_from_design,
                      kirkman_design_15, verify_design, verify_family)
from .errors import InconsistentBounds, InputError, StocError
from .experiments import PRESETS, run_experiment
from .graphs import complete_graph, cycle_graph, path_graph, recovery_set, torus_rowcol_graph, window_graph
from .interleave import build_interleaved_graph, greedy_coloring, interleaved_code
from .lp import GADGET_BUDGET, build_lp, enumerate_gadgets, lp_capacity_bound

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

# name -> (default, hard ceiling); --cap-override may raise a cap up to its ceiling only
CAPS = {
    "mis": (search.MIS_CAP, 96),
    "mais": (search.MAIS_CAP, 40),
    "cover": (search.COVER_CAP, 40),
    "oracle": (bd.ORACLE_CAP, 2 ** 20),
    "words": (WORD_CAP, 2 ** 26),
    "gadgets": (GADGET_BUDGET, 2_000_000),
}


class Context:
    def __init__(self, args: argparse.Namespace):
        self.fmt = args.format
        self.seed = args.seed
        self.out = args.out
        self.timings = args.timings
        self.caps = {k: v[0] for k, v in CAPS.items()}
        for item in args.cap_override or []:
            name, _, val = item.partition("=")
            if name not in CAPS or not val.isdigit():
                raise InputError(f"--cap-override expects NAME=INT with NAME in {sorted(CAPS)}")
            ceiling = CAPS[name][1]
            if int(val) > ceiling:
                raise InputError(f"cap {name}={val} exceeds the hard ceiling {ceiling}")
            self.caps[name] = int(val)
            print(f"warning: cap {name} overridden to {val}", file=sys.stderr)

    def emit(self, obj: Any, rows: list[dict] | None = None, columns: list[str] | None = None) -> None:
        if self.fmt == "json":
            text = fm.dumps(fm.jsonable(obj))
        elif self.fmt == "csv":
            rows, columns = rows or _flat_rows(obj), columns or ["key", "value"]
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({c: _cell(r.get(c)) for c in columns})
            text = buf.getvalue()
        else:
            text = _table(rows or _flat_rows(obj), columns or ["key", "value"])
        if self.out:
            Path(self.out).write_text(text)
        else:
            sys.stdout.write(text)


def _cell(v: Any) -> str:
    if v is None:
        return ""
    v = fm.jsonable(v)
    return v if isinstance(v, str) else fm.dumps(v).strip()


def _flat_rows(obj: Any, prefix: str = "") -> list[dict]:
    obj = fm.jsonable(obj)
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flat_rows(v, f"{prefix}{k}.") if isinstance(v, dict) else [{"key": prefix + k, "value": v}]
        return out
    return [{"key": prefix.rstrip(".") or "value", "value": obj}]


def _table(rows: list[dict], columns: list[str]) -> str:
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()  # noqa: E731
    return "\n".join([line(columns), line(["-" * w for w in widths])] + [line(r) for r in cells]) + "\n"


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return fm.loads(text)


def _params(text: str) -> list:
    """'interval:2,2' -> ['interval', 2, 2]; 'ball:l1:1' -> ['ball', 'l1', 1]."""
    out: list = []
    for piece in text.replace(",", ":").split(":"):
        out.append(int(piece) if piece.lstrip("-").isdigit() else piece)
    return out


def _recovery(text: str, dim: int | None = None):
    kind, *params = _params(text)
    if kind in ("interval", "pair"):
        return recovery_set(kind, *params)
    return recovery_set(kind, *params, dim=dim or 2)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


# ------------------------------------------------------------------ graph

def cmd_graph_gen(ctx: Context, a) -> int:
    kind = a.kind
    if kind == "complete":
        g = complete_graph(a.n)
    elif kind == "cycle":
        g = cycle_graph(a.n)
    elif kind == "path":
        g = path_graph(a.n)
    elif kind == "torus":
        g = torus_rowcol_graph(a.n)
    else:
        if not a.recovery:
            raise InputError("window graphs need --recovery")
        g = window_graph(_recovery(a.recovery), a.n).graph
    ctx.emit(fm.graph_to_dict(g))
    return EXIT_OK


def cmd_graph_validate(ctx: Context, a) -> int:
    g = fm.graph_from_dict(_read_json(a.file))
    ctx.emit({"valid": True, "n": g.n, "directed": g.directed, "arcs": len(g.arcs()),
              "symmetric": g.is_symmetric()})
    return EXIT_OK


# ------------------------------------------------------------------ design

def cmd_design_gen(ctx: Context, a) -> int:
    if a.kind == "affine":
        if a.q is None:
            raise InputError("affine designs need --q")
        d = affine_design(a.q)
        obj = fm.family_to_dict(family_from_design(d)) if a.family else fm.design_to_dict(d)
    elif a.kind == "kirkman":
        d = kirkman_design_15()
        obj = fm.family_to_dict(family_from_design(d)) if a.family else fm.design_to_dict(d)
    elif a.kind == "builtin-3x5":
        obj = fm.family_to_dict(builtin_family_3x5())
    else:
        obj = fm.family_to_dict(EXAMPLE_TRIANGLE_FAMILY)
    ctx.emit(obj)
    return EXIT_OK


def cmd_design_verify(ctx: Context, a) -> int:
    data = _read_json(a.file)
    if isinstance(data, dict) and "matrices" in data:
        kind, v = "family", verify_family(fm.family_from_dict(data))
    else:
        kind, v = "design", verify_design(fm.design_from_dict(data))
    ctx.emit({"kind": kind, "ok": v.ok, "reason": v.reason, "witness": v.witness})
    if not v.ok:
        print(f"{kind} fails {v.reason} at {v.witness}", file=sys.stderr)
    return EXIT_OK if v.ok else EXIT_MISMATCH


# ------------------------------------------------------------------ code

def cmd_code_build(ctx: Context, a) -> int:
    c = a.construction
    q = a.q
    cap = ctx.caps["words"]
    if c == "row-parity":
        code = row_parity_code(a.n, q)
    elif c == "gcd":
        l, r = _ints(a.params)
        code = gcd_scheme_code(l, r, a.n, q).code
    elif c == "tiling":
        metric, *rad = _params(a.params)
        r = tuple(rad) if metric == "rect" else rad[0]
        t = lattice_tiling(metric, r, a.n)
        rs = recovery_set("rect", r[0] + 1, r[0], r[1], r[1] + 1) if metric == "rect" else recovery_set("ball", metric, r)
        code, _ = tiling_code(t, window_graph(rs, a.n).graph, q)
    else:
        if not a.graph:
            raise InputError(f"construction {c} needs --graph")
        g = fm.graph_from_dict(_read_json(a.graph))
        if c == "clique-cover":
            _, parts = search.clique_cover_number(g, ctx.caps["cover"])
            code = clique_partition_code(g, parts, q)
        elif c == "matching":
            _, pairs = search.max_matching(g)
            code = matching_code(g, pairs, q, cap)
        else:
            code = edge_to_vertex_code(g, q, cap)
    ctx.emit(fm.code_to_dict(code))
    return EXIT_OK


def _scope(a, g):
    if a.scope == "all":
        return None
    if a.scope == "interior":
        if not a.recovery:
            raise InputError("interior scope needs --recovery and --n to rebuild the window")
        return window_graph(_recovery(a.recovery), g.n if a.n is None else a.n).interior
    return set(_ints(a.scope))


def cmd_code_verify(ctx: Context, a) -> int:
    g = fm.graph_from_dict(_read_json(a.graph))
    code = fm.code_from_dict(_read_json(a.code))
    v = verify_storage_code(code, g, _scope(a, g))
    w = v.witness
    ctx.emit({"ok": v.ok, "witness": None if w is None else {"vertex": w.vertex, "x": w.x, "y": w.y}})
    return EXIT_OK if v.ok else EXIT_MISMATCH


def cmd_code_rate(ctx: Context, a) -> int:
    code = fm.code_from_dict(_read_json(a.code))
    r = rate(code)
    size = code.size
    ctx.emit({"size": size, "alphabet": code.q ** code.level, "n": code.n,
              "rate": r.exact if r.exact is not None else None, "rate_approx": r.approx})
    return EXIT_OK


# ------------------------------------------------------------------ interleave

def _interleaved(a):
    g = fm.graph_from_dict(_read_json(a.graph))
    fam = fm.family_from_dict(_read_json(a.family))
    col = greedy_coloring(g, a.coloring, a.modulus)
    return build_interleaved_graph(g, col, fam)


def cmd_interleave_build(ctx: Context, a) -> int:
    ig = _interleaved(a)
    ctx.emit({"graph": fm.graph_to_dict(ig.graph), "sidecar": fm.sidecar_to_dict(ig)})
    return EXIT_OK


def cmd_interleave_run(ctx: Context, a) -> int:
    ig = _interleaved(a)
    seed = fm.code_from_dict(_read_json(a.code))
    cbar = interleaved_code(seed, ig, a.mode, ctx.seed, a.count, ctx.caps["words"])
    ctx.emit(fm.code_to_dict(cbar))
    return EXIT_OK


# ------------------------------------------------------------------ bounds

def cmd_bounds(ctx: Context, a) -> int:
    k = a.kind
    if k in ("independence", "mais", "clique-cover", "matching"):
        if not a.graph:
            raise InputError(f"bound {k} needs --graph")
        g = fm.graph_from_dict(_read_json(a.graph))
        cert = {
            "independence": lambda: bd.independence_certificate(g, ctx.caps["mis"]),
            "mais": lambda: bd.mais_certificate(g, ctx.caps["mais"]),
            "clique-cover": lambda: bd.clique_cover_certificate(g, ctx.caps["cover"]),
            "matching": lambda: bd.matching_certificate(g),
        }[k]()
        ctx.emit({"kind": cert.kind, "value": cert.value, "capacity": cert.capacity,
                  "direction": cert.direction, "witness": cert.witness, "revalidated": cert.validate(g)})
    elif k == "anticode":
        size = bd.anticode_max(a.metric, a.diameter)
        obj = {"metric": a.metric, "diameter": a.diameter, "size": size.size,
               "capacity_bound": 1 - Fraction(1, size.size)}
        if a.brute:
            obj["brute_force"] = bd.brute_anticode(a.metric, a.diameter)
        ctx.emit(obj)
    elif k == "diff-avoiding":
        rows = bd.diff_avoiding_bound(_recovery(a.recovery), _ints(a.n_list))
        ctx.emit({"rows": rows}, rows, ["n", "a_left", "a_right", "bound"])
    elif k == "axial-dag":
        s = bd.axial_dag_set(a.t, a.n)
        ctx.emit({"t": s.t, "n": s.n, "size": s.size, "density": s.density, "acyclic": s.acyclic})
    else:
        ser = bd.window_series(_recovery(a.recovery), _ints(a.n_list), a.bound)
        rows = [{"n": n, "c_n": c, "slack": sl} for n, c, sl in ser.points]
        ctx.emit({"points": rows, "limsup_estimate": ser.limsup_estimate, "estimate": True},
                 rows, ["n", "c_n", "slack"])
    return EXIT_OK


# ------------------------------------------------------------------ lp and oracle

def cmd_lp_bound(ctx: Context, a) -> int:
    g = fm.graph_from_dict(_read_json(a.graph))
    b = lp_capacity_bound(g, a.tau, a.max_support, a.closure, ctx.caps["gadgets"])
    if a.dump:
        gadgets = enumerate_gadgets(g, a.max_support, a.tau, a.closure, ctx.caps["gadgets"])
        Path(a.dump).write_text(build_lp(g, gadgets, a.tau).dump())
    ctx.emit({"relaxed": b.relaxed, "grid_rounded": b.grid_rounded, "tau_grid_rounded": b.tau_grid_rounded,
              "flags": b.flags, "pivots": b.solution.pivots, "presolve": list(b.solution.presolve)})
    return EXIT_OK


def cmd_oracle(ctx: Context, a) -> int:
    g = fm.graph_from_dict(_read_json(a.graph))
    size, code = bd.oracle_max_code(g, a.q, ctx.caps["oracle"])
    r = rate(code)
    ctx.emit({"q": a.q, "n": g.n, "size": size, "rate": r.exact, "rate_approx": r.approx,
              "code": fm.code_to_dict(code)})
    return EXIT_OK


# ------------------------------------------------------------------ experiments

COLUMNS = ["preset", "item", "expected", "got", "provenance", "verdict"]


def cmd_experiment_list(ctx: Context, a) -> int:
    rows = [{"preset": p.name, "summary": p.summary} for p in PRESETS.values()]
    ctx.emit({"presets": rows}, rows, ["preset", "summary"])
    return EXIT_OK


def cmd_experiment_run(ctx: Context, a) -> int:
    names = list(PRESETS) if a.all else a.names
    if not names:
        raise InputError("name at least one preset or pass --all")
    reports = [run_experiment(n) for n in names]
    rows = [dict(c.row(), preset=r.preset) for r in reports for c in r.checks]
    if ctx.fmt == "table":
        rows += [{"preset": r.preset, "item": "runtime", "got": f"{r.runtime:.3f}s", "verdict": ""} for r in reports]
    body = [r.to_dict(ctx.timings) for r in reports]
    obj = body[0] if len(body) == 1 else {"schema": "stoc-report/1", "reports": body}
    ctx.emit(obj, rows, COLUMNS)
    failed = [r.preset for r in reports if not r.passed]
    for name in failed:
        print(f"preset {name}: expectation mismatch", file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    def globals_(parser: argparse.ArgumentParser, top: bool) -> None:
        # subcommands accept the global flags too; SUPPRESS keeps the top-level defaults
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--format", choices=["json", "csv", "table"], default=d("json"))
        parser.add_argument("--seed", type=int, default=d(0), help="seed for sampling modes (default 0)")
        parser.add_argument("--cap-override", action="append", metavar="NAME=INT", default=d(None),
                            help=f"raise a search cap up to its hard ceiling; names: {', '.join(CAPS)}")
        parser.add_argument("--out", default=d(None), help="write output to this path instead of stdout")
        parser.add_argument("--timings", action="store_true", default=d(False),
                            help="include runtimes in JSON reports")

    common = argparse.ArgumentParser(add_help=False)
    globals_(common, top=False)
    p = argparse.ArgumentParser(prog="stoc", description="Graph storage codes: constructions, bounds, experiments.")
    globals_(p, top=True)
    sub = p.add_subparsers(dest="cmd", required=True)

    gr = sub.add_parser("graph", parents=[common]).add_subparsers(dest="sub", required=True)
    s = gr.add_parser("gen", parents=[common])
    s.add_argument("kind", choices=["complete", "cycle", "path", "torus", "window"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--recovery", help="e.g. interval:2,2  pair:6,4  ball:l1:2  rect:2,1,1,2  axial:1,1,1,1")
    s.set_defaults(fn=cmd_graph_gen)
    s = gr.add_parser("validate", parents=[common])
    s.add_argument("file")
    s.set_defaults(fn=cmd_graph_validate)

    de = sub.add_parser("design", parents=[common]).add_subparsers(dest="sub", required=True)
    s = de.add_parser("gen", parents=[common])
    s.add_argument("kind", choices=["affine", "kirkman", "builtin-3x5", "example-triangle"])
    s.add_argument("--q", type=int)
    s.add_argument("--family", action="store_true", help="emit the orthogonal partition family")
    s.set_defaults(fn=cmd_design_gen)
    s = de.add_parser("verify", parents=[common])
    s.add_argument("file", help="design or family JSON")
    s.set_defaults(fn=cmd_design_verify)

    co = sub.add_parser("code", parents=[common]).add_subparsers(dest="sub", required=True)
    s = co.add_parser("build", parents=[common])
    s.add_argument("construction",
                   choices=["clique-cover", "matching", "edge-to-vertex", "row-parity", "gcd", "tiling"])
    s.add_argument("--graph")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--n", type=int)
    s.add_argument("--params", default="", help="gcd: L,R   tiling: linf:1 | l1:2 | rect:1,1")
    s.set_defaults(fn=cmd_code_build)
    s = co.add_parser("verify", parents=[common])
    s.add_argument("--graph", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--scope", default="all", help="all | interior | comma-separated vertex ids")
    s.add_argument("--recovery")
    s.add_argument("--n", type=int)
    s.set_defaults(fn=cmd_code_verify)
    s = co.add_parser("rate", parents=[common])
    s.add_argument("code")
    s.set_defaults(fn=cmd_code_rate)

    il = sub.add_parser("interleave", parents=[common]).add_subparsers(dest="sub", required=True)
    for name, fn in (("build", cmd_interleave_build), ("run", cmd_interleave_run)):
        s = il.add_parser(name, parents=[common])
        s.add_argument("--graph", required=True)
        s.add_argument("--family", required=True)
        s.add_argument("--coloring", choices=["dsatur", "mod"], default="dsatur")
        s.add_argument("--modulus", type=int)
        if name == "run":
            s.add_argument("--code", required=True)
            s.add_argument("--mode", choices=["full", "sample"], default="full")
            s.add_argument("--count", type=int, default=0)
        s.set_defaults(fn=fn)

    s = sub.add_parser("bounds", parents=[common])
    s.add_argument("kind", choices=["independence", "mais", "clique-cover", "matching", "anticode",
                                    "diff-avoiding", "axial-dag", "window"])
    s.add_argument("--graph")
    s.add_argument("--metric", choices=["l1", "linf"], default="l1")
    s.add_argument("--diameter", type=int, default=1)
    s.add_argument("--brute", action="store_true")
    s.add_argument("--recovery")
    s.add_argument("--n-list", default="")
    s.add_argument("--bound", choices=["mais", "independence"], default="mais")
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--n", type=int, default=4)
    s.set_defaults(fn=cmd_bounds)

    lp = sub.add_parser("lp", parents=[common]).add_subparsers(dest="sub", required=True)
    s = lp.add_parser("bound", parents=[common])
    s.add_argument("--graph", required=True)
    s.add_argument("--tau", type=int, default=2)
    s.add_argument("--max-support", type=int, default=2)
    s.add_argument("--closure", choices=["formula", "union"], default="formula")
    s.add_argument("--dump", help="write the LP in plain text to this path")
    s.set_defaults(fn=cmd_lp_bound)

    s = sub.add_parser("oracle", parents=[common])
    s.add_argument("--graph", required=True)
    s.add_argument("--q", type=int, default=2)
    s.set_defaults(fn=cmd_oracle)

    ex = sub.add_parser("experiment", parents=[common]).add_subparsers(dest="sub", required=True)
    s = ex.add_parser("list", parents=[common])
    s.set_defaults(fn=cmd_experiment_list)
    s = ex.add_parser("run", parents=[common])
    s.add_argument("names", nargs="*")
    s.add_argument("--all", action="store_true")
    s.set_defaults(fn=cmd_experiment_run)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args)
        return args.fn(ctx, args)
    except InconsistentBounds as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except StocError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
