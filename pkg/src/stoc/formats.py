"""JSON file formats. Every writer is canonical, so parse -> write is the identity."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .codes import Code, LinearCode
from .construct import Tiling
from .designs import OrthogonalPartitionFamily, ResolvableDesign
from .errors import InputError
from .graphs import Graph, build_graph
from .interleave import InterleavedGraph


class SchemaError(InputError):
    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"JSON parse error at line {e.lineno} column {e.colno}: {e.msg}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _get(d: Any, key: str, kind, ptr: str, optional: bool = False):
    if not isinstance(d, dict):
        raise SchemaError(ptr, "expected an object")
    if key not in d:
        if optional:
            return None
        raise SchemaError(f"{ptr}/{key}", "missing")
    val = d[key]
    ok = isinstance(val, kind) and not (kind in (int, (int,)) and isinstance(val, bool))
    if not ok:
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(f"{ptr}/{key}", f"expected {name}")
    return val


def _int_matrix(val: Any, ptr: str, depth: int) -> list:
    if depth == 0:
        if not isinstance(val, int) or isinstance(val, bool):
            raise SchemaError(ptr, "expected an integer")
        return val
    if not isinstance(val, list):
        raise SchemaError(ptr, "expected an array")
    return [_int_matrix(v, f"{ptr}/{i}", depth - 1) for i, v in enumerate(val)]


# ------------------------------------------------------------------ graphs

def graph_to_dict(g: Graph) -> dict:
    d: dict = {"directed": g.directed, "n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.labels is not None:
        d["labels"] = [list(lab) for lab in g.labels]
    return d


def graph_from_dict(d: Any, ptr: str = "") -> Graph:
    directed = _get(d, "directed", bool, ptr)
    n = _get(d, "n", int, ptr)
    edges = _int_matrix(_get(d, "edges", list, ptr), f"{ptr}/edges", 2)
    for i, e in enumerate(edges):
        if len(e) != 2:
            raise SchemaError(f"{ptr}/edges/{i}", "edge must have two endpoints")
    labels = d.get("labels")
    if labels is not None:
        labels = _int_matrix(labels, f"{ptr}/labels", 2)
    try:
        return build_graph(n, edges, directed=directed, labels=labels)
    except InputError as e:
        raise SchemaError(f"{ptr}/edges", str(e)) from None


# ------------------------------------------------------------------ designs

def design_to_dict(d: ResolvableDesign) -> dict:
    return {"v": d.v, "k": d.k, "classes": [[list(b) for b in c] for c in d.classes]}


def design_from_dict(d: Any, ptr: str = "") -> ResolvableDesign:
    v, k = _get(d, "v", int, ptr), _get(d, "k", int, ptr)
    classes = _int_matrix(_get(d, "classes", list, ptr), f"{ptr}/classes", 3)
    return ResolvableDesign.make(v, k, classes)


def family_to_dict(f: OrthogonalPartitionFamily) -> dict:
    return {"k": f.k, "s": f.s, "matrices": [[list(r) for r in m] for m in f.matrices]}


def family_from_dict(d: Any, ptr: str = "") -> OrthogonalPartitionFamily:
    k, s = _get(d, "k", int, ptr), _get(d, "s", int, ptr)
    mats = _int_matrix(_get(d, "matrices", list, ptr), f"{ptr}/matrices", 3)
    for i, m in enumerate(mats):
        if len(m) != k or any(len(r) != s for r in m):
            raise SchemaError(f"{ptr}/matrices/{i}", f"expected a {k}x{s} matrix")
    return OrthogonalPartitionFamily.make(k, s, mats)


# ------------------------------------------------------------------ codes

def code_to_dict(c: Code | LinearCode) -> dict:
    if isinstance(c, LinearCode):
        from .gf import nullspace
        parity = nullspace(c.generator, c.q) if c.dim else np.eye(c.n, dtype=np.int64)
        return {"q": c.q, "n": c.n, "parity": parity.tolist()}
    return {"q": c.q, "level": c.level, "n": c.n, "words": c.digit_rows().tolist()}


def code_from_dict(d: Any, ptr: str = "") -> Code | LinearCode:
    q, n = _get(d, "q", int, ptr), _get(d, "n", int, ptr)
    if "parity" in d:
        rows = _int_matrix(_get(d, "parity", list, ptr), f"{ptr}/parity", 2)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise SchemaError(f"{ptr}/parity/{i}", f"expected {n} coefficients")
        return LinearCode.from_parity(q, n, np.array(rows, dtype=np.int64).reshape(-1, n))
    level = _get(d, "level", int, ptr)
    words = _int_matrix(_get(d, "words", list, ptr), f"{ptr}/words", 2)
    for i, w in enumerate(words):
        if len(w) != n * level:
            raise SchemaError(f"{ptr}/words/{i}", f"expected {n * level} digits")
    try:
        return Code.from_digit_rows(q, level, n, np.array(words, dtype=np.int64).reshape(-1, n * level))
    except InputError as e:
        raise SchemaError(f"{ptr}/words", str(e)) from None


# ------------------------------------------------------------------ tilings

def tiling_to_dict(t: Tiling) -> dict:
    return {
        "n": t.n,
        "tiles": [[list(c) for c in tile] for tile in t.tiles],
        "region": [list(c) for c in sorted(t.region)],
    }


def tiling_from_dict(d: Any, ptr: str = "") -> Tiling:
    n = _get(d, "n", int, ptr)
    tiles = _int_matrix(_get(d, "tiles", list, ptr), f"{ptr}/tiles", 3)
    region = _int_matrix(_get(d, "region", list, ptr), f"{ptr}/region", 2)
    tt = tuple(tuple(tuple(c) for c in tile) for tile in tiles)
    size = len(tt[0]) if tt else 0
    return Tiling(n, tt, frozenset(tuple(c) for c in region), "custom", 0, size)


# ------------------------------------------------------------------ interleaving

def sidecar_to_dict(ig: InterleavedGraph) -> dict:
    return {
        "base": graph_to_dict(ig.base),
        "family": family_to_dict(ig.family),
        "coloring": list(ig.coloring.colors),
        "color_to_matrix": list(ig.color_to_matrix),
    }


# ------------------------------------------------------------------ values

def frac(x: Fraction | int | None) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return frac(x)
    if isinstance(x, (frozenset, set)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (Code, LinearCode)):
        return code_to_dict(x)
    return x
