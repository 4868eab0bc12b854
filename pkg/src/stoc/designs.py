"""Resolvable 2-(v,k,1) designs and the orthogonal partition families they induce."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .gf import require_prime

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ResolvableDesign:
    v: int
    k: int
    classes: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def make(cls, v: int, k: int, classes: Sequence[Sequence[Sequence[int]]]) -> ResolvableDesign:
        return cls(v, k, tuple(tuple(tuple(int(p) for p in b) for b in c) for c in classes))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_design(d: ResolvableDesign) -> Verdict:
    v, k = d.v, d.k
    if k < 2 or v < k:
        return Verdict(False, "shape", (v, k))
    if (v - 1) % (k - 1) or v % k:
        return Verdict(False, "divisibility", (v, k))
    points = set(range(1, v + 1))
    for ci, cls_ in enumerate(d.classes):
        for bi, block in enumerate(cls_):
            if len(set(block)) != k or len(block) != k:
                return Verdict(False, "block size", (ci, bi))
        seen = [p for b in cls_ for p in b]
        if sorted(seen) != sorted(points):
            return Verdict(False, "class is not a partition", (ci,))
    if len(d.classes) != (v - 1) // (k - 1):
        return Verdict(False, "class count", (len(d.classes),))
    cover: dict[tuple[int, int], int] = {}
    for cls_ in d.classes:
        for block in cls_:
            for pair in itertools.combinations(sorted(block), 2):
                cover[pair] = cover.get(pair, 0) + 1
    for pair in itertools.combinations(range(1, v + 1), 2):
        times = cover.get(pair, 0)
        if times != 1:
            return Verdict(False, f"pair covered {times} times", pair)
    return Verdict(True)


def affine_design(q: int) -> ResolvableDesign:
    """Lines of AG(2,q). Point (x,y) is numbered x*q + y + 1.

    Classes: slopes 0..q-1 (lines y = m x + b), then the vertical lines.
    """
    require_prime(q)
    pid = lambda x, y: x * q + y + 1  # noqa: E731
    classes = []
    for m in range(q):
        classes.append([sorted(pid(x, (m * x + b) % q) for x in range(q)) for b in range(q)])
    classes.append([[pid(c, y) for y in range(q)] for c in range(q)])
    return ResolvableDesign.make(q * q, q, classes)


# ------------------------------------------------------------------ families

@dataclass(frozen=True)
class OrthogonalPartitionFamily:
    k: int
    s: int
    matrices: tuple[Matrix, ...]

    @classmethod
    def make(cls, k: int, s: int, matrices: Sequence[Sequence[Sequence[int]]]) -> OrthogonalPartitionFamily:
        return cls(k, s, tuple(tuple(tuple(int(x) for x in row) for row in m) for m in matrices))

    def column(self, m: int, j: int) -> tuple[int, ...]:
        """Column j (0-based) of matrix m (0-based)."""
        return tuple(row[j] for row in self.matrices[m])

    def columns(self, m: int) -> list[tuple[int, ...]]:
        return [self.column(m, j) for j in range(self.s)]

    def __len__(self) -> int:
        return len(self.matrices)


def verify_family(f: OrthogonalPartitionFamily) -> Verdict:
    """Witness indices are 0-based (matrix A, matrix B, column of A, column of B)."""
    k, s = f.k, f.s
    if not 1 <= k <= s:
        return Verdict(False, "shape requires 1 <= k <= s", (k, s))
    full = list(range(1, k * s + 1))
    for a, m in enumerate(f.matrices):
        if len(m) != k or any(len(row) != s for row in m):
            return Verdict(False, "matrix shape", (a,))
        if sorted(x for row in m for x in row) != full:
            return Verdict(False, "condition 1: not a partition of 1..ks", (a,))
    cols = [[set(c) for c in f.columns(a)] for a in range(len(f.matrices))]
    for a, b in itertools.permutations(range(len(f.matrices)), 2):
        for ca, col_a in enumerate(cols[a]):
            hits = 0
            for cb, col_b in enumerate(cols[b]):
                common = len(col_a & col_b)
                if common > 1:
                    return Verdict(False, "condition 2: columns share more than one element", (a, b, ca, cb))
                hits += common
            if hits != k:
                return Verdict(False, "condition 2: column meets wrong number of columns", (a, b, ca))
    return Verdict(True)


def canonical_family(f: OrthogonalPartitionFamily) -> OrthogonalPartitionFamily:
    """Sort entries inside each column, then columns by first entry."""
    mats = []
    for a in range(len(f.matrices)):
        cols = sorted(tuple(sorted(c)) for c in f.columns(a))
        mats.append([[c[i] for c in cols] for i in range(f.k)])
    return OrthogonalPartitionFamily.make(f.k, f.s, mats)


def family_from_design(d: ResolvableDesign) -> OrthogonalPartitionFamily:
    verdict = verify_design(d)
    if not verdict:
        raise InputError(f"invalid design: {verdict.reason} {verdict.witness}")
    s = d.v // d.k
    mats = []
    for cls_ in d.classes:
        cols = sorted(tuple(sorted(b)) for b in cls_)
        mats.append([[c[i] for c in cols] for i in range(d.k)])
    return OrthogonalPartitionFamily.make(d.k, s, mats)


def design_from_family(f: OrthogonalPartitionFamily) -> ResolvableDesign:
    classes = [f.columns(a) for a in range(len(f.matrices))]
    return ResolvableDesign.make(f.k * f.s, f.k, classes)


_KIRKMAN_15 = (
    ((1, 4, 5, 6, 7), (2, 10, 8, 9, 11), (3, 14, 13, 15, 12)),
    ((1, 2, 3, 4, 6), (8, 5, 13, 11, 10), (9, 7, 14, 15, 12)),
    ((1, 2, 3, 4, 7), (10, 13, 5, 8, 9), (11, 15, 6, 12, 14)),
    ((1, 2, 3, 6, 7), (4, 12, 9, 11, 8), (5, 14, 10, 13, 15)),
    ((1, 2, 3, 4, 5), (6, 8, 12, 9, 11), (7, 10, 15, 13, 14)),
    ((1, 2, 3, 5, 6), (12, 9, 4, 10, 8), (13, 11, 7, 15, 14)),
    ((1, 2, 3, 5, 7), (14, 4, 8, 9, 10), (15, 6, 11, 12, 13)),
)


def builtin_family_3x5() -> OrthogonalPartitionFamily:
    """Seven 3x5 matrices on {1..15}, from a Kirkman triple system."""
    return OrthogonalPartitionFamily(3, 5, _KIRKMAN_15)


def kirkman_design_15() -> ResolvableDesign:
    return design_from_family(builtin_family_3x5())


EXAMPLE_TRIANGLE_FAMILY = OrthogonalPartitionFamily(
    2, 3,
    (
        ((1, 3, 5), (2, 4, 6)),
        ((1, 2, 6), (5, 3, 4)),
        ((1, 5, 6), (4, 2, 3)),
    ),
)
