"""Codes over leveled alphabets and the storage-code (recoverability) check.

A symbol at level k is a k-tuple of base-q digits, stored as the integer
whose big-endian base-q expansion is that tuple.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .errors import CapExceeded, EmptySubcode, InputError
from .graphs import Graph

WORD_CAP = 2 ** 24
_TABLE_LIMIT = 2 ** 24


def symbol_to_digits(sym: int, q: int, level: int) -> tuple[int, ...]:
    out = []
    for _ in range(level):
        sym, d = divmod(sym, q)
        out.append(d)
    return tuple(reversed(out))


def digits_to_symbol(digits: Sequence[int], q: int) -> int:
    s = 0
    for d in digits:
        s = s * q + int(d)
    return s


def _sorted_unique_rows(words: np.ndarray) -> np.ndarray:
    if len(words) == 0:
        return words
    return np.unique(words, axis=0)


class Code:
    """Explicit code: a sorted, duplicate-free (W, n) array of symbols."""

    linear = False

    def __init__(self, q: int, level: int, n: int, words):
        if q < 2 or level < 1 or n < 0:
            raise InputError(f"bad code parameters q={q} level={level} n={n}")
        arr = np.asarray(words, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, n)
        if arr.ndim != 2 or arr.shape[1] != n:
            raise InputError(f"words must form a (W, {n}) array, got shape {arr.shape}")
        if len(arr) == 0:
            raise EmptySubcode("a code needs at least one word")
        alph = q ** level
        if arr.min(initial=0) < 0 or arr.max(initial=0) >= alph:
            raise InputError(f"symbols must lie in [0, {alph})")
        self.q, self.level, self.n = q, level, n
        self.words = _sorted_unique_rows(arr)
        self.words.setflags(write=False)

    @classmethod
    def from_strings(cls, strings: Iterable[str], q: int = 2) -> Code:
        rows = [[int(ch) for ch in s] for s in strings]
        return cls(q, 1, len(rows[0]) if rows else 0, rows)

    @classmethod
    def from_digit_rows(cls, q: int, level: int, n: int, rows) -> Code:
        """Rows of n*level digits, each symbol flattened as consecutive digits."""
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, n, level)
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            raise InputError(f"digits must lie in [0, {q})")
        weights = q ** np.arange(level - 1, -1, -1, dtype=np.int64)
        return cls(q, level, n, (arr * weights).sum(axis=2))

    @property
    def alphabet(self) -> int:
        return self.q ** self.level

    @property
    def size(self) -> int:
        return len(self.words)

    def digit_rows(self) -> np.ndarray:
        d = np.empty((self.size, self.n, self.level), dtype=np.int64)
        w = self.words.copy()
        for i in range(self.level - 1, -1, -1):
            d[:, :, i] = w % self.q
            w //= self.q
        return d.reshape(self.size, self.n * self.level)

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in w) for w in self.words]

    def to_code(self, cap: int = WORD_CAP) -> Code:
        return self

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Code, LinearCode)):
            return NotImplemented
        a, b = self.to_code(), other.to_code()
        return (a.q, a.level, a.n) == (b.q, b.level, b.n) and np.array_equal(a.words, b.words)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Code(q={self.q}, level={self.level}, n={self.n}, size={self.size})"


class LinearCode:
    """Row space of a generator over the prime field F_q (level 1).

    Kept implicit so that codes of size 2^48 and the like can still be verified
    through rank conditions; `words` enumerates on demand under a cap.
    """

    linear = True
    level = 1

    def __init__(self, q: int, n: int, generator):
        gf.require_prime(q)
        g = np.asarray(generator, dtype=np.int64).reshape(-1, n) % q
        self.q, self.n = q, n
        self.generator, _ = gf.rref(g, q) if g.size else (g.reshape(0, n), [])
        self.generator.setflags(write=False)

    @classmethod
    def from_parity(cls, q: int, n: int, rows) -> LinearCode:
        h = np.asarray(rows, dtype=np.int64).reshape(-1, n)
        return cls(q, n, gf.nullspace(h, q))

    @property
    def dim(self) -> int:
        return len(self.generator)

    @property
    def alphabet(self) -> int:
        return self.q

    @property
    def size(self) -> int:
        return self.q ** self.dim

    def __len__(self) -> int:
        return self.size

    def to_code(self, cap: int = WORD_CAP) -> Code:
        if self.size > cap:
            raise CapExceeded(f"linear code has {self.q}^{self.dim} words, cap is {cap}")
        return self._explicit

    @cached_property
    def _explicit(self) -> Code:
        d = self.dim
        if d == 0:
            return Code(self.q, 1, self.n, np.zeros((1, self.n), dtype=np.int64))
        coeffs = np.indices((self.q,) * d).reshape(d, -1).T
        return Code(self.q, 1, self.n, (coeffs @ self.generator) % self.q)

    @property
    def words(self) -> np.ndarray:
        return self.to_code().words

    def encode(self, info: Sequence[int]) -> np.ndarray:
        return (np.asarray(info, dtype=np.int64) @ self.generator) % self.q

    def __eq__(self, other) -> bool:
        if isinstance(other, LinearCode):
            return (self.q, self.n) == (other.q, other.n) and np.array_equal(self.generator, other.generator)
        if isinstance(other, Code):
            return other == self
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"LinearCode(q={self.q}, n={self.n}, dim={self.dim})"


AnyCode = Code | LinearCode


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class Witness:
    vertex: int
    x: tuple[int, ...]
    y: tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.ok


def _scope(g: Graph, scope) -> list[int]:
    if scope is None or scope == "all":
        return list(range(g.n))
    vs = sorted(set(int(v) for v in scope))
    if vs and not (0 <= vs[0] and vs[-1] < g.n):
        raise InputError("scope contains vertices outside the graph")
    return vs


def _dense_keys(cols: np.ndarray, alph: int) -> tuple[np.ndarray, int]:
    """Map each row of `cols` to a dense id in [0, K)."""
    w, m = cols.shape
    if m == 0:
        return np.zeros(w, dtype=np.int64), 1
    if m * math.log2(alph) < 62:
        key = np.zeros(w, dtype=np.int64)
        for j in range(m):
            key = key * alph + cols[:, j]
        span = alph ** m
        if span <= _TABLE_LIMIT:
            return key, span
        uniq, inv = np.unique(key, return_inverse=True)
        return inv.reshape(-1), len(uniq)
    uniq, inv = np.unique(cols, axis=0, return_inverse=True)
    return inv.reshape(-1), len(uniq)


def _verify_explicit(code: Code, g: Graph, vertices: list[int]) -> Verdict:
    words = code.words
    for v in vertices:
        vals = words[:, v]
        key, k = _dense_keys(words[:, list(g.out[v])], code.alphabet)
        lo = np.full(k, code.alphabet, dtype=np.int64)
        hi = np.full(k, -1, dtype=np.int64)
        np.minimum.at(lo, key, vals)
        np.maximum.at(hi, key, vals)
        bad = (lo != hi)[key]
        if bad.any():
            i = int(np.argmax(bad))
            same = (key == key[i]) & (vals != vals[i])
            j = int(np.argmax(same))
            return Verdict(False, Witness(v, tuple(map(int, words[i])), tuple(map(int, words[j]))))
    return Verdict(True)


def _verify_linear(code: LinearCode, g: Graph, vertices: list[int]) -> Verdict:
    """x_v is a function of x_N iff no codeword vanishes on N but not at v.

    The lexicographically first violating pair is then (0, c) where c is the
    last row of the reduced basis of {c : c_N = 0} that is nonzero at v.
    """
    q, gen = code.q, code.generator
    for v in vertices:
        nb = list(g.out[v])
        sub = gen[:, nb]
        if gf.rank(sub, q) == gf.rank(gen[:, nb + [v]], q):
            continue
        left = gf.nullspace(sub.T, q) if nb else np.eye(code.dim, dtype=np.int64)
        basis, _ = gf.rref((left @ gen) % q, q)
        rows = [r for r in basis if r[v] % q]
        y = tuple(int(x) for x in rows[-1])
        return Verdict(False, Witness(v, (0,) * code.n, y))
    return Verdict(True)


def verify_storage_code(code: AnyCode, g: Graph, scope=None, method: str = "auto") -> Verdict:
    """Pass iff every vertex in scope is determined by its out-neighbours."""
    if code.n != g.n:
        raise InputError(f"code length {code.n} differs from vertex count {g.n}")
    vertices = _scope(g, scope)
    if isinstance(code, LinearCode) and method in ("auto", "rank"):
        return _verify_linear(code, g, vertices)
    if method == "rank":
        raise InputError("rank verification needs a linear code")
    return _verify_explicit(code.to_code(), g, vertices)


# ---------------------------------------------------------------- rate

@dataclass(frozen=True)
class RateValue:
    exact: Fraction | None
    approx: float
    base: int

    def __float__(self) -> float:
        return self.approx


def _integer_root_base(q: int) -> tuple[int, int]:
    """Smallest b with q = b^e; returns (b, e)."""
    for e in range(q.bit_length(), 0, -1):
        b = round(q ** (1 / e))
        for cand in (b - 1, b, b + 1):
            if cand >= 2 and cand ** e == q:
                return cand, e
    return q, 1


def _exact_log(value: int, b: int) -> int | None:
    e = 0
    while value % b == 0 and value > 1:
        value //= b
        e += 1
    return e if value == 1 else None


def rate(code: AnyCode) -> RateValue:
    base = code.alphabet
    if isinstance(code, LinearCode):
        fr = Fraction(code.dim, code.n)
        return RateValue(fr, float(fr), base)
    size = code.size
    b, e = _integer_root_base(code.q)
    a = _exact_log(size, b) if size > 1 else 0
    if a is not None:
        fr = Fraction(a, e * code.n * code.level)
        return RateValue(fr, float(fr), base)
    return RateValue(None, math.log(size) / (code.n * math.log(base)), base)


def rate_fraction(code: AnyCode) -> Fraction:
    r = rate(code)
    if r.exact is None:
        raise InputError("rate is not an exact rational")
    return r.exact


# ---------------------------------------------------------------- constructors

def code_from_parity(q: int, n: int, rows, cap: int = WORD_CAP) -> Code:
    gf.require_prime(q)
    if q ** n > cap:
        raise CapExceeded(f"{q}^{n} candidate words exceed cap {cap}")
    return LinearCode.from_parity(q, n, rows).to_code(cap)


def puncture_fix(code: AnyCode, positions: Sequence[int], values: Sequence[int], cap: int = WORD_CAP) -> Code:
    positions = [int(p) for p in positions]
    if len(positions) != len(values):
        raise InputError("one value per fixed position required")
    if any(not 0 <= p < code.n for p in positions):
        raise InputError("position outside the code")
    c = code.to_code(cap)
    mask = np.ones(c.size, dtype=bool)
    for p, val in zip(positions, values):
        mask &= c.words[:, p] == int(val)
    if not mask.any():
        raise EmptySubcode(f"no codeword matches {dict(zip(positions, values))}")
    return Code(c.q, c.level, c.n, c.words[mask])
