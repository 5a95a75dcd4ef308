"""Exact sparse linear algebra.

Rows are dicts ``column -> value``.  Over Q the echelon form is kept with
integer rows: each incoming row is cleared of denominators, eliminated by
cross-multiplication and divided by the gcd of its entries, so no fractions
ever appear.  Over F_p plain modular elimination is used.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .scalars import FpElement, PrimeField, QQ


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _integral(row: Mapping[int, object]) -> dict[int, int]:
    den = 1
    for v in row.values():
        d = v.denominator
        if d != 1:
            den = lcm(den, d)
    out = {}
    for c, v in row.items():
        if v:
            iv = v.numerator * (den // v.denominator)
            out[c] = iv
    return _primitive(out)


class Echelon:
    """Incrementally maintained row echelon form; only the rank is exposed,
    plus membership of a vector in the row span."""

    def __init__(self, field=QQ):
        self.field = field
        self.p = field.characteristic if isinstance(field, PrimeField) else 0
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _convert(self, row: Mapping[int, object]) -> dict[int, int]:
        if self.p:
            p = self.p
            out = {}
            for c, v in row.items():
                if isinstance(v, FpElement):
                    iv = v.v
                elif isinstance(v, Fraction):
                    iv = v.numerator * pow(v.denominator, -1, p) % p
                else:
                    iv = int(v) % p
                if iv:
                    out[c] = iv
            return out
        return _integral({c: Fraction(v) if isinstance(v, int) else v
                          for c, v in row.items() if v})

    def _eliminate(self, row: dict[int, int]) -> dict[int, int]:
        pivots = self.pivots
        p = self.p
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                return row
            a = row[col]
            if p:
                # pivot rows are normalized to leading 1
                for c, v in prow.items():
                    w = (row.get(c, 0) - a * v) % p
                    if w:
                        row[c] = w
                    else:
                        row.pop(c, None)
            else:
                b = prow[col]
                g = gcd(a, b)
                fa, fb = b // g, a // g
                new = {c: v * fa for c, v in row.items()}
                for c, v in prow.items():
                    w = new.get(c, 0) - fb * v
                    if w:
                        new[c] = w
                    else:
                        new.pop(c, None)
                row = _primitive(new)
        return row

    def insert(self, row: Mapping[int, object]) -> bool:
        """Add a row; return True iff it increased the rank."""
        r = self._eliminate(self._convert(row))
        if not r:
            return False
        col = min(r)
        if self.p:
            inv = pow(r[col], -1, self.p)
            r = {c: v * inv % self.p for c, v in r.items()}
        elif r[col] < 0:
            r = {c: -v for c, v in r.items()}
        self.pivots[col] = r
        return True

    def in_span(self, row: Mapping[int, object]) -> bool:
        return not self._eliminate(self._convert(row))


def rank(rows: Iterable[Mapping[int, object]], field=QQ) -> int:
    e = Echelon(field)
    for r in rows:
        e.insert(r)
    return e.rank


def dense_rows(matrix: Sequence[Sequence]) -> list[dict[int, object]]:
    return [{j: v for j, v in enumerate(row) if v} for row in matrix]


def matrix_rank(matrix: Sequence[Sequence], field=QQ) -> int:
    return rank(dense_rows(matrix), field)


def identity(d: int, field=QQ) -> list[list]:
    return [[field.one if i == j else field.zero for j in range(d)] for i in range(d)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence], field=QQ) -> list[list]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                for j in range(m):
                    w = bt[j]
                    if w:
                        oi[j] = oi[j] + v * w
    return out


def mat_pow(a: Sequence[Sequence], k: int, field=QQ) -> list[list]:
    result = identity(len(a), field)
    base = [list(r) for r in a]
    while k:
        if k & 1:
            result = mat_mul(result, base, field)
        k >>= 1
        if k:
            base = mat_mul(base, base, field)
    return result


def shift_diagonal(a: Sequence[Sequence], c) -> list[list]:
    """a − c·I."""
    out = [list(r) for r in a]
    for i in range(len(out)):
        out[i][i] = out[i][i] - c
    return out
