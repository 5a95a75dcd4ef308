"""Enumeration of monomial ideals of finite colength (staircases).

An order ideal of N^n is sliced by the exponent of the last variable into
a decreasing chain of order ideals of N^(n-1); enumeration recurses on that
chain, so nothing beyond the current path is materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .groebner import GroebnerBasis, buchberger
from .poly import DEFAULT_ORDER, ModuleVector, Monomial, TermOrder
from .scalars import QQ


@dataclass(frozen=True)
class Staircase:
    """A finite order ideal of N^n: the standard monomials of a monomial ideal."""

    n: int
    cells: tuple[Monomial, ...]

    @classmethod
    def from_cells(cls, n: int, cells) -> "Staircase":
        return cls(n, tuple(sorted(cells)))

    @classmethod
    def from_generators(cls, n: int, gens: Sequence[Monomial]) -> "Staircase":
        """Standard monomials outside the ideal generated by ``gens``."""
        gens = [tuple(g) for g in gens]
        for v in range(n):
            if not any(g[v] and sum(g) == g[v] for g in gens) and not any(not any(g) for g in gens):
                raise ValueError("monomial ideal has infinite colength")
        if any(not any(g) for g in gens):
            return cls(n, ())
        seen = {(0,) * n}
        frontier = [(0,) * n]
        while frontier:
            nxt = []
            for m in frontier:
                for v in range(n):
                    mm = m[:v] + (m[v] + 1,) + m[v + 1:]
                    if mm in seen or any(all(a <= b for a, b in zip(g, mm)) for g in gens):
                        continue
                    seen.add(mm)
                    nxt.append(mm)
            frontier = nxt
        return cls.from_cells(n, seen)

    def __len__(self):
        return len(self.cells)

    @property
    def colength(self) -> int:
        return len(self.cells)

    @cached_property
    def cell_set(self) -> frozenset:
        return frozenset(self.cells)

    def __contains__(self, m) -> bool:
        return tuple(m) in self.cell_set

    def is_order_ideal(self) -> bool:
        s = self.cell_set
        for m in self.cells:
            for v in range(self.n):
                if m[v] and m[:v] + (m[v] - 1,) + m[v + 1:] not in s:
                    return False
        return True

    @cached_property
    def generators(self) -> tuple[Monomial, ...]:
        """Minimal monomial generators of the ideal, in ascending degrevlex order."""
        n = self.n
        if not self.cells:
            return ((0,) * n,)
        s = self.cell_set
        out = set()
        for m in self.cells:
            for v in range(n):
                mm = m[:v] + (m[v] + 1,) + m[v + 1:]
                if mm in s:
                    continue
                if all(not mm[u] or mm[:u] + (mm[u] - 1,) + mm[u + 1:] in s for u in range(n)):
                    out.add(mm)
        return tuple(sorted(out, key=lambda m: DEFAULT_ORDER.key((0, m))))

    def ideal(self, field=QQ) -> list[ModuleVector]:
        return [ModuleVector.monomial_term(0, g, 1, field) for g in self.generators]

    def module_generators(self, comp: int, rank: int, field=QQ) -> list[ModuleVector]:
        return [ModuleVector.monomial_term(comp, g, rank, field) for g in self.generators]


def _partitions_within(n: int, size: int, upper: frozenset | None) -> Iterator[frozenset]:
    """Order ideals of N^n with ``size`` cells, contained in ``upper``."""
    if size == 0:
        yield frozenset()
        return
    if upper is not None and len(upper) < size:
        return
    if n == 1:
        cells = frozenset((i,) for i in range(size))
        if upper is None or cells <= upper:
            yield cells
        return
    yield from _layers(n, size, upper, None, 0)


def _layer_of(upper: frozenset | None, k: int) -> frozenset | None:
    if upper is None:
        return None
    return frozenset(m[:-1] for m in upper if m[-1] == k)


def _layers(n: int, remaining: int, upper: frozenset | None, prev: frozenset | None,
            k: int) -> Iterator[frozenset]:
    bound = _layer_of(upper, k)
    if prev is not None:
        bound = prev if bound is None else bound & prev
    cap = remaining if bound is None else min(remaining, len(bound))
    # largest layers first, giving a canonical order
    for s in range(cap, 0, -1):
        for layer in _partitions_within(n - 1, s, bound):
            here = frozenset(m + (k,) for m in layer)
            if s == remaining:
                yield here
            else:
                for rest in _layers(n, remaining - s, upper, layer, k + 1):
                    yield here | rest


def monomial_ideals(n: int, d: int, strongly_stable: bool = False) -> Iterator[Staircase]:
    """Every colength-``d`` monomial ideal of k[x_1..x_n], once each."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    for cells in _partitions_within(n, d, None):
        st = Staircase.from_cells(n, cells)
        if not strongly_stable or is_strongly_stable(st):
            yield st


def compositions(d: int, r: int) -> Iterator[tuple[int, ...]]:
    """Compositions of d into r non-negative parts, first part descending."""
    if r == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in compositions(d - a, r - 1):
            yield (a,) + rest


def monomial_submodules(n: int, r: int, d: int,
                        strongly_stable: bool = False) -> Iterator[tuple[Staircase, ...]]:
    """Every monomial submodule J_1 e_1 ⊕ ... ⊕ J_r e_r of colength d."""
    if r < 1:
        raise ValueError("need r >= 1")
    for comp in compositions(d, r):
        yield from _product([list(monomial_ideals(n, di, strongly_stable)) for di in comp])


def _product(pools: list[list]) -> Iterator[tuple]:
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _product(pools[1:]):
            yield (head,) + tail


def is_strongly_stable(S: Staircase) -> bool:
    """x_i·m/x_j stays in the ideal for every generator m, x_j | m and i < j
    (variables ordered x_1 > ... > x_n)."""
    cells = S.cell_set
    for g in S.generators:
        for j in range(S.n):
            if not g[j]:
                continue
            for i in range(j):
                mm = list(g)
                mm[j] -= 1
                mm[i] += 1
                if tuple(mm) in cells:
                    return False
    return True


def submodule_generators(stairs: Sequence[Staircase], field=QQ) -> list[ModuleVector]:
    r = len(stairs)
    out = []
    for i, st in enumerate(stairs):
        out.extend(st.module_generators(i, r, field))
    return out


def submodule_basis(stairs: Sequence[Staircase], field=QQ,
                    order: TermOrder = DEFAULT_ORDER) -> GroebnerBasis:
    return buchberger(submodule_generators(stairs, field), order)
