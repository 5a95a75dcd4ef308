"""Gröbner bases of submodules of R^r.

The engine is Buchberger's algorithm with the normal selection strategy and
the Gebauer–Möller criteria.  S-pairs are formed only between elements whose
lead terms lie in the same component.  Optionally the algorithm tracks, for
every basis element, its expression in terms of the input generators; this
is what lifts Schreyer syzygies back to arbitrary generating sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from operator import add, sub
from typing import Callable, Iterable, Sequence

from .poly import (DEFAULT_ORDER, ModuleVector, Monomial, Term, TermOrder,
                   monomial_divides, monomial_lcm, one)

INFINITE = float("inf")


class InfiniteColength(ValueError):
    """The quotient is not finite dimensional."""


# ---------------------------------------------------------------------------
# low-level reduction on term dicts


def _sub_mul(target: dict, src: dict, c, m: Monomial) -> None:
    """target -= c * m * src (in place)."""
    for (i, sm), sc in src.items():
        t = (i, tuple(map(add, sm, m)))
        v = target.get(t)
        if v is None:
            target[t] = -c * sc
        else:
            v = v - c * sc
            if v:
                target[t] = v
            else:
                del target[t]


def _mul_mono(src: dict, c, m: Monomial) -> dict:
    return {(i, tuple(map(add, sm, m))): c * sc for (i, sm), sc in src.items()}


class _Divisors:
    """Lead terms of the active basis elements, grouped by component."""

    def __init__(self):
        self.by_comp: dict[int, list[tuple[Monomial, int]]] = {}

    def add(self, lt: Term, idx: int) -> None:
        self.by_comp.setdefault(lt[0], []).append((lt[1], idx))

    def discard(self, idxs: set[int]) -> None:
        for c, lst in self.by_comp.items():
            self.by_comp[c] = [e for e in lst if e[1] not in idxs]

    def find(self, t: Term):
        mono = t[1]
        for lm, idx in self.by_comp.get(t[0], ()):
            if all(a <= b for a, b in zip(lm, mono)):
                return idx, tuple(map(sub, mono, lm))
        return None, None


def _reduce(f: dict, polys: Sequence[dict], divs: _Divisors, order: TermOrder,
            on_step: Callable | None = None, full: bool = True) -> dict:
    """Remainder of ``f`` (consumed) on division by monic ``polys``.

    ``on_step(j, m, c)`` is called for every elementary step f -= c*m*polys[j].
    With ``full=False`` only the lead term is reduced (top reduction).
    """
    rem: dict = {}
    rkey = order.rkey
    heap = [(rkey(t), t) for t in f]
    heapify(heap)
    while heap:
        _, t = heappop(heap)
        c = f.get(t)
        if c is None:
            continue
        j, m = divs.find(t)
        if j is None:
            del f[t]
            rem[t] = c
            if not full:
                rem.update(f)
                return rem
            continue
        for (i, sm), sc in polys[j].items():
            tt = (i, tuple(map(add, sm, m)))
            v = f.get(tt)
            if v is None:
                f[tt] = -c * sc
                heappush(heap, (rkey(tt), tt))
            else:
                v = v - c * sc
                if v:
                    f[tt] = v
                else:
                    del f[tt]
        if on_step is not None:
            on_step(j, m, c)
    return rem


def _lead(f: dict, order: TermOrder) -> Term:
    return max(f, key=order.key)


def _monic(f: dict, order: TermOrder, field) -> tuple[dict, object]:
    lt = _lead(f, order)
    inv = field.one / f[lt]
    if inv == field.one:
        return f, inv
    return {t: c * inv for t, c in f.items()}, inv


def _deg(m: Monomial) -> int:
    return sum(m)


class _Completion:
    """Incremental Buchberger completion.

    ``add`` inserts a new element (reduced against the current basis);
    ``complete`` processes all pending S-pairs.  When ``track_rank`` is given,
    every element carries a representation over ``track_rank`` inputs.
    """

    def __init__(self, rank: int, nvars: int, field, order: TermOrder,
                 track_rank: int | None = None):
        self.rank = rank
        self.nvars = nvars
        self.field = field
        self.order = order
        self.track = track_rank is not None
        self.track_rank = track_rank
        self.polys: list[dict] = []
        self.leads: list[Term] = []
        self.reps: list[dict] = []
        self.active: list[int] = []
        self.divs = _Divisors()
        self.heap: list = []
        self.live: set[tuple[int, int]] = set()
        # the product criterion is only valid for ideals
        self.product_ok = rank == 1

    def _pair_lcm(self, i: int, j: int) -> Term:
        return (self.leads[i][0], monomial_lcm(self.leads[i][1], self.leads[j][1]))

    def _coprime(self, i: int, j: int) -> bool:
        if not self.product_ok:
            return False
        return all(not (a and b) for a, b in zip(self.leads[i][1], self.leads[j][1]))

    def reduce(self, f: dict, rep: dict | None = None, full: bool = True):
        polys, reps = self.polys, self.reps
        if rep is None:
            return _reduce(f, polys, self.divs, self.order, None, full), None

        def step(j, m, c):
            _sub_mul(rep, reps[j], c, m)

        return _reduce(f, polys, self.divs, self.order, step, full), rep

    def add(self, f: dict, rep: dict | None = None) -> bool:
        f, rep = self.reduce(dict(f), dict(rep) if rep is not None else None)
        if not f:
            return False
        self._insert(f, rep)
        return True

    def _insert(self, f: dict, rep: dict | None) -> None:
        f, inv = _monic(f, self.order, self.field)
        if rep is not None and inv != self.field.one:
            rep = {t: c * inv for t, c in rep.items()}
        h = len(self.polys)
        self.polys.append(f)
        lt = _lead(f, self.order)
        self.leads.append(lt)
        self.reps.append(rep)
        self._update(h)

    def _update(self, h: int) -> None:
        lt_h = self.leads[h]
        comp = lt_h[0]
        cands = [g for g in self.active if self.leads[g][0] == comp]
        lcms = {g: self._pair_lcm(h, g)[1] for g in cands}
        kept: list[int] = []
        for idx, g in enumerate(cands):
            L = lcms[g]
            if self._coprime(h, g):
                kept.append(g)
                continue
            rest = cands[idx + 1:]
            if any(monomial_divides(lcms[g2], L) for g2 in rest):
                continue
            if any(monomial_divides(lcms[g2], L) for g2 in kept):
                continue
            kept.append(g)
        new_pairs = [g for g in kept if not self._coprime(h, g)]
        # chain criterion on old pairs
        dead = []
        for (a, b) in self.live:
            if self.leads[a][0] != comp:
                continue
            L = monomial_lcm(self.leads[a][1], self.leads[b][1])
            if not monomial_divides(lt_h[1], L):
                continue
            if monomial_lcm(self.leads[a][1], lt_h[1]) != L and \
                    monomial_lcm(self.leads[b][1], lt_h[1]) != L:
                dead.append((a, b))
        for p in dead:
            self.live.discard(p)
        for g in new_pairs:
            L = lcms[g]
            key = (_deg(L), self.order.key((comp, L)), g, h)
            self.live.add((g, h))
            heappush(self.heap, key)
        # drop active elements made redundant by h
        gone = {g for g in self.active
                if self.leads[g][0] == comp and monomial_divides(lt_h[1], self.leads[g][1])}
        if gone:
            self.active = [g for g in self.active if g not in gone]
            self.divs.discard(gone)
        self.active.append(h)
        self.divs.add(lt_h, h)

    def spoly(self, i: int, j: int):
        comp, L = self._pair_lcm(i, j)
        mi = tuple(map(sub, L, self.leads[i][1]))
        mj = tuple(map(sub, L, self.leads[j][1]))
        one_ = self.field.one
        s = _mul_mono(self.polys[i], one_, mi)
        _sub_mul(s, self.polys[j], one_, mj)
        rep = None
        if self.track:
            rep = _mul_mono(self.reps[i], one_, mi)
            _sub_mul(rep, self.reps[j], one_, mj)
        return s, rep

    def complete(self) -> None:
        while self.heap:
            _, _, i, j = heappop(self.heap)
            if (i, j) not in self.live:
                continue
            self.live.discard((i, j))
            s, rep = self.spoly(i, j)
            s, rep = self.reduce(s, rep)
            if s:
                self._insert(s, rep)

    def reduced(self) -> tuple[list[dict], list[dict | None]]:
        """The reduced basis (monic, tails reduced), sorted ascending."""
        self.complete()
        out = []
        for g in self.active:
            f = self.polys[g]
            lt = self.leads[g]
            tail = {t: c for t, c in f.items() if t != lt}
            rep = dict(self.reps[g]) if self.track else None
            tail, rep = self.reduce(tail, rep)
            tail[lt] = f[lt]
            out.append((self.order.key(lt), tail, rep))
        out.sort(key=lambda e: e[0])
        return [e[1] for e in out], [e[2] for e in out]


# ---------------------------------------------------------------------------
# the basis object


class GroebnerBasis:
    """A reduced Gröbner basis of a submodule of R^r.

    ``gens`` are monic with fully reduced tails, sorted by ascending lead
    term.  ``input_gens`` keeps the generators the basis was computed from
    and ``reps`` (if tracked) expresses each basis element over them.
    """

    def __init__(self, gens: Sequence[ModuleVector], order: TermOrder, rank: int,
                 nvars: int, field, input_gens: Sequence[ModuleVector] | None = None,
                 reps: Sequence[ModuleVector] | None = None):
        self.gens = tuple(gens)
        self.order = order
        self.rank = rank
        self.nvars = nvars
        self.field = field
        self.input_gens = tuple(input_gens) if input_gens is not None else None
        self.reps = tuple(reps) if reps is not None else None
        self.leads = tuple(g.lead_term(order) for g in self.gens)
        self._divs = _Divisors()
        for k, lt in enumerate(self.leads):
            self._divs.add(lt, k)
        self._polys = [g.terms for g in self.gens]
        self._tnf: dict[Term, dict] = {}
        self._std = None

    # basic queries -----------------------------------------------------------
    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.order == other.order
                and self.rank == other.rank and self.gens == other.gens)

    def __hash__(self):
        return hash((self.rank, self.gens))

    def __repr__(self):
        return f"GroebnerBasis({list(self.gens)!r})"

    @property
    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def zero_vector(self) -> ModuleVector:
        return ModuleVector.zero(self.rank, self.nvars, self.field)

    # reduction -------------------------------------------------------------
    def normal_form(self, f: ModuleVector) -> ModuleVector:
        self._check(f)
        rem = _reduce(dict(f.terms), self._polys, self._divs, self.order)
        return ModuleVector(rem, self.rank, self.nvars, self.field, _trusted=True)

    def divide(self, f: ModuleVector) -> tuple[list[ModuleVector], ModuleVector]:
        """Quotients q_k (rank-1 polynomials) and remainder with f = Σ q_k g_k + rem."""
        self._check(f)
        qs: list[dict] = [{} for _ in self.gens]
        field = self.field

        def step(j, m, c):
            q = qs[j]
            key = (0, m)
            v = q.get(key, field.zero) + c
            if v:
                q[key] = v
            else:
                q.pop(key, None)

        rem = _reduce(dict(f.terms), self._polys, self._divs, self.order, step)
        quot = [ModuleVector(q, 1, self.nvars, field, _trusted=True) for q in qs]
        return quot, ModuleVector(rem, self.rank, self.nvars, field, _trusted=True)

    def contains(self, f: ModuleVector) -> bool:
        return not self.normal_form(f)

    def contains_all(self, fs: Iterable[ModuleVector]) -> bool:
        return all(self.contains(f) for f in fs)

    def term_normal_form(self, t: Term) -> dict:
        """Normal form of a single monomial term as a dict over standard terms.

        Memoized; uses NF(m·x_k·u) = NF(x_k·NF(m·u)) so that every step only
        multiplies standard terms by one variable.
        """
        memo = self._tnf
        r = memo.get(t)
        if r is not None:
            return r
        stack = [t]
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            j, m = self._divs.find(u)
            if j is None:
                memo[u] = {u: self.field.one}
                stack.pop()
                continue
            if not any(m):
                need = [tt for tt in self._polys[j] if tt != u and tt not in memo]
                if need:
                    stack.extend(need)
                    continue
                acc: dict = {}
                for tt, c in self._polys[j].items():
                    if tt != u:
                        _acc_scaled(acc, memo[tt], -c)
                memo[u] = acc
                stack.pop()
                continue
            k = next(i for i, e in enumerate(m) if e)
            shifted = u[1][:k] + (u[1][k] - 1,) + u[1][k + 1:]
            prev = (u[0], shifted)
            if prev not in memo:
                stack.append(prev)
                continue
            nexts = []
            for (ci, sm), _ in memo[prev].items():
                nt = (ci, sm[:k] + (sm[k] + 1,) + sm[k + 1:])
                nexts.append(nt)
            need = [nt for nt in nexts if nt not in memo]
            if need:
                stack.extend(need)
                continue
            acc = {}
            for nt, (_, c) in zip(nexts, memo[prev].items()):
                _acc_scaled(acc, memo[nt], c)
            memo[u] = acc
            stack.pop()
        return memo[t]

    def _check(self, f: ModuleVector):
        if f.rank != self.rank or f.nvars != self.nvars:
            raise ValueError(f"vector in R^{f.rank} over {f.nvars} variables; "
                             f"basis lives in R^{self.rank} over {self.nvars}")

    # finiteness ----------------------------------------------------------------
    def colength(self):
        """dim of R^r/U, or ``INFINITE``."""
        try:
            return len(self.standard_terms())
        except InfiniteColength:
            return INFINITE

    def is_finite(self) -> bool:
        return self.colength() != INFINITE

    def standard_terms(self) -> list[Term]:
        """Terms outside the lead-term module, ascending in the term order."""
        if self._std is not None:
            return self._std
        n = self.nvars
        out: list[Term] = []
        for comp in range(self.rank):
            leads = [m for c, m in self.leads if c == comp]
            if any(not any(m) for m in leads):
                continue
            for v in range(n):
                if not any(m[v] and not any(e for i, e in enumerate(m) if i != v)
                           for m in leads):
                    raise InfiniteColength(
                        f"no pure power of variable {v + 1} among leads in component {comp + 1}")
            seen = {one(n)}
            frontier = [one(n)]
            while frontier:
                nxt = []
                for m in frontier:
                    for v in range(n):
                        mm = m[:v] + (m[v] + 1,) + m[v + 1:]
                        if mm in seen:
                            continue
                        if any(monomial_divides(l, mm) for l in leads):
                            continue
                        seen.add(mm)
                        nxt.append(mm)
                frontier = nxt
            out.extend((comp, m) for m in seen)
        out.sort(key=self.order.key)
        self._std = out
        return out


def _acc_scaled(acc: dict, src: dict, c) -> None:
    for t, v in src.items():
        s = acc.get(t)
        s = c * v if s is None else s + c * v
        if s:
            acc[t] = s
        else:
            acc.pop(t, None)


def _ambient(gens: Sequence[ModuleVector], rank: int | None, nvars: int | None, field):
    if gens:
        g0 = gens[0]
        rank = g0.rank if rank is None else rank
        nvars = g0.nvars if nvars is None else nvars
        field = g0.field if field is None else field
        for g in gens:
            if g.rank != rank or g.nvars != nvars:
                raise ValueError("generators live in different free modules")
            if g.field != field:
                raise ValueError("generators over different fields")
    if rank is None or nvars is None:
        raise ValueError("cannot infer the ambient module of an empty generator list")
    from .scalars import QQ
    return rank, nvars, field if field is not None else QQ


def buchberger(gens: Sequence[ModuleVector], order: TermOrder = DEFAULT_ORDER, *,
               track: bool = False, rank: int | None = None, nvars: int | None = None,
               field=None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``.

    With ``track=True`` the result carries ``reps``: vectors in R^s (s the
    number of inputs) expressing each basis element over the inputs.
    """
    gens = list(gens)
    rank, nvars, field = _ambient(gens, rank, nvars, field)
    s = len(gens)
    eng = _Completion(rank, nvars, field, order, s if track else None)
    z = one(nvars)
    idx = sorted(range(s), key=lambda i: (order.key(gens[i].lead_term(order))
                                          if gens[i] else ()))
    for i in idx:
        if gens[i]:
            eng.add(gens[i].terms, {(i, z): field.one} if track else None)
    polys, reps = eng.reduced()
    out = [ModuleVector(p, rank, nvars, field, _trusted=True) for p in polys]
    rv = None
    if track:
        rv = [ModuleVector(r, s, nvars, field, _trusted=True) for r in reps]
    return GroebnerBasis(out, order, rank, nvars, field, input_gens=gens, reps=rv)


def normal_form(f: ModuleVector, G: GroebnerBasis) -> ModuleVector:
    return G.normal_form(f)


def colength(G: GroebnerBasis):
    return G.colength()


def spolynomial(G: GroebnerBasis, i: int, j: int) -> ModuleVector | None:
    """S-vector of basis elements i and j, or None for different components."""
    li, lj = G.leads[i], G.leads[j]
    if li[0] != lj[0]:
        return None
    L = monomial_lcm(li[1], lj[1])
    a = tuple(map(sub, L, li[1]))
    b = tuple(map(sub, L, lj[1]))
    return G.gens[i].shift(a) - G.gens[j].shift(b)


def is_groebner(G: GroebnerBasis) -> bool:
    """Buchberger's criterion, checked on every pair."""
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            s = spolynomial(G, i, j)
            if s is not None and G.normal_form(s):
                return False
    return True


# ---------------------------------------------------------------------------
# quotient structure


@dataclass
class QuotientStructure:
    """Standard-term basis of R^r/U with its socle."""

    basis: list[Term]
    index: dict[Term, int]
    socle: list[Term]

    @property
    def colength(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)


def quotient_structure(G: GroebnerBasis) -> QuotientStructure:
    basis = G.standard_terms()
    index = {t: k for k, t in enumerate(basis)}
    socle = []
    n = G.nvars
    for comp, m in basis:
        if all(not G.term_normal_form((comp, m[:v] + (m[v] + 1,) + m[v + 1:]))
               for v in range(n)):
            socle.append((comp, m))
    return QuotientStructure(basis, index, socle)


# ---------------------------------------------------------------------------
# minimal generators and syzygies


def _sort_homogeneous_first(vecs: Sequence[ModuleVector], order: TermOrder, shift=None):
    def key(k):
        v = vecs[k]
        if shift is None:
            d = v.degree()
        else:
            d = max(sum(m) + shift[i] for (i, m) in v.terms)
        return (d, order.key(v.lead_term(order)), k)
    return sorted((k for k in range(len(vecs)) if vecs[k]), key=key)


def _greedy_basis(vecs: Sequence[ModuleVector], ordered: Sequence[int], rank: int,
                  nvars: int, field, order: TermOrder,
                  base: Sequence[ModuleVector] = ()) -> list[int]:
    """Indices accepted by the incremental membership test, in the given order.

    ``base`` elements are in the span from the start but never reported.
    """
    eng = _Completion(rank, nvars, field, order)
    for b in base:
        eng.add(b.terms)
    kept = []
    for k in ordered:
        eng.complete()
        if eng.add(vecs[k].terms):
            kept.append(k)
    return kept


def _removal_pass(vecs: Sequence[ModuleVector], kept: list[int], order: TermOrder,
                  rank: int, nvars: int, field, base: Sequence[ModuleVector] = ()) -> list[int]:
    kept = list(kept)
    for k in reversed(list(kept)):
        others = [vecs[j] for j in kept if j != k] + list(base)
        if not others:
            continue
        G = buchberger(others, order, rank=rank, nvars=nvars, field=field)
        if G.contains(vecs[k]):
            kept.remove(k)
    return kept


def minimal_generators(G: GroebnerBasis) -> list[ModuleVector]:
    """A minimal generating set.

    Monomial submodules get their unique minimal monomial generators.
    Otherwise the input generators (or the basis) are filtered greedily in
    ascending order; for inhomogeneous input a removal pass follows.
    """
    if G.is_monomial:
        return list(G.gens)
    cands = list(G.input_gens) if G.input_gens is not None else list(G.gens)
    cands = [c for c in cands if c]
    ordered = _sort_homogeneous_first(cands, G.order)
    kept = _greedy_basis(cands, ordered, G.rank, G.nvars, G.field, G.order)
    if not all(c.is_homogeneous() for c in cands):
        kept = _removal_pass(cands, kept, G.order, G.rank, G.nvars, G.field)
    return [cands[k] for k in kept]


@dataclass
class SyzygyModule:
    """Generators of the first syzygy module of ``gens``."""

    gens: list[ModuleVector]
    syzygies: list[ModuleVector]

    def __len__(self):
        return len(self.syzygies)

    def evaluate(self, syz: ModuleVector) -> ModuleVector:
        g0 = self.gens[0]
        acc = ModuleVector.zero(g0.rank, g0.nvars, g0.field)
        for i, g in enumerate(self.gens):
            p = syz.component(i)
            if p:
                acc = acc + g * p
        return acc

    def verify(self) -> bool:
        return all(not self.evaluate(s) for s in self.syzygies)


def _chain_pruned_pairs(leads: Sequence[Term]) -> list[tuple[int, int]]:
    """Pairs whose lead syzygies generate all lead syzygies."""
    out = []
    N = len(leads)
    for k in range(N):
        for l in range(k + 1, N):
            if leads[k][0] != leads[l][0]:
                continue
            comp = leads[k][0]
            L = monomial_lcm(leads[k][1], leads[l][1])
            redundant = False
            for j in range(N):
                if j in (k, l) or leads[j][0] != comp:
                    continue
                if not monomial_divides(leads[j][1], L):
                    continue
                if monomial_lcm(leads[k][1], leads[j][1]) != L and \
                        monomial_lcm(leads[j][1], leads[l][1]) != L:
                    redundant = True
                    break
            if not redundant:
                out.append((k, l))
    return out


def groebner_syzygies(G: GroebnerBasis) -> list[ModuleVector]:
    """Schreyer syzygies among the basis elements (vectors in R^{|G|})."""
    m = len(G)
    n = G.nvars
    field = G.field
    out = []
    for k, l in _chain_pruned_pairs(G.leads):
        L = monomial_lcm(G.leads[k][1], G.leads[l][1])
        a = tuple(map(sub, L, G.leads[k][1]))
        b = tuple(map(sub, L, G.leads[l][1]))
        s = G.gens[k].shift(a) - G.gens[l].shift(b)
        qs, rem = G.divide(s)
        if rem:
            raise AssertionError("basis is not a Gröbner basis")
        terms: dict = {}
        for j, q in enumerate(qs):
            for (_, qm), c in q.terms.items():
                terms[(j, qm)] = terms.get((j, qm), field.zero) - c
        terms[(k, a)] = terms.get((k, a), field.zero) + field.one
        terms[(l, b)] = terms.get((l, b), field.zero) - field.one
        v = ModuleVector({t: c for t, c in terms.items() if c}, m, n, field)
        if v:
            out.append(v)
    return out


def _pull_back(sigma: ModuleVector, reps: Sequence[ModuleVector], s: int) -> ModuleVector:
    acc: dict = {}
    for (j, mono), c in sigma.terms.items():
        for t, v in reps[j].terms.items():
            tt = (t[0], tuple(map(add, t[1], mono)))
            w = acc.get(tt)
            w = c * v if w is None else w + c * v
            if w:
                acc[tt] = w
            else:
                acc.pop(tt, None)
    return ModuleVector(acc, s, sigma.nvars, sigma.field, _trusted=True)


def koszul_syzygies(gens: Sequence[ModuleVector]) -> list[ModuleVector]:
    """The trivial relations g_j·e_i − g_i·e_j among polynomials."""
    if not gens or gens[0].rank != 1:
        return []
    s = len(gens)
    out = []
    for i in range(s):
        for j in range(i + 1, s):
            v = gens[j].embed(s, i) - gens[i].embed(s, j)
            if v:
                out.append(v)
    return out


def syzygies(gens: Sequence[ModuleVector], order: TermOrder = DEFAULT_ORDER,
             reduce: str = "minimal", modulo_koszul: bool = False) -> SyzygyModule:
    """Generators of the syzygy module of ``gens``.

    ``reduce`` is ``"minimal"`` (a minimal generating set; for homogeneous
    input this is the graded-minimal set), ``"greedy"`` (membership filter
    only, skipping the final removal pass) or ``"none"``.

    With ``modulo_koszul`` (polynomials only) the result generates the
    syzygies together with the Koszul relations, and is minimal for that
    property: only relations that are not formal consequences of
    commutativity are kept.
    """
    gens = list(gens)
    if not gens:
        return SyzygyModule([], [])
    rank, nvars, field = _ambient(gens, None, None, None)
    s = len(gens)
    z = one(nvars)
    cands: list[ModuleVector] = []
    for i, g in enumerate(gens):
        if not g:
            cands.append(ModuleVector({(i, z): field.one}, s, nvars, field, _trusted=True))
    G = buchberger(gens, order, track=True)
    for i, g in enumerate(gens):
        if not g:
            continue
        qs, rem = G.divide(g)
        assert not rem
        sigma = ModuleVector({(j, mm): c for j, q in enumerate(qs) for (_, mm), c in q.terms.items()},
                             len(G), nvars, field)
        v = ModuleVector({(i, z): field.one}, s, nvars, field) - _pull_back(sigma, G.reps, s)
        if v:
            cands.append(v)
    for sigma in groebner_syzygies(G):
        v = _pull_back(sigma, G.reps, s)
        if v:
            cands.append(v)
    if reduce == "none" or not cands:
        return SyzygyModule(gens, cands)
    base = koszul_syzygies(gens) if modulo_koszul else []
    shift = [g.degree() if g else 0 for g in gens]
    ordered = _sort_homogeneous_first(cands, order, shift)
    kept = _greedy_basis(cands, ordered, s, nvars, field, order, base)
    homogeneous = all(g.is_homogeneous() for g in gens)
    if reduce == "minimal" and not homogeneous:
        kept = _removal_pass(cands, kept, order, s, nvars, field, base)
    return SyzygyModule(gens, [cands[k] for k in kept])


# ---------------------------------------------------------------------------
# intersection, kernels, colon


def intersect(A: GroebnerBasis, B: GroebnerBasis) -> GroebnerBasis:
    """A ∩ B via the generators w·a, (1−w)·b and elimination of w."""
    if A.rank != B.rank or A.nvars != B.nvars:
        raise ValueError("intersecting submodules of different free modules")
    n, r, field = A.nvars, A.rank, A.field
    if not A.gens or not B.gens:
        return GroebnerBasis([], A.order, r, n, field, input_gens=[])
    w = ModuleVector({(0, (0,) * n + (1,)): field.one}, 1, n + 1, field, _trusted=True)
    onew = ModuleVector({(0, (0,) * (n + 1)): field.one}, 1, n + 1, field, _trusted=True) - w
    gens = [a.with_nvars(n + 1) * w for a in A.gens]
    gens += [b.with_nvars(n + 1) * onew for b in B.gens]
    elim = TermOrder("degrevlex", "pot", priority=(n,) + tuple(range(n)), elim=1)
    H = buchberger(gens, elim)
    keep = [g.drop_last_variables(1) for g in H.gens if g.lead_term(elim)[1][n] == 0]
    return buchberger(keep, A.order, rank=r, nvars=n, field=field)


def module_kernel(targets: Sequence[ModuleVector], W: GroebnerBasis,
                  order: TermOrder = DEFAULT_ORDER) -> GroebnerBasis:
    """Kernel of R^k → R^s/W sending e_i to ``targets[i]``."""
    k = len(targets)
    s, n, field = W.rank, W.nvars, W.field
    gens = []
    for i, v in enumerate(targets):
        if v.rank != s or v.nvars != n:
            raise ValueError("target outside the ambient of W")
        e = ModuleVector({(s + i, one(n)): field.one}, s + k, n, field, _trusted=True)
        gens.append(v.embed(s + k) + e)
    gens.extend(w.embed(s + k) for w in W.gens)
    H = buchberger(gens, TermOrder("degrevlex", "pot"), rank=s + k, nvars=n, field=field)
    keep = [g.project(range(s, s + k)) for g in H.gens
            if g.lead_term(H.order)[0] >= s]
    return buchberger(keep, order, rank=k, nvars=n, field=field)


def ideal_basis(polys: Sequence[ModuleVector], order: TermOrder = DEFAULT_ORDER) -> GroebnerBasis:
    return buchberger(polys, order)


def _exact_quotient(v: ModuleVector, f: ModuleVector) -> ModuleVector:
    """v / f for a polynomial f dividing every component of v."""
    F = buchberger([f])
    lc = f.lead_coefficient(F.order)
    comps = []
    for i in range(v.rank):
        qs, rem = F.divide(v.component(i))
        if rem:
            raise ValueError("polynomial does not divide the vector")
        comps.append(qs[0].scale(v.field.one / lc))
    return ModuleVector.from_components(comps) if v.rank > 1 else comps[0]


def colon(U: GroebnerBasis, J: Sequence[ModuleVector]) -> GroebnerBasis:
    """(U : J) = {m : J·m ⊆ U}, intersected over the generators of J."""
    r, n, field = U.rank, U.nvars, U.field
    full = buchberger([ModuleVector.basis(i, r, n, field) for i in range(r)], U.order)
    result = full
    for f in J:
        if not f:
            continue
        fR = buchberger([ModuleVector.basis(i, r, n, field) * f for i in range(r)], U.order)
        cap = intersect(U, fR)
        quo = [_exact_quotient(g, f) for g in cap.gens]
        part = buchberger(quo, U.order, rank=r, nvars=n, field=field)
        result = intersect(result, part) if result is not full else part
    return result
