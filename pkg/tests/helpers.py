"""Shared constructors and independent oracles for the tests."""

import itertools
import random
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from quottangent.grammar import parse_vector
from quottangent.groebner import buchberger
from quottangent.poly import ModuleVector, Ring
from quottangent.scalars import QQ

XYZ = ("x", "y", "z")


def ring(names=XYZ, rank=1, field=QQ, param=None):
    return Ring(tuple(names), rank, field, param)


def vecs(texts, names=XYZ, rank=1, field=QQ):
    R = ring(names, rank, field)
    return [parse_vector(t, R) for t in texts]


def gb(texts, names=XYZ, rank=1, field=QQ, **kw):
    return buchberger(vecs(texts, names, rank, field), **kw)


def to_sympy(v: ModuleVector, symbols):
    """A rank-1 vector as a sympy expression."""
    expr = 0
    for (_, m), c in v.terms.items():
        expr += sympy.Rational(c.numerator, c.denominator) * sympy.Mul(
            *[s ** e for s, e in zip(symbols, m)])
    return sympy.expand(expr)


def sympy_reduced_basis(texts, names=XYZ):
    """Monic reduced grevlex basis from sympy, as a set of expressions."""
    syms = sympy.symbols(names)
    polys = [sympy.sympify(t.replace("^", "**"), dict(zip(names, syms))) for t in texts]
    G = sympy.groebner(polys, *syms, order="grevlex")
    out = set()
    for g in G.exprs:
        p = sympy.Poly(g, *syms)
        out.add(sympy.expand(g / p.LC(order="grevlex")))
    return out


# ---------------------------------------------------------------------------
# staircases


def naive_order_ideals(n, d):
    """All order ideals of N^n with d cells, grown one addable cell at a time."""
    level = {frozenset()}
    for _ in range(d):
        nxt = set()
        for cells in level:
            cand = {(0,) * n}
            for m in cells:
                for v in range(n):
                    cand.add(m[:v] + (m[v] + 1,) + m[v + 1:])
            for c in cand - cells:
                if all(not c[v] or c[:v] + (c[v] - 1,) + c[v + 1:] in cells for v in range(n)):
                    nxt.add(cells | {c})
        level = nxt
    return level


def naive_strongly_stable(cells, n):
    """Closure test on the whole ideal, up to degree max + 1."""
    top = max((sum(c) for c in cells), default=0) + 1
    box = [m for k in range(top + 1) for m in itertools.product(range(top + 1), repeat=n)
           if sum(m) == k]
    inside = lambda m: m not in cells
    for m in box:
        if not inside(m):
            continue
        for j in range(n):
            if not m[j]:
                continue
            for i in range(j):
                mm = list(m)
                mm[j] -= 1
                mm[i] += 1
                if not inside(tuple(mm)):
                    return False
    return True


def plane_partitions(d):
    """Coefficients of prod (1 - q^k)^-k up to q^d (MacMahon)."""
    coeffs = [1] + [0] * d
    for k in range(1, d + 1):
        for _ in range(k):
            for i in range(k, d + 1):
                coeffs[i] += coeffs[i - k]
    return coeffs


def partitions_count(d):
    coeffs = [1] + [0] * d
    for k in range(1, d + 1):
        for i in range(k, d + 1):
            coeffs[i] += coeffs[i - k]
    return coeffs


# ---------------------------------------------------------------------------
# graded Betti numbers by linear algebra in each degree


def _monos(vs, d):
    return [] if d < 0 else [sympy.Mul(*m) for m in itertools.combinations_with_replacement(vs, d)]


def first_betti(gens, vs, maxdeg, koszul=False):
    """Minimal first syzygies per degree: dim Syz_j − dim (m·Syz)_{j}
    (optionally also modulo the Koszul relations)."""
    degs = [sympy.Poly(g, *vs).total_degree() for g in gens]
    prev = None
    out = {}
    for j in range(maxdeg + 1):
        cols = [(i, m) for i in range(len(gens)) for m in _monos(vs, j - degs[i])]
        if not cols:
            prev = None
            continue
        target = _monos(vs, j)
        idx = {t: k for k, t in enumerate(target)}
        A = sympy.zeros(len(target), len(cols))
        for c, (i, m) in enumerate(cols):
            for mon, co in sympy.Poly(sympy.expand(m * gens[i]), *vs).terms():
                A[idx[sympy.Mul(*[v ** e for v, e in zip(vs, mon)])], c] += co
        ns = A.nullspace()
        syz = [{cols[k]: v[k] for k in range(len(cols)) if v[k] != 0} for v in ns]
        span = []
        if prev:
            for s in prev:
                for x in vs:
                    span.append({(i, sympy.expand(x * m)): c for (i, m), c in s.items()})
        if koszul:
            for a, b in itertools.combinations(range(len(gens)), 2):
                if degs[a] + degs[b] != j:
                    continue
                v = {}
                for g, i, sign in ((gens[b], a, 1), (gens[a], b, -1)):
                    for mon, co in sympy.Poly(g, *vs).terms():
                        key = (i, sympy.Mul(*[x ** e for x, e in zip(vs, mon)]))
                        v[key] = v.get(key, 0) + sign * co
                span.append(v)
        colidx = {c: k for k, c in enumerate(cols)}
        r = 0
        if span:
            M = sympy.zeros(len(span), len(cols))
            for a, s in enumerate(span):
                for key, c in s.items():
                    M[a, colidx[key]] += c
            r = M.rank()
        if len(ns) - r:
            out[j] = len(ns) - r
        prev = syz
    return out


# ---------------------------------------------------------------------------
# hypothesis strategies


def small_monomial(n, max_deg=3):
    return st.tuples(*[st.integers(0, max_deg)] * n)


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, n=2, max_terms=3, max_deg=3):
    k = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(k):
        m = draw(small_monomial(n, max_deg))
        c = draw(coefficients)
        if c:
            terms[(0, m)] = terms.get((0, m), 0) + c
    return ModuleVector({t: c for t, c in terms.items() if c}, 1, n, QQ)


@st.composite
def module_vectors(draw, n=2, rank=2, max_terms=3, max_deg=2):
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        comp = draw(st.integers(0, rank - 1))
        m = draw(small_monomial(n, max_deg))
        c = draw(coefficients)
        terms[(comp, m)] = terms.get((comp, m), 0) + c
    return ModuleVector({t: c for t, c in terms.items() if c}, rank, n, QQ)


def translate(v: ModuleVector, shift):
    """v(x_1 + a_1, ..., x_n + a_n)."""
    n, field = v.nvars, v.field
    lin = [ModuleVector({(0, tuple(int(i == l) for i in range(n))): 1, (0, (0,) * n): a}, 1, n, field)
           for l, a in enumerate(shift)]
    out = ModuleVector.zero(v.rank, n, field)
    for (comp, m), c in v.terms.items():
        p = ModuleVector({(comp, (0,) * n): c}, v.rank, n, field)
        for l, e in enumerate(m):
            for _ in range(e):
                p = p * lin[l]
        out = out + p
    return out


def random_zero_dim_ideal(rng: random.Random, n=2, max_colength=8):
    """A random monomial ideal of colength ≤ max_colength moved by a random
    invertible linear change of variables and a random translation."""
    from quottangent.enumeration import monomial_ideals
    d = rng.randint(1, max_colength)
    stairs = rng.choice(list(monomial_ideals(n, d)))
    while True:
        mat = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(mat).det() != 0:
            break
    shift = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    gens = [translate(g.linear_change(mat), shift) for g in stairs.ideal()]
    return gens, d


# ---------------------------------------------------------------------------
# Hom(U, R^r/U) for a monomial submodule by brute force


def naive_monomial_tangent(stairs):
    """dim Hom(U, R^r/U) for U = ⊕ J_i e_i given by staircases.

    Unknowns are the coefficients of φ(g) on the standard monomials; the
    pairwise (Taylor) syzygies of the monomial generators generate all
    syzygies, so these are the only conditions.
    """
    std = [(i, m) for i, s in enumerate(stairs) for m in s.cells]
    cells = set(std)
    gens = [(i, g) for i, s in enumerate(stairs) for g in s.generators]
    col = {(k, b): c for c, (k, b) in enumerate(itertools.product(range(len(gens)), std))}
    rows = []
    for a, b in itertools.combinations(range(len(gens)), 2):
        (ia, ga), (ib, gb_) = gens[a], gens[b]
        if ia != ib:
            continue
        L = tuple(max(p, q) for p, q in zip(ga, gb_))
        row = {}
        for k, g, sign in ((a, ga, 1), (b, gb_, -1)):
            shift = tuple(p - q for p, q in zip(L, g))
            for j, m in std:
                target = (j, tuple(p + q for p, q in zip(m, shift)))
                if target in cells:
                    row.setdefault(target, {})
                    row[target][col[(k, (j, m))]] = row[target].get(col[(k, (j, m))], 0) + sign
        rows.extend(row.values())
    n = len(col)
    if not rows:
        return n
    M = sympy.SparseMatrix(len(rows), n, {(r, c): v for r, row in enumerate(rows)
                                          for c, v in row.items() if v})
    return n - M.rank()
