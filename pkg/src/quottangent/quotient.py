"""Linear algebra on finite quotients R^r/U.

A tangent vector at U is an R-linear map φ: U → R^r/U.  It is determined by
the images φ(g_i) of generators, subject to Σ p_i·φ(g_i) = 0 for every
syzygy (p_i).  Unknowns are indexed by (generator, standard term); each
syzygy contributes one row per standard term of the quotient.

For homogeneous U the unknown (g_i, s) has weight deg(s) − deg(g_i) and
every constraint row involves a single weight, so the system splits into
independent weight blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .groebner import (GroebnerBasis, InfiniteColength, QuotientStructure,
                       buchberger, groebner_syzygies, minimal_generators,
                       quotient_structure, syzygies)
from .linalg import Echelon, mat_pow, matrix_rank, shift_diagonal
from .poly import ModuleVector, Term, monomial_mul, one
from .scalars import QQ, PrimeField


class NotHomogeneous(ValueError):
    pass


class IrrationalSupport(ValueError):
    """Raised when the support has points with irrational coordinates."""

    code = "IRRATIONAL_SUPPORT"


class ChainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# multiplication table


@dataclass
class MultiplicationTable:
    """Action of each variable on the standard basis of R^r/U.

    ``columns[l][j]`` is NF(x_l · N[j]) as a dict ``basis index -> coeff``.
    """

    quotient: QuotientStructure
    columns: list[list[dict[int, object]]]
    field: object = QQ

    @property
    def nvars(self) -> int:
        return len(self.columns)

    def matrix(self, l: int) -> list[list]:
        d = len(self.quotient)
        z = self.field.zero
        m = [[z] * d for _ in range(d)]
        for j, col in enumerate(self.columns[l]):
            for i, c in col.items():
                m[i][j] = c
        return m

    def apply(self, l: int, vec: dict[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for j, c in vec.items():
            for i, a in self.columns[l][j].items():
                v = out.get(i)
                v = c * a if v is None else v + c * a
                if v:
                    out[i] = v
                else:
                    out.pop(i, None)
        return out

    def commute(self) -> bool:
        d = len(self.quotient)
        for a in range(self.nvars):
            for b in range(a + 1, self.nvars):
                for j in range(d):
                    e = {j: self.field.one}
                    if self.apply(a, self.apply(b, e)) != self.apply(b, self.apply(a, e)):
                        return False
        return True

    def image(self, v: ModuleVector, units: Sequence[dict[int, object]]) -> dict[int, object]:
        """Coordinates of the class of ``v``, computed through the matrices.

        ``units[i]`` are the coordinates of the class of e_i.
        """
        out: dict[int, object] = {}
        for (i, m), c in v.terms.items():
            vec = dict(units[i])
            for l, e in enumerate(m):
                for _ in range(e):
                    vec = self.apply(l, vec)
            for k, a in vec.items():
                w = out.get(k)
                w = c * a if w is None else w + c * a
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return out


def _coords(G: GroebnerBasis, Q: QuotientStructure, nf: dict[Term, object]) -> dict[int, object]:
    return {Q.index[t]: c for t, c in nf.items()}


def multiplication_table(Q: QuotientStructure, G: GroebnerBasis) -> MultiplicationTable:
    cols = []
    for l in range(G.nvars):
        cl = []
        for comp, m in Q.basis:
            t = (comp, m[:l] + (m[l] + 1,) + m[l + 1:])
            cl.append(_coords(G, Q, G.term_normal_form(t)))
        cols.append(cl)
    return MultiplicationTable(Q, cols, G.field)


def unit_images(G: GroebnerBasis, Q: QuotientStructure) -> list[dict[int, object]]:
    z = one(G.nvars)
    return [_coords(G, Q, G.term_normal_form((i, z))) for i in range(G.rank)]


# ---------------------------------------------------------------------------
# linear systems with weights


class _System:
    """Unknowns grouped in blocks (one per generator and level) with optional
    weights, and constraint rows."""

    def __init__(self, field):
        self.field = field
        self.ncols = 0
        self.weights: list[int | None] = []
        self.rows: list[dict[int, object]] = []

    def add_block(self, size: int, weights: Sequence[int | None]) -> int:
        start = self.ncols
        self.ncols += size
        self.weights.extend(weights)
        return start

    def add_rows(self, rows: dict[int, dict[int, object]]) -> None:
        for r in rows.values():
            if r:
                self.rows.append(r)

    def rank(self) -> int:
        return self._echelons(graded=False)[None].rank

    def _echelons(self, graded: bool) -> dict:
        ech: dict = {}
        for r in self.rows:
            w = self.weights[next(iter(r))] if graded else None
            e = ech.get(w)
            if e is None:
                e = ech[w] = Echelon(self.field)
            e.insert(r)
        if None not in ech and not graded:
            ech[None] = Echelon(self.field)
        return ech

    def dimension(self) -> int:
        return self.ncols - self.rank()

    def graded_dims(self) -> dict[int, int]:
        if any(w is None for w in self.weights):
            raise NotHomogeneous("weights undefined for inhomogeneous input")
        for r in self.rows:
            ws = {self.weights[c] for c in r}
            if len(ws) != 1:
                raise NotHomogeneous("a constraint row mixes weights")
        ech = self._echelons(graded=True)
        counts: dict[int, int] = {}
        for w in self.weights:
            counts[w] = counts.get(w, 0) + 1
        return {w: counts[w] - (ech[w].rank if w in ech else 0) for w in sorted(counts)}

    def satisfies(self, vec: dict[int, object]) -> bool:
        for r in self.rows:
            s = self.field.zero
            for c, a in r.items():
                v = vec.get(c)
                if v:
                    s = s + a * v
            if s:
                return False
        return True


def _act(G: GroebnerBasis, Q: QuotientStructure, poly: ModuleVector, start: int,
         rows: dict[int, dict[int, object]], sign=1) -> None:
    """Add the action of ``poly`` on an unknown block starting at ``start``:
    rows[k][start + j] += coefficient of N[k] in poly·N[j]."""
    for j, (comp, m) in enumerate(Q.basis):
        col = start + j
        for (_, pm), c in poly.terms.items():
            nf = G.term_normal_form((comp, monomial_mul(pm, m)))
            if sign != 1:
                c = -c
            for t, a in nf.items():
                k = Q.index[t]
                row = rows.setdefault(k, {})
                v = row.get(col)
                v = c * a if v is None else v + c * a
                if v:
                    row[col] = v
                else:
                    row.pop(col, None)


def _weights(Q: QuotientStructure, g: ModuleVector) -> list[int | None]:
    if not g.is_homogeneous():
        return [None] * len(Q)
    dg = g.degree()
    return [sum(m) - dg for _, m in Q.basis]


@dataclass
class _Presentation:
    gens: list[ModuleVector]
    syzygies: list[ModuleVector]


def presentation(U: GroebnerBasis, kind: str = "minimal") -> _Presentation:
    """Generators and syzygies of U.

    ``minimal``: minimal generators with their minimal syzygies;
    ``groebner``: the reduced basis with its Schreyer syzygies.
    """
    if kind == "groebner":
        return _Presentation(list(U.gens), groebner_syzygies(U))
    if kind == "minimal":
        gens = minimal_generators(U)
        koszul = U.rank == 1
        # inhomogeneous syzygies only go through the membership filter: a
        # removal pass would not make their number canonical anyway
        syz = syzygies(gens, U.order, reduce="greedy", modulo_koszul=koszul)
        return _Presentation(gens, syz.syzygies)
    raise ValueError(f"unknown presentation {kind!r}")


def _tangent_system(U: GroebnerBasis, Q: QuotientStructure, pres: _Presentation,
                    system: _System | None = None) -> tuple[_System, list[int]]:
    sysm = system or _System(U.field)
    d = len(Q)
    starts = [sysm.add_block(d, _weights(Q, g)) for g in pres.gens]
    for syz in pres.syzygies:
        rows: dict[int, dict[int, object]] = {}
        for i in syz.components():
            _act(U, Q, syz.component(i), starts[i], rows)
        sysm.add_rows(rows)
    return sysm, starts


# ---------------------------------------------------------------------------
# reports


@dataclass
class TangentReport:
    rank: int
    colength: int
    generators: int
    syzygies: int
    tangent_dim: int
    graded: dict[int, int] | None = None

    @property
    def parity_expected(self) -> int:
        return self.rank * self.colength % 2

    @property
    def parity_ok(self) -> bool:
        return self.tangent_dim % 2 == self.parity_expected

    def to_dict(self) -> dict:
        out = {
            "rank": self.rank,
            "colength": self.colength,
            "generators": self.generators,
            "syzygies": self.syzygies,
            "tangent_dim": self.tangent_dim,
            "parity_expected": self.parity_expected,
            "parity_ok": self.parity_ok,
        }
        if self.graded is not None:
            out["graded"] = {str(k): v for k, v in sorted(self.graded.items())}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _require_finite(U: GroebnerBasis) -> QuotientStructure:
    try:
        return quotient_structure(U)
    except InfiniteColength as exc:
        raise InfiniteColength(f"tangent space needs finite colength: {exc}") from None


def tangent_dimension(U: GroebnerBasis, presentation_kind: str = "minimal",
                      graded: bool = False) -> TangentReport:
    """dim Hom_R(U, R^r/U)."""
    Q = _require_finite(U)
    pres = presentation(U, presentation_kind)
    sysm, _ = _tangent_system(U, Q, pres)
    if graded or all(w is not None for w in sysm.weights):
        try:
            dims = sysm.graded_dims()
        except NotHomogeneous:
            if graded:
                raise
            dims = None
    else:
        dims = None
    dim = sum(dims.values()) if dims is not None else sysm.dimension()
    return TangentReport(U.rank, len(Q), len(pres.gens), len(pres.syzygies), dim,
                         dims if graded else None)


def parity_check(report: TangentReport) -> bool:
    return report.parity_ok


@dataclass
class GradedTangentReport:
    dims: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def __getitem__(self, k: int) -> int:
        return self.dims.get(k, 0)


def _check_homogeneous(U: GroebnerBasis) -> None:
    if not U.is_homogeneous():
        raise NotHomogeneous("graded tangent spaces need homogeneous generators")


def graded_tangent(U: GroebnerBasis, presentation_kind: str = "groebner") -> GradedTangentReport:
    _check_homogeneous(U)
    Q = _require_finite(U)
    sysm, _ = _tangent_system(U, Q, presentation(U, presentation_kind))
    return GradedTangentReport(sysm.graded_dims())


@dataclass
class TNTReport:
    negative: dict[int, int]
    theta_rank: int
    has_tnt: bool

    def to_dict(self) -> dict:
        return {"negative": {str(k): v for k, v in sorted(self.negative.items())},
                "theta_rank": self.theta_rank, "has_tnt": self.has_tnt}


def _theta_vector(U: GroebnerBasis, Q: QuotientStructure, gens: Sequence[ModuleVector],
                  starts: Sequence[int], l: int) -> dict[int, object]:
    vec: dict[int, object] = {}
    for g, st in zip(gens, starts):
        nf = U.normal_form(g.derivative(l))
        for t, c in nf.terms.items():
            vec[st + Q.index[t]] = c
    return vec


def tnt_check(U: GroebnerBasis, presentation_kind: str = "groebner") -> TNTReport:
    """Trivial negative tangents: weights ≤ −2 vanish and weight −1 is
    spanned by the translation vectors g ↦ NF(∂g/∂x_l)."""
    _check_homogeneous(U)
    Q = _require_finite(U)
    pres = presentation(U, presentation_kind)
    sysm, starts = _tangent_system(U, Q, pres)
    dims = sysm.graded_dims()
    ech = Echelon(U.field)
    for l in range(U.nvars):
        th = _theta_vector(U, Q, pres.gens, starts, l)
        if not sysm.satisfies(th):
            raise AssertionError("translation vector violates a syzygy constraint")
        ech.insert(th)
    negative = {k: v for k, v in dims.items() if k < 0}
    ok = all(v == 0 for k, v in negative.items() if k <= -2) and \
        ech.rank == negative.get(-1, 0)
    return TNTReport(negative, ech.rank, ok)


# ---------------------------------------------------------------------------
# nested Hilbert schemes


@dataclass
class NestedChain:
    """Ideals I_1 ⊇ I_2 ⊇ ... ⊇ I_r, i.e. nested schemes Z_1 ⊆ ... ⊆ Z_r."""

    levels: list[GroebnerBasis]

    def __post_init__(self):
        if not self.levels:
            raise ChainError("empty chain")
        for a, b in zip(self.levels, self.levels[1:]):
            if a.rank != b.rank or a.nvars != b.nvars:
                raise ChainError("chain members live in different free modules")
            if not a.contains_all(b.gens):
                raise ChainError("chain containment violated")

    @classmethod
    def from_generators(cls, lists: Sequence[Sequence[ModuleVector]], order=None) -> "NestedChain":
        kw = {} if order is None else {"order": order}
        return cls([buchberger(gs, **kw) for gs in lists])


def _nested_system(chain: NestedChain):
    levels = chain.levels
    field = levels[0].field
    sysm = _System(field)
    quots = [_require_finite(G) for G in levels]
    pres = [presentation(G, "groebner") for G in levels]
    starts = []
    for G, Q, P in zip(levels, quots, pres):
        _, st = _tangent_system(G, Q, P, sysm)
        starts.append(st)
    for j in range(len(levels) - 1):
        lo = levels[j]
        Qlo, Qhi = quots[j], quots[j + 1]
        # projection π: R/I_{j+1} -> R/I_j on basis terms
        proj = [_coords(lo, Qlo, lo.term_normal_form(t)) for t in Qhi.basis]
        for i, h in enumerate(pres[j + 1].gens):
            rows: dict[int, dict[int, object]] = {}
            for jb, img in enumerate(proj):
                col = starts[j + 1][i] + jb
                for k, c in img.items():
                    rows.setdefault(k, {})[col] = c
            qs, rem = lo.divide(h)
            if rem:
                raise ChainError("chain containment violated")
            for k, q in enumerate(qs):
                if q:
                    _act(lo, Qlo, q, starts[j][k], rows, sign=-1)
            sysm.add_rows(rows)
    return sysm, quots, pres, starts


def nested_tangent_dimension(chain: NestedChain) -> int:
    sysm, *_ = _nested_system(chain)
    if all(w is not None for w in sysm.weights):
        try:
            return sum(sysm.graded_dims().values())
        except NotHomogeneous:
            pass
    return sysm.dimension()


def nested_graded_tangent(chain: NestedChain) -> GradedTangentReport:
    sysm, *_ = _nested_system(chain)
    return GradedTangentReport(sysm.graded_dims())


def nested_tnt_check(chain: NestedChain) -> TNTReport:
    """TNT for a homogeneous chain; the translation vectors act on every
    level simultaneously."""
    for G in chain.levels:
        _check_homogeneous(G)
    sysm, quots, pres, starts = _nested_system(chain)
    dims = sysm.graded_dims()
    ech = Echelon(chain.levels[0].field)
    for l in range(chain.levels[0].nvars):
        th: dict[int, object] = {}
        for G, Q, P, st in zip(chain.levels, quots, pres, starts):
            th.update(_theta_vector(G, Q, P.gens, st, l))
        if not sysm.satisfies(th):
            raise AssertionError("translation vector violates a constraint")
        ech.insert(th)
    negative = {k: v for k, v in dims.items() if k < 0}
    ok = all(v == 0 for k, v in negative.items() if k <= -2) and \
        ech.rank == negative.get(-1, 0)
    return TNTReport(negative, ech.rank, ok)


# ---------------------------------------------------------------------------
# support


def _rational_roots(matrix: list[list]) -> list:
    import sympy

    M = sympy.Matrix(matrix)
    lam = sympy.Symbol("lam")
    poly = M.charpoly(lam)
    _, factors = sympy.factor_list(poly.as_expr(), lam)
    roots = []
    for f, _mult in factors:
        p = sympy.Poly(f, lam)
        if p.degree() > 1:
            raise IrrationalSupport(f"characteristic polynomial has the irreducible factor {f}")
        if p.degree() == 1:
            a, b = p.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append(QQ(f"{r.p}/{r.q}"))
    return sorted(set(roots))


def support_decomposition(Q: QuotientStructure, T: MultiplicationTable) -> list[tuple[tuple, int]]:
    """Points of the support with their local lengths, sorted by point."""
    if isinstance(T.field, PrimeField):
        raise ValueError("support decomposition is implemented over QQ only")
    d = len(Q)
    if d == 0:
        return []
    mats = [T.matrix(l) for l in range(T.nvars)]
    roots = [_rational_roots(m) for m in mats]
    # refine candidate points one coordinate at a time, keeping only nonzero
    # joint generalized eigenspaces
    powered = {}

    def block(l, c):
        key = (l, c)
        if key not in powered:
            powered[key] = mat_pow(shift_diagonal(mats[l], c), d)
        return powered[key]

    points: list[tuple] = [()]
    for l in range(T.nvars):
        nxt = []
        for p in points:
            for c in roots[l]:
                q = p + (c,)
                stacked = []
                for k, v in enumerate(q):
                    stacked.extend(block(k, v))
                if matrix_rank(stacked) < d:
                    nxt.append(q)
        points = nxt
    out = []
    for p in points:
        stacked = []
        for k, v in enumerate(p):
            stacked.extend(block(k, v))
        out.append((p, d - matrix_rank(stacked)))
    if sum(length for _, length in out) != d:
        raise AssertionError("local lengths do not add up to the colength")
    return out


def support(U: GroebnerBasis) -> list[tuple[tuple, int]]:
    Q = _require_finite(U)
    return support_decomposition(Q, multiplication_table(Q, U))
