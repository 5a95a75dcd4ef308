"""Socle-supported deformations of monomial submodules and module constructions.

For a monomial submodule U with minimal generators B_U and socle S_U, pick
B ⊆ B_U and S ⊆ S_U with x_l·s ∉ B for every s ∈ S and every variable.
Then φ(b) = Σ_s γ_{b,s} s (b ∈ B, zero elsewhere) is a tangent vector, and
the generators b − t·φ(b) define a flat family over the t-line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Mapping, Sequence

from .groebner import (GroebnerBasis, buchberger, intersect, module_kernel,
                       quotient_structure)
from .poly import DEFAULT_ORDER, ModuleVector, Term, monomial_lcm, one, variable


class InadmissibleCandidate(ValueError):
    pass


class SupportCollision(ValueError):
    """The added point lies in the support of the module."""

    code = "SUPPORT_COLLISION"


def _term_vector(t: Term, rank: int, nvars: int, field, coef=None) -> ModuleVector:
    return ModuleVector({t: field.one if coef is None else coef}, rank, nvars, field)


def generator_terms(U: GroebnerBasis) -> list[Term]:
    """Lead terms of the minimal generators of a monomial submodule."""
    if not U.is_monomial:
        raise ValueError("expected a monomial submodule")
    return [g.lead_term(U.order) for g in U.gens]


def socle_terms(U: GroebnerBasis) -> list[Term]:
    return quotient_structure(U).socle


def is_admissible(B: Sequence[Term], S: Sequence[Term], nvars: int,
                  generators: Sequence[Term] | None = None) -> bool:
    """x_l·s ∉ B for all s ∈ S and all variables.

    With ``generators`` (the minimal generators B_U) it is also required that
    every x_l·s is a multiple of a generator outside B.  This is what makes
    each syzygy of B_U lift to the family; without it the family can fail to
    be flat, e.g. U = (x^3, y^2, xz, yz, z^2), B = {x^3, y^2}, S = {x^2 y}.
    """
    Bs = set(B)
    rest = None if generators is None else [g for g in generators if g not in Bs]
    for comp, m in S:
        for l in range(nvars):
            xm = m[:l] + (m[l] + 1,) + m[l + 1:]
            if (comp, xm) in Bs:
                return False
            if rest is not None and not any(
                    c == comp and all(a <= b for a, b in zip(g, xm)) for c, g in rest):
                return False
    return True


def _subsets(items: Sequence, max_size: int) -> Iterator[tuple]:
    for k in range(1, min(max_size, len(items)) + 1):
        yield from itertools.combinations(items, k)


def admissible_pairs(U: GroebnerBasis, max_b: int | None = None,
                     max_s: int | None = None) -> Iterator[tuple[tuple[Term, ...], tuple[Term, ...]]]:
    """Admissible (B, S), ordered by |B|, then the B subset, then by |S| and
    the S subset (subsets in combination order of the sorted term lists)."""
    B_U = generator_terms(U)
    S_U = socle_terms(U)
    max_b = len(B_U) if max_b is None else max_b
    max_s = len(S_U) if max_s is None else max_s
    for B in _subsets(B_U, max_b):
        for S in _subsets(S_U, max_s):
            if is_admissible(B, S, U.nvars, B_U):
                yield B, S


@dataclass
class DeformationCandidate:
    """Monomial U with B ⊆ B_U, S ⊆ S_U and coefficients γ_{b,s}."""

    U: GroebnerBasis
    B: tuple[Term, ...]
    S: tuple[Term, ...]
    gamma: dict[tuple[Term, Term], object] = dc_field(default_factory=dict)

    def check(self) -> None:
        B_U = set(generator_terms(self.U))
        S_U = set(socle_terms(self.U))
        if not set(self.B) <= B_U:
            raise InadmissibleCandidate("B is not a subset of the minimal generators")
        if not set(self.S) <= S_U:
            raise InadmissibleCandidate("S is not a subset of the socle")
        if not is_admissible(self.B, self.S, self.U.nvars):
            raise InadmissibleCandidate("some x_l·s lies in B")
        if not is_admissible(self.B, self.S, self.U.nvars, generator_terms(self.U)):
            raise InadmissibleCandidate("some x_l·s is a multiple of generators in B only")

    def phi(self, b: Term) -> ModuleVector:
        """φ(b) = Σ_s γ_{b,s} s as a vector of R^r."""
        U = self.U
        terms = {}
        if b in self.B:
            for s in self.S:
                c = self.gamma.get((b, s), 0)
                if c:
                    terms[s] = c
        return ModuleVector(terms, U.rank, U.nvars, U.field)

    @classmethod
    def random(cls, U: GroebnerBasis, B, S, rng, values=(-3, -2, -1, 1, 2, 3)):
        gamma = {(b, s): U.field(rng.choice(values)) for b in B for s in S}
        return cls(U, tuple(B), tuple(S), gamma)


@dataclass
class ParametricFamily:
    """Generators over k[x_1..x_n, t] (t is the last variable)."""

    gens: list[ModuleVector]
    base: GroebnerBasis | None
    colength: int

    @property
    def nvars(self) -> int:
        return self.gens[0].nvars - 1


def build_family(c: DeformationCandidate) -> ParametricFamily:
    """(B_U \\ B) ∪ {b − t·φ(b) : b ∈ B}, listed in the order of B_U."""
    c.check()
    U = c.U
    n, r, field = U.nvars, U.rank, U.field
    t = ModuleVector({(0, (0,) * n + (1,)): field.one}, 1, n + 1, field, _trusted=True)
    gens = []
    for b in generator_terms(U):
        g = _term_vector(b, r, n, field).with_nvars(n + 1)
        if b in c.B:
            g = g - c.phi(b).with_nvars(n + 1) * t
        gens.append(g)
    return ParametricFamily(gens, U, U.colength())


def perturbation_family(U: GroebnerBasis, generators: Sequence[ModuleVector],
                        changes: Mapping[int, ModuleVector]) -> ParametricFamily:
    """Generators g_i + t·changes[i] (others unchanged)."""
    n, field = U.nvars, U.field
    t = ModuleVector({(0, (0,) * n + (1,)): field.one}, 1, n + 1, field, _trusted=True)
    gens = []
    for i, g in enumerate(generators):
        h = g.with_nvars(n + 1)
        if i in changes:
            h = h + changes[i].with_nvars(n + 1) * t
        gens.append(h)
    return ParametricFamily(gens, U, U.colength())


def fiber_generators(f: ParametricFamily, c) -> list[ModuleVector]:
    n = f.nvars
    return [g.substitute(n, c) for g in f.gens]


def specialize(f: ParametricFamily, c, order=DEFAULT_ORDER) -> GroebnerBasis:
    """Gröbner basis of the fiber at t = c."""
    gens = fiber_generators(f, c)
    g0 = gens[0]
    return buchberger(gens, order, rank=g0.rank, nvars=g0.nvars, field=g0.field)


def flatness_probe(f: ParametricFamily, samples: Sequence = (0, 1, 2, 5)) -> bool:
    """Equal fiber colength at every sample, equal to the declared one."""
    if not samples:
        raise ValueError("need at least one sample")
    return all(specialize(f, c).colength() == f.colength for c in samples)


def _monomial_syzygies(terms: Sequence[Term], nvars: int):
    """Pairwise syzygies (m_j, −m_i) of monomial terms in one component."""
    for i, j in itertools.combinations(range(len(terms)), 2):
        (ci, a), (cj, b) = terms[i], terms[j]
        if ci != cj:
            continue
        L = monomial_lcm(a, b)
        yield i, tuple(x - y for x, y in zip(L, a)), j, tuple(x - y for x, y in zip(L, b))


def first_order_check(c: DeformationCandidate) -> bool:
    """φ respects every syzygy of B_U modulo U, i.e. lies in Hom(U, R^r/U)."""
    U = c.U
    B_U = generator_terms(U)
    for i, mi, j, mj in _monomial_syzygies(B_U, U.nvars):
        v = c.phi(B_U[i]).shift(mi) - c.phi(B_U[j]).shift(mj)
        if U.normal_form(v):
            return False
    return True


def lift_check(c: DeformationCandidate) -> bool:
    """Every syzygy of B_U lifts to a syzygy of the family over k[t].

    For a syzygy (P_b) the vector Σ P_b φ(b) is divided by the unchanged
    generators B_U \\ B giving Q_b; then P_b + t·Q_b must be a syzygy of the
    family generators, which is verified by exact expansion.
    """
    U = c.U
    fam = build_family(c)
    n, r, field = U.nvars, U.rank, U.field
    B_U = generator_terms(U)
    fixed = [k for k, b in enumerate(B_U) if b not in c.B]
    if fixed:
        F = buchberger([_term_vector(B_U[k], r, n, field) for k in fixed], U.order)
    t = ModuleVector({(0, (0,) * n + (1,)): field.one}, 1, n + 1, field, _trusted=True)
    zero = ModuleVector.zero(1, n + 1, field)
    for i, mi, j, mj in _monomial_syzygies(B_U, n):
        P = {i: ModuleVector.monomial_term(0, mi + (0,), 1, field),
             j: ModuleVector.monomial_term(0, mj + (0,), 1, field, coef=-1)}
        v = c.phi(B_U[i]).shift(mi) - c.phi(B_U[j]).shift(mj)
        lifted = dict(P)
        if v:
            if not fixed:
                return False
            qs, rem = F.divide(v)
            if rem:
                return False
            # F's elements are exactly the fixed generators (monomial, reduced)
            for q, g in zip(qs, F.gens):
                k = B_U.index(g.lead_term(U.order))
                lifted[k] = lifted.get(k, zero) + q.with_nvars(n + 1) * t
        total = ModuleVector.zero(r, n + 1, field)
        for k, p in lifted.items():
            total = total + fam.gens[k] * p
        if total:
            return False
    return True


# ---------------------------------------------------------------------------
# constructions


def increase_rank(M: GroebnerBasis) -> GroebnerBasis:
    """M ⊕ R ⊂ R^(r+1): the quotient is unchanged."""
    r, n, field = M.rank, M.nvars, M.field
    gens = [g.embed(r + 1) for g in M.gens]
    gens.append(ModuleVector.basis(r, r + 1, n, field))
    return buchberger(gens, M.order)


def point_ideal(p: Sequence, nvars: int, field) -> list[ModuleVector]:
    return [ModuleVector({(0, variable(nvars, l)): field.one, (0, one(nvars)): -field(p[l])},
                         1, nvars, field) for l in range(nvars)]


def add_disjoint_point(M: GroebnerBasis, p: Sequence) -> GroebnerBasis:
    """M ∩ (m_p e_1 ⊕ R e_2 ⊕ ... ⊕ R e_r); colength goes up by one."""
    r, n, field = M.rank, M.nvars, M.field
    if len(p) != n:
        raise ValueError(f"point has {len(p)} coordinates, ring has {n} variables")
    gens = [q.embed(r) for q in point_ideal(p, n, field)]
    gens += [ModuleVector.basis(i, r, n, field) for i in range(1, r)]
    N = buchberger(gens, M.order)
    K = intersect(M, N)
    d = M.colength()
    if K.colength() != d + 1:
        raise SupportCollision(f"point {tuple(p)} meets the support (colength {K.colength()}, expected {d + 1})")
    return K


def ideal_quotient_module(J: Sequence[ModuleVector], I: Sequence[ModuleVector] | GroebnerBasis):
    """Presentation R^s/K ≅ (J + I)/I, with K the kernel of e_i ↦ g_i.

    The g_i are the minimal monomial generators of J when J is monomial,
    otherwise the given list.
    """
    GI = I if isinstance(I, GroebnerBasis) else buchberger(list(I))
    J = [g for g in J if g]
    if J and all(g.is_monomial() for g in J):
        gens = list(buchberger(J).gens)
    else:
        gens = list(J)
    K = module_kernel(gens, GI)
    return K, K.colength()
