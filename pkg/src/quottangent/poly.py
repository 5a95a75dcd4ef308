"""Monomials, term orders and sparse vectors of the free module R^r.

A monomial is a plain tuple of non-negative exponents.  A monomial term
``m e_i`` is the pair ``(i, m)`` with a 0-based component index.  A
:class:`ModuleVector` is a dict from terms to nonzero coefficients; vectors
of rank 1 double as polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from operator import add, sub
from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import QQ, Field

Monomial = tuple[int, ...]
Term = tuple[int, Monomial]

LT, EQ, GT = -1, 0, 1


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) != len(b):
        raise ValueError(f"monomials in {len(a)} and {len(b)} variables")
    return tuple(map(add, a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    """Return a / b; assumes b divides a."""
    return tuple(map(sub, a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def monomial_deg(a: Monomial) -> int:
    return sum(a)


def one(n: int) -> Monomial:
    return (0,) * n


def variable(n: int, i: int) -> Monomial:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def term_divides(a: Term, b: Term) -> bool:
    """True iff ``a`` divides ``b``: same component, exponents bounded."""
    if len(a[1]) != len(b[1]):
        raise ValueError("terms over different numbers of variables")
    return a[0] == b[0] and monomial_divides(a[1], b[1])


class TermOrder:
    """A global monomial order extended to terms of R^r.

    ``variables`` is ``degrevlex``, ``deglex`` or ``lex``.  ``module`` is
    ``pot`` (position over term, e_1 > e_2 > ...) or ``top``.  ``priority``
    lists variable indices from the largest to the smallest; default is the
    declaration order.  With ``elim = k`` the first ``k`` variables (in
    priority order) form a block compared before anything else, including
    the component, which makes the order an elimination order for them.
    """

    __slots__ = ("variables", "module", "priority", "elim", "_cache", "_rcache")

    def __init__(self, variables: str = "degrevlex", module: str = "pot",
                 priority: Sequence[int] | None = None, elim: int = 0):
        if variables not in ("degrevlex", "deglex", "lex"):
            raise ValueError(f"unknown variable order {variables!r}")
        if module not in ("pot", "top"):
            raise ValueError(f"unknown module order {module!r}")
        self.variables = variables
        self.module = module
        self.priority = tuple(priority) if priority is not None else None
        self.elim = elim
        self._cache: dict[Term, tuple] = {}
        self._rcache: dict[Term, tuple] = {}

    def _spec(self):
        return (self.variables, self.module, self.priority, self.elim)

    def __eq__(self, other):
        return isinstance(other, TermOrder) and self._spec() == other._spec()

    def __hash__(self):
        return hash(self._spec())

    def __repr__(self):
        extra = ""
        if self.priority is not None:
            extra += f", priority={self.priority}"
        if self.elim:
            extra += f", elim={self.elim}"
        return f"TermOrder({self.variables!r}, {self.module!r}{extra})"

    def __getstate__(self):
        return self._spec()

    def __setstate__(self, state):
        self.variables, self.module, self.priority, self.elim = state
        self._cache = {}
        self._rcache = {}

    def _block_key(self, e: Sequence[int]) -> tuple:
        if self.variables == "lex":
            return tuple(e)
        if self.variables == "deglex":
            return (sum(e), *e)
        return (sum(e), *(-x for x in reversed(e)))

    def key(self, term: Term) -> tuple:
        """Sort key: ``s < t`` in the order iff ``key(s) < key(t)``."""
        k = self._cache.get(term)
        if k is None:
            comp, mono = term
            e = mono if self.priority is None else tuple(mono[i] for i in self.priority)
            pos = (-comp,)
            if self.elim:
                k = self._block_key(e[:self.elim]) + pos + self._block_key(e[self.elim:])
            elif self.module == "pot":
                k = pos + self._block_key(e)
            else:
                k = self._block_key(e) + pos
            self._cache[term] = k
        return k

    def rkey(self, term: Term) -> tuple:
        """Negated key, so that a min-heap pops the largest term first."""
        k = self._rcache.get(term)
        if k is None:
            k = tuple(-x for x in self.key(term))
            self._rcache[term] = k
        return k

    def compare(self, s: Term, t: Term) -> int:
        ks, kt = self.key(s), self.key(t)
        return GT if ks > kt else LT if ks < kt else EQ


DEFAULT_ORDER = TermOrder()


def compare(order: TermOrder, s: Term, t: Term) -> int:
    return order.compare(s, t)


class ModuleVector:
    """An element of R^r with coefficients in an exact field.

    Instances are treated as immutable.  Zero coefficients are never stored.
    """

    __slots__ = ("terms", "rank", "nvars", "field", "_hash")

    def __init__(self, terms: Mapping[Term, object] | Iterable[tuple[Term, object]],
                 rank: int, nvars: int, field: Field = QQ, *, _trusted: bool = False):
        self.rank = rank
        self.nvars = nvars
        self.field = field
        self._hash = None
        if _trusted:
            self.terms = dict(terms)
            return
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[Term, object] = {}
        for (comp, mono), c in items:
            if not 0 <= comp < rank:
                raise ValueError(f"component e{comp + 1} outside rank {rank}")
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} is not in {nvars} variables")
            c = field(c)
            key = (comp, tuple(mono))
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        self.terms = out

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, rank: int, nvars: int, field: Field = QQ) -> "ModuleVector":
        return cls({}, rank, nvars, field, _trusted=True)

    @classmethod
    def monomial_term(cls, comp: int, mono: Monomial, rank: int, field: Field = QQ,
                      coef=1) -> "ModuleVector":
        return cls({(comp, tuple(mono)): coef}, rank, len(mono), field)

    @classmethod
    def basis(cls, comp: int, rank: int, nvars: int, field: Field = QQ) -> "ModuleVector":
        return cls({(comp, one(nvars)): field.one}, rank, nvars, field, _trusted=True)

    @classmethod
    def from_components(cls, polys: Sequence["ModuleVector"]) -> "ModuleVector":
        """Stack rank-1 vectors into a vector of rank ``len(polys)``."""
        first = polys[0]
        terms = {}
        for i, p in enumerate(polys):
            for (_, m), c in p.terms.items():
                terms[(i, m)] = c
        return cls(terms, len(polys), first.nvars, first.field, _trusted=True)

    def _new(self, terms: dict, rank: int | None = None) -> "ModuleVector":
        return ModuleVector(terms, self.rank if rank is None else rank,
                            self.nvars, self.field, _trusted=True)

    # queries ---------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return (self.rank == other.rank and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        from .grammar import format_vector
        return f"ModuleVector({format_vector(self)!r})"

    def sorted_terms(self, order: TermOrder = DEFAULT_ORDER) -> list[tuple[Term, object]]:
        """Terms in descending order."""
        return sorted(self.terms.items(), key=lambda tc: order.key(tc[0]), reverse=True)

    def lead_term(self, order: TermOrder = DEFAULT_ORDER) -> Term:
        if not self.terms:
            raise ValueError("zero vector has no lead term")
        return max(self.terms, key=order.key)

    def lead_coefficient(self, order: TermOrder = DEFAULT_ORDER):
        return self.terms[self.lead_term(order)]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def components(self) -> set[int]:
        return {c for c, _ in self.terms}

    def component(self, i: int) -> "ModuleVector":
        """The i-th coordinate as a rank-1 polynomial."""
        return ModuleVector({(0, m): c for (j, m), c in self.terms.items() if j == i},
                            1, self.nvars, self.field, _trusted=True)

    def degree(self) -> int:
        return max((sum(m) for _, m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for _, m in self.terms}) <= 1

    def variable_degree(self, i: int) -> int:
        return max((m[i] for _, m in self.terms), default=0)

    def constant(self):
        """Constant coefficient of a rank-1 polynomial."""
        return self.terms.get((0, one(self.nvars)), self.field.zero)

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "ModuleVector"):
        if self.rank != other.rank or self.nvars != other.nvars:
            raise ValueError("vectors live in different free modules")

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            s = out.get(t)
            if s is None:
                out[t] = c
            else:
                s = s + c
                if s:
                    out[t] = s
                else:
                    del out[t]
        return self._new(out)

    def __neg__(self) -> "ModuleVector":
        return self._new({t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + (-other)

    def scale(self, c) -> "ModuleVector":
        c = self.field(c)
        if not c:
            return self._new({})
        return self._new({t: c * a for t, a in self.terms.items()})

    def shift(self, mono: Monomial) -> "ModuleVector":
        """Multiply by the monomial ``mono``."""
        return self._new({(i, monomial_mul(m, mono)): c for (i, m), c in self.terms.items()})

    def __mul__(self, poly: "ModuleVector") -> "ModuleVector":
        """Multiply by a polynomial (a rank-1 vector)."""
        if not isinstance(poly, ModuleVector):
            return self.scale(poly)
        if poly.rank != 1 or poly.nvars != self.nvars:
            raise ValueError("right factor must be a polynomial in the same ring")
        out: dict[Term, object] = {}
        for (_, pm), pc in poly.terms.items():
            for (i, m), c in self.terms.items():
                t = (i, monomial_mul(m, pm))
                s = out.get(t)
                s = pc * c if s is None else s + pc * c
                if s:
                    out[t] = s
                else:
                    out.pop(t, None)
        return self._new(out)

    __rmul__ = __mul__

    def monic(self, order: TermOrder = DEFAULT_ORDER) -> "ModuleVector":
        if not self.terms:
            return self
        return self.scale(self.field.one / self.lead_coefficient(order))

    def embed(self, rank: int, offset: int = 0) -> "ModuleVector":
        """Re-embed into R^rank, shifting component indices by ``offset``."""
        return ModuleVector({(i + offset, m): c for (i, m), c in self.terms.items()},
                            rank, self.nvars, self.field)

    def project(self, comps: Sequence[int]) -> "ModuleVector":
        """Keep the listed components, renumbered in the listed order."""
        where = {c: k for k, c in enumerate(comps)}
        return ModuleVector({(where[i], m): c for (i, m), c in self.terms.items() if i in where},
                            len(comps), self.nvars, self.field, _trusted=True)

    def with_nvars(self, nvars: int) -> "ModuleVector":
        """Append dummy variables (exponent 0) up to ``nvars``."""
        pad = (0,) * (nvars - self.nvars)
        return ModuleVector({(i, m + pad): c for (i, m), c in self.terms.items()},
                            self.rank, nvars, self.field, _trusted=True)

    def drop_last_variables(self, k: int) -> "ModuleVector":
        """Forget the last ``k`` variables; they must not occur."""
        n = self.nvars - k
        out = {}
        for (i, m), c in self.terms.items():
            if any(m[n:]):
                raise ValueError("vector involves a variable being dropped")
            out[(i, m[:n])] = c
        return ModuleVector(out, self.rank, n, self.field, _trusted=True)

    def substitute(self, var: int, value) -> "ModuleVector":
        """Set variable ``var`` to a scalar and remove it from the ring."""
        value = self.field(value)
        out: dict[Term, object] = {}
        for (i, m), c in self.terms.items():
            k = m[var]
            t = (i, m[:var] + m[var + 1:])
            v = c * value ** k if k else c
            s = out.get(t)
            s = v if s is None else s + v
            if s:
                out[t] = s
            else:
                out.pop(t, None)
        return ModuleVector(out, self.rank, self.nvars - 1, self.field, _trusted=True)

    def evaluate(self, point: Sequence) -> list:
        """Evaluate every component at a point of the affine space."""
        point = [self.field(v) for v in point]
        vals = [self.field.zero] * self.rank
        for (i, m), c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x ** e
            vals[i] = vals[i] + v
        return vals

    def derivative(self, var: int) -> "ModuleVector":
        out: dict[Term, object] = {}
        for (i, m), c in self.terms.items():
            k = m[var]
            if k:
                mm = m[:var] + (k - 1,) + m[var + 1:]
                out[(i, mm)] = c * k
        return self._new({t: c for t, c in out.items() if c})

    def change_field(self, field: Field) -> "ModuleVector":
        return ModuleVector(self.terms, self.rank, self.nvars, field)

    def linear_change(self, matrix: Sequence[Sequence]) -> "ModuleVector":
        """Substitute x_j -> sum_k matrix[j][k] x_k."""
        n = self.nvars
        images = [ModuleVector({(0, variable(n, k)): a for k, a in enumerate(row) if a},
                               1, n, self.field) for row in matrix]
        unit = ModuleVector.basis(0, 1, n, self.field)
        out = ModuleVector.zero(self.rank, n, self.field)
        powers: dict[tuple[int, int], ModuleVector] = {}

        def power(j: int, k: int) -> ModuleVector:
            if k == 0:
                return unit
            p = powers.get((j, k))
            if p is None:
                p = power(j, k - 1) * images[j]
                powers[(j, k)] = p
            return p

        for (i, m), c in self.terms.items():
            prod = unit.scale(c)
            for j, k in enumerate(m):
                if k:
                    prod = prod * power(j, k)
            out = out + prod.embed(self.rank, i)
        return out


@dataclass(frozen=True)
class Ring:
    """Context for reading and printing: variable names, rank, field, parameter."""

    variables: tuple[str, ...]
    rank: int = 1
    field: Field = QQ
    param: str | None = None
    order: TermOrder = dc_field(default=DEFAULT_ORDER, compare=False)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def all_variables(self) -> tuple[str, ...]:
        """Variables including the deformation parameter, placed last."""
        return self.variables + ((self.param,) if self.param else ())

    @property
    def nvars(self) -> int:
        return len(self.all_variables)

    def with_rank(self, rank: int) -> "Ring":
        return Ring(self.variables, rank, self.field, self.param, self.order)

    def base(self) -> "Ring":
        return Ring(self.variables, self.rank, self.field, None, self.order)

    def with_field(self, field: Field) -> "Ring":
        return Ring(self.variables, self.rank, field, self.param, self.order)


def monomials_of_degree(n: int, d: int) -> Iterator[Monomial]:
    """All exponent vectors of total degree ``d`` in ``n`` variables."""
    for bars in combinations(range(d + n - 1), n - 1):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(d + n - 2 - prev)
        yield tuple(e)
