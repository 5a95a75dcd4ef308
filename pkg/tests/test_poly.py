from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quottangent.poly import (DEFAULT_ORDER, EQ, GT, LT, ModuleVector, TermOrder,
                              monomial_lcm, monomials_of_degree, term_divides)
from quottangent.scalars import QQ

from helpers import module_vectors, polynomials, small_monomial, vecs

ORDERS = [TermOrder(v, m) for v in ("degrevlex", "deglex", "lex") for m in ("pot", "top")]

terms2 = st.tuples(st.integers(0, 1), small_monomial(3, 3))


def test_degrevlex_small_cases():
    o = DEFAULT_ORDER
    # x > y > z; x*z < y^2 in degrevlex
    assert o.compare((0, (1, 0, 1)), (0, (0, 2, 0))) == LT
    assert o.compare((0, (1, 0, 0)), (0, (0, 1, 0))) == GT
    assert o.compare((0, (0, 0, 2)), (0, (1, 0, 0))) == GT
    assert TermOrder("lex").compare((0, (1, 0, 0)), (0, (0, 3, 0))) == GT


def test_pot_and_top():
    pot, top = TermOrder("degrevlex", "pot"), TermOrder("degrevlex", "top")
    a, b = (0, (0, 0, 0)), (1, (2, 0, 0))
    # position over term: e1 beats everything in e2
    assert pot.compare(a, b) == GT
    assert top.compare(a, b) == LT
    assert pot.compare(a, a) == EQ


@pytest.mark.parametrize("order", ORDERS, ids=repr)
@given(a=terms2, b=terms2, m=small_monomial(3, 2))
def test_order_is_monomial_order(order, a, b, m):
    """Total, compatible with multiplication, 1 is smallest in each component."""
    ka, kb = order.key(a), order.key(b)
    assert (ka == kb) == (a == b)
    sa = (a[0], tuple(x + y for x, y in zip(a[1], m)))
    sb = (b[0], tuple(x + y for x, y in zip(b[1], m)))
    if ka < kb:
        assert order.key(sa) < order.key(sb)
    assert order.key((a[0], (0, 0, 0))) <= ka
    assert order.rkey(a) == tuple(-x for x in ka)


def test_elimination_order_puts_block_first():
    elim = TermOrder("degrevlex", "pot", priority=(2, 0, 1), elim=1)
    # anything involving the eliminated variable beats anything without it
    assert elim.compare((1, (0, 0, 1)), (0, (5, 5, 0))) == GT


def test_monomial_helpers():
    assert monomial_lcm((2, 0, 1), (1, 3, 0)) == (2, 3, 1)
    assert term_divides((0, (1, 0, 0)), (0, (2, 1, 0)))
    assert not term_divides((1, (1, 0, 0)), (0, (2, 1, 0)))
    assert sorted(monomials_of_degree(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(monomials_of_degree(3, 4))) == 15


def test_zero_coefficients_are_dropped():
    v = ModuleVector({(0, (1, 0)): 1, (0, (0, 1)): 0}, 1, 2, QQ)
    assert len(v) == 1
    assert not (v - v)


def test_bad_terms_rejected():
    with pytest.raises(ValueError):
        ModuleVector({(2, (1, 0)): 1}, 2, 2)
    with pytest.raises(ValueError):
        ModuleVector({(0, (1, 0, 0)): 1}, 1, 2)


@given(module_vectors(), module_vectors(), module_vectors())
def test_module_addition_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a - a == ModuleVector.zero(2, 2)


@given(module_vectors(), polynomials(), polynomials())
def test_scalar_multiplication_distributes(v, p, q):
    assert v * (p + q) == v * p + v * q
    assert (v * p) * q == v * (p * q)


@given(polynomials(), polynomials())
def test_derivative_leibniz(p, q):
    for l in range(2):
        assert (p * q).derivative(l) == p.derivative(l) * q + p * q.derivative(l)


@given(polynomials(), st.integers(-3, 3))
def test_substitute_matches_evaluate(p, c):
    sub = p.substitute(0, c)
    assert sub.nvars == 1
    for y in (-1, 0, 2):
        assert sub.evaluate([y]) == p.evaluate([c, y])


def test_embed_project_round_trip():
    v = vecs(["[x, y^2]"], rank=2)[0]
    w = v.embed(4, 1)
    assert w.rank == 4 and w.components() == {1, 2}
    assert w.project([1, 2]) == v


def test_linear_change_swaps_variables():
    p = vecs(["x^2 + 3*y"], names=("x", "y"))[0]
    swapped = p.linear_change([[0, 1], [1, 0]])
    assert swapped == vecs(["y^2 + 3*x"], names=("x", "y"))[0]


def test_lead_term_and_homogeneity():
    v = vecs(["x*z + y^2 - 1"])[0]
    assert v.lead_term() == (0, (0, 2, 0))
    assert v.degree() == 2 and not v.is_homogeneous()
    assert v.monic().lead_coefficient() == 1
    assert vecs(["2*x"])[0].monic() == vecs(["x"])[0]
    assert vecs(["-1/2*y"])[0].lead_coefficient() == Fraction(-1, 2)
