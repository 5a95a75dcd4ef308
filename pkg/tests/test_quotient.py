import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from quottangent.deform import DeformationCandidate, admissible_pairs, build_family, specialize
from quottangent.enumeration import monomial_submodules, submodule_basis
from quottangent.groebner import InfiniteColength, buchberger, quotient_structure
from quottangent.quotient import (ChainError, IrrationalSupport, NestedChain, NotHomogeneous,
                                  graded_tangent, multiplication_table, nested_graded_tangent,
                                  nested_tangent_dimension, nested_tnt_check, support,
                                  tangent_dimension, tnt_check, unit_images)
from quottangent.scalars import PrimeField

from helpers import gb, random_zero_dim_ideal, translate, vecs

XY = ("x", "y")
seeds = st.integers(0, 2**32)
BINOMIAL = ["x^2", "x*y^2", "x*y*z", "x*z^2", "y^4", "y^3*z", "y^2*z^2", "y*z^3", "z^4",
            "y^3 - x*z"]


@pytest.mark.parametrize("texts, names, rank, dim", [
    (["x", "y", "z"], ("x", "y", "z"), 1, 3),
    (["x^2", "x*y", "y^2", "x*z", "y*z", "z^2"], ("x", "y", "z"), 1, 18),
    (["x^2", "y"], XY, 1, 4),
    (["x^5"], ("x",), 1, 5),
    (["1"], XY, 1, 0),
    (["[x, 0]", "[y, 0]", "[z, 0]", "[0, 1]"], ("x", "y", "z"), 2, 4),
    (["[x, 0]", "[y, 0]", "[0, x]", "[0, y]"], XY, 2, 8),
])
def test_small_tangent_dimensions(texts, names, rank, dim):
    assert tangent_dimension(gb(texts, names=names, rank=rank)).tangent_dim == dim


def test_report_fields_and_json():
    rep = tangent_dimension(gb(BINOMIAL))
    d = rep.to_dict()
    assert list(d) == ["rank", "colength", "generators", "syzygies", "tangent_dim",
                       "parity_expected", "parity_ok"]
    assert (d["colength"], d["tangent_dim"], d["generators"]) == (12, 45, 8)
    assert rep.parity_ok is False or rep.parity_ok is True
    assert rep.to_json().startswith('{"rank":1,')


def test_infinite_colength_is_rejected():
    with pytest.raises(InfiniteColength):
        tangent_dimension(gb(["x^2"], names=XY))


def _random_chart_fiber(rng, r, d):
    charts = list(monomial_submodules(3, r, d))
    U = submodule_basis(rng.choice(charts))
    pairs = list(admissible_pairs(U, 2, 2))
    if not pairs:
        return U
    B, S = rng.choice(pairs)
    cand = DeformationCandidate.random(U, B, S, rng)
    return specialize(build_family(cand), rng.choice([1, 2, Fraction(1, 2)]))


@given(seeds, st.integers(1, 2), st.integers(1, 5))
def test_presentation_independence(seed, r, d):
    rnd = random.Random(seed)
    U = _random_chart_fiber(rnd, r, d)
    a = tangent_dimension(U, "minimal").tangent_dim
    b = tangent_dimension(U, "groebner").tangent_dim
    assert a == b


@given(seeds)
def test_linear_change_invariance(seed):
    rnd = random.Random(seed)
    gens = vecs(BINOMIAL[:-1] + ["y^3 - x*z"])
    while True:
        mat = [[rnd.randint(-1, 1) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(mat).det() != 0:
            break
    moved = buchberger([g.linear_change(mat) for g in gens])
    assert moved.colength() == 12
    assert tangent_dimension(moved).tangent_dim == 45


@given(seeds)
def test_translation_invariance(seed):
    rnd = random.Random(seed)
    shift = [rnd.randint(-2, 2) for _ in range(3)]
    moved = buchberger([translate(g, shift) for g in vecs(BINOMIAL)])
    assert tangent_dimension(moved).tangent_dim == 45


@given(st.integers(1, 2), st.integers(0, 5), seeds)
def test_graded_dimensions_sum_to_total(r, d, seed):
    rnd = random.Random(seed)
    U = submodule_basis(rnd.choice(list(monomial_submodules(3, r, d))))
    gr = graded_tangent(U)
    assert gr.total == tangent_dimension(U).tangent_dim
    rep = tangent_dimension(U, graded=True)
    assert sum(rep.graded.values()) == rep.tangent_dim


def test_graded_needs_homogeneous_input():
    with pytest.raises(NotHomogeneous):
        graded_tangent(gb(["x^2 - y", "y^2"], names=XY))


@given(seeds)
def test_multiplication_table_commutes_and_kills_generators(seed):
    rnd = random.Random(seed)
    gens, d = random_zero_dim_ideal(rnd, n=2, max_colength=6)
    G = buchberger(gens)
    Q = quotient_structure(G)
    T = multiplication_table(Q, G)
    assert T.commute()
    units = unit_images(G, Q)
    for g in gens:
        assert T.image(g, units) == {}


@given(seeds)
def test_smooth_surface_points(seed):
    rnd = random.Random(seed)
    gens, d = random_zero_dim_ideal(rnd, n=2, max_colength=6)
    assert tangent_dimension(buchberger(gens)).tangent_dim == 2 * d


def test_tnt_on_known_examples():
    rep = tnt_check(gb(["x^2", "x*y", "y^2"], names=XY))
    assert rep.negative == {-2: 0, -1: 6} and rep.theta_rank == 2 and not rep.has_tnt
    names = ("x", "y", "z", "w")
    I = gb(["x^2", "x*y", "y^2", "z^2", "z*w", "w^2", "x*z - y*w"], names=names)
    assert tnt_check(I).has_tnt
    m = gb(["x", "y", "z", "w"], names=names)
    nested = nested_tnt_check(NestedChain([m, I]))
    assert not nested.has_tnt and nested.theta_rank == 4


def test_nested_single_and_repeated_levels():
    I = gb(BINOMIAL)
    assert nested_tangent_dimension(NestedChain([I])) == 45
    assert nested_tangent_dimension(NestedChain([I, I])) == 45
    J = gb(["x^2", "x*y", "y^2"], names=XY)
    assert nested_graded_tangent(NestedChain([J, J])).dims == graded_tangent(J).dims


def test_nested_point_in_a_fat_point():
    # (m ⊇ m^2) in the plane: the compatibility conditions only involve the
    # constant parts of φ2, which vanish anyway, so dim = 2 + 6
    m = gb(["x", "y"], names=XY)
    m2 = gb(["x^2", "x*y", "y^2"], names=XY)
    assert nested_tangent_dimension(NestedChain([m, m2])) == 8
    assert nested_graded_tangent(NestedChain([m, m2])).dims == {-2: 0, -1: 8}


def test_chain_containment_enforced():
    with pytest.raises(ChainError):
        NestedChain([gb(["x^2", "y"], names=XY), gb(["x", "y"], names=XY)])


def test_support_points_and_lengths():
    pts = support(gb(["x^2 - x", "y"], names=XY))
    assert pts == [((0, 0), 1), ((1, 0), 1)]
    pts = support(gb(["(x - 1)^2", "y^3"], names=XY))
    assert pts == [((1, 0), 6)]
    with pytest.raises(IrrationalSupport) as info:
        support(gb(["x^2 - 2", "y"], names=XY))
    assert info.value.code == "IRRATIONAL_SUPPORT"


@given(seeds)
def test_support_lengths_sum_to_colength(seed):
    rnd = random.Random(seed)
    from quottangent.groebner import intersect
    k = rnd.randint(1, 3)
    points = rnd.sample([(a, b) for a in range(-2, 3) for b in range(-2, 3)], k)
    acc = None
    total = 0
    for p in points:
        gens, d = random_zero_dim_ideal(rnd, n=2, max_colength=3)
        # random_zero_dim_ideal moves the support; translate it back to a known point
        G0 = buchberger(gens)
        (q, _), = support(G0)
        G = buchberger([translate(g, (q[0] - p[0], q[1] - p[1])) for g in gens])
        acc = G if acc is None else intersect(acc, G)
        total += d
    pts = support(acc)
    assert sum(l for _, l in pts) == acc.colength() == total
    assert sorted(p for p, _ in pts) == sorted(points)


def test_prime_field_agrees_on_binomial_ideal():
    F = PrimeField(1_000_003)
    assert tangent_dimension(gb(BINOMIAL, field=F)).tangent_dim == 45
