from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from quottangent.linalg import Echelon, mat_mul, mat_pow, matrix_rank, rank, shift_diagonal, identity
from quottangent.scalars import PrimeField, QQ

entries = st.fractions(-4, 4, max_denominator=3)
matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=1, max_size=7))


@given(matrices)
def test_rank_matches_sympy(m):
    assert matrix_rank(m) == sympy.Matrix(m).rank()


@given(matrices)
def test_prime_field_rank_never_exceeds_rational_rank(m):
    p = PrimeField(1_000_003)
    assert matrix_rank(m, p) <= matrix_rank(m)


def test_prime_field_rank_can_drop():
    m = [[1, 1], [1, 8]]
    assert matrix_rank(m) == 2
    assert matrix_rank(m, PrimeField(7)) == 1


@given(matrices, st.lists(entries, min_size=1, max_size=7))
def test_in_span_of_combinations(m, coeffs):
    ech = Echelon()
    for row in m:
        ech.insert({j: v for j, v in enumerate(row) if v})
    combo = {}
    for c, row in zip(coeffs, m):
        for j, v in enumerate(row):
            combo[j] = combo.get(j, 0) + c * v
    assert ech.in_span({j: v for j, v in combo.items() if v})


def test_insert_reports_rank_growth():
    ech = Echelon(QQ)
    assert ech.insert({0: Fraction(1, 2), 3: 2})
    assert not ech.insert({0: 1, 3: 4})
    assert ech.insert({1: 1})
    assert ech.rank == 2
    assert rank([{0: 1}, {0: 2}, {}]) == 1


def test_matrix_helpers():
    a = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    assert mat_pow(a, 5) == [[1, 5], [0, 1]]
    assert mat_mul(a, identity(2)) == a
    assert shift_diagonal(a, 1) == [[0, 1], [0, 0]]
    assert mat_pow(a, 0) == identity(2)
