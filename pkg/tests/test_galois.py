import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rscodes.errors import DivideByZero, NotMinimalPolynomial, NotPrime
from rscodes.galois import DEFAULT_POLYS, GaloisField, element_table, field_new, is_prime, parse_poly


def clmul_mod(a, b, poly, m):
    """Schoolbook carry-less product reduced by poly; independent of the log tables."""
    acc = 0
    for i in range(m):
        if b >> i & 1:
            acc ^= a << i
    for d in range(2 * m - 2, m - 1, -1):
        if acc >> d & 1:
            acc ^= poly << (d - m)
    return acc


def test_prime_field_powers_of_three():
    F = field_new("prime", 7)
    assert F.alpha == 3
    assert [F.pow(3, i) for i in range(1, 7)] == [3, 2, 6, 4, 5, 1]
    assert F.mul(3, 5) == 1
    assert [F.inv(F.pow(3, i)) for i in range(1, 7)] == [5, 4, 6, 2, 3, 1]


def test_gf8_element_table():
    F = field_new("binary", 3, "1+X+X^3")
    assert [F.alpha_pow(i) for i in range(1, 8)] == [2, 4, 3, 6, 7, 5, 1]
    rows = element_table(F)
    assert [r["tuple"] for r in rows] == ["010", "001", "110", "011", "111", "101", "100"]
    assert [r["polynomial"] for r in rows] == ["X", "X^2", "1+X", "X+X^2", "1+X+X^2", "1+X^2", "1"]
    assert [r["inverse"] for r in rows] == ["a^6", "a^5", "a^4", "a^3", "a^2", "a^1", "1"]


def test_gf8_arith_examples():
    F = GaloisField.binary(3)
    a = F.alpha_pow
    assert F.inv(a(2)) == a(5)
    assert F.add(a(3), a(5)) == 4 == a(2)
    assert F.arith("add", 5, 0) == 5


def test_rejects_non_minimal_and_composite():
    with pytest.raises(NotMinimalPolynomial):
        GaloisField.binary(3, 0b1111)
    with pytest.raises(NotMinimalPolynomial):
        GaloisField.binary(4, "1+X+X^2+X^3+X^4")  # irreducible but X has order 5
    with pytest.raises(NotPrime):
        GaloisField.prime(9)
    with pytest.raises(DivideByZero):
        GaloisField.binary(4).inv(0)


def test_parse_poly_forms():
    assert parse_poly("1+X+X^3") == parse_poly("x^3+x+1") == parse_poly("1+X+X³") == parse_poly("0b1011") == 11


@pytest.mark.parametrize("m", sorted(DEFAULT_POLYS))
def test_default_polys_primitive(m):
    F = GaloisField.binary(m)
    assert F.alpha_pow(F.order) == 1
    assert len(set(F.exp_table[: F.order])) == F.order


@pytest.mark.parametrize("m", range(1, 9))
def test_multiplication_matches_carryless_oracle(m):
    F = GaloisField.binary(m)
    for a in range(F.q):
        for b in range(F.q):
            assert F.mul(a, b) == clmul_mod(a, b, F.poly, m)


@pytest.mark.parametrize("F", [GaloisField.binary(2), GaloisField.binary(3), GaloisField.binary(4), GaloisField.prime(7), GaloisField.prime(13)])
def test_field_axioms_exhaustive_small(F):
    E = range(F.q)
    for a, b, c in itertools.product(E, E, E):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in E:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


def field_axioms(F):
    """Exhaustive field axioms on the full addition and multiplication tables."""
    q = F.q
    E = np.arange(q)
    M = np.asarray(F.mul_table)
    A = np.asarray(F.vadd(E[:, None], E[None, :]))
    assert (A == A.T).all() and (M == M.T).all()
    assert (A[0] == E).all() and (M[1] == E).all() and (M[0] == 0).all()
    assert ((A == 0).sum(axis=1) == 1).all()  # unique additive inverse
    assert ((M[1:, 1:] == 1).sum(axis=1) == 1).all()  # unique multiplicative inverse
    for a in range(q):
        assert (A[A[a]] == A[a][A]).all()
        assert (M[M[a]] == M[a][M]).all()
        assert (M[a][A] == A[M[a]][:, M[a]]).all()


@pytest.mark.parametrize("p", [p for p in range(2, 256) if is_prime(p)])
def test_prime_field_axioms_exhaustive(p):
    field_axioms(GaloisField.prime(p))


@pytest.mark.parametrize("m", range(1, 9))
def test_binary_field_axioms_exhaustive(m):
    field_axioms(GaloisField.binary(m))


def test_alternative_gf8_polynomial_axioms():
    field_axioms(GaloisField.binary(3, "1+X^2+X^3"))


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_gf256_axioms_sampled(a, b, c):
    F = GaloisField.binary(8)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == F.mul(b, a)
    if a:
        assert F.div(F.mul(a, b), a) == b


def test_vectorised_matches_scalar():
    F = GaloisField.binary(4)
    T = F.mul_table
    assert all(T[a, b] == F.mul(a, b) for a in range(16) for b in range(16))
