from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from nonor4.exact_algebra import (
    SymIntMatrix,
    determinant,
    identity,
    inverse_rational,
    least_nonsquare,
    legendre,
    matmul,
    signature,
    smith_normal_form,
)


def sym_matrices(max_n=6, lo=-9, hi=9):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = draw(st.integers(lo, hi))
        return m
    return build()


def sturm_signature(a):
    # eigenvalue signs from exact real-root isolation of the characteristic polynomial
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.Matrix(a).charpoly(x).as_expr(), x)
    pos = neg = 0
    for (lo, hi), mult in poly.intervals():
        if lo >= 0 and hi > 0:
            pos += mult
        elif hi <= 0 and lo < 0:
            neg += mult
        else:
            raise AssertionError("root interval straddles zero")
    return pos - neg


def test_snf_examples():
    assert smith_normal_form([[2, 1], [1, -2]]).d == (1, 5)
    assert smith_normal_form(identity(3)).d == (1, 1, 1)
    assert smith_normal_form([[3, 0], [0, 21]]).d == (3, 21)


def test_signature_examples():
    assert signature([[2, 1], [1, 2]]) == 2
    assert signature([[2, 1], [1, -2]]) == 0
    assert signature([[-1]]) == -1
    assert signature([[0, 3], [3, 0]]) == 0


def test_signature_degenerate():
    with pytest.raises(ValueError, match="degenerate form"):
        signature([[1, 1], [1, 1]])


def test_inverse_examples():
    assert inverse_rational([[5]]) == ((Fraction(1, 5),),)
    inv = inverse_rational([[2, 1], [1, 2]])
    assert inv == tuple(tuple(Fraction(x, 3) for x in row) for row in [[2, -1], [-1, 2]])
    inv = inverse_rational([[2, 1], [1, -2]])
    assert inv == tuple(tuple(Fraction(x, 5) for x in row) for row in [[2, 1], [1, -2]])
    with pytest.raises(ValueError):
        inverse_rational([[1, 2], [2, 4]])


@given(sym_matrices())
def test_signature_matches_sturm(a):
    if determinant(a) == 0:
        return
    assert signature(a) == sturm_signature(a)


@given(sym_matrices(max_n=5))
def test_snf_round_trip(a):
    r = smith_normal_form(a)
    n = len(a)
    prod = matmul(matmul(r.U, a), r.V)
    assert prod == tuple(tuple(r.d[i] if i == j else 0 for j in range(n)) for i in range(n))
    assert matmul(r.U, r.U_inv) == identity(n)
    assert abs(determinant(r.U)) == 1 and abs(determinant(r.V)) == 1
    nz = [d for d in r.d if d]
    assert all(b % a_ == 0 for a_, b in zip(nz, nz[1:]))
    assert r.coker_order() == abs(determinant(a))
    oracle = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ)
    assert sorted(abs(oracle[i, i]) for i in range(n)) == sorted(r.d)


@given(sym_matrices())
def test_determinant_matches_sympy(a):
    assert determinant(a) == sympy.Matrix(a).det()


@pytest.mark.parametrize("p", list(sympy.primerange(3, 24)))
def test_legendre_multiplicative(p):
    for a in range(1, p):
        for b in range(1, p):
            assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)
    squares = {x * x % p for x in range(1, p)}
    assert all((legendre(a, p) == 1) == (a in squares) for a in range(1, p))
    assert legendre(p, p) == 0
    assert legendre(least_nonsquare(p), p) == -1


def test_legendre_examples_and_errors():
    assert legendre(2, 5) == -1
    assert legendre(4, 7) == 1
    assert all(legendre(1, p) == 1 for p in (3, 5, 7, 11, 13))
    for bad in (2, 9, 1, 0):
        with pytest.raises(ValueError):
            legendre(1, bad)


def test_sym_matrix_rejects_asymmetric():
    with pytest.raises(ValueError):
        SymIntMatrix.of([[1, 2], [3, 1]])
    m = SymIntMatrix.diagonal([2, -3])
    assert m.det() == -6 and not (-m).has_even_diagonal()
