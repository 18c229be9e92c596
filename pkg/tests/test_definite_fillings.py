import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from nonor4.definite_fillings import (BinaryForm, _lens_d, coset_bound_N, coset_minimum,
                                      enumerate_definite_rank2, lens_d_invariants,
                                      negdef_rank2_excluded, reduced_forms_of_det,
                                      sum_d_invariants)
from nonor4.verdicts import Verdict

F = Fraction


# -- oracles ---------------------------------------------------------------------

def naive_reduce(a, b, c):
    # Gauss reduction for GL2(Z) classes: |2b| <= a <= c, then b >= 0 by x -> -x
    while True:
        if a > c:
            a, c = c, a
        elif abs(2 * b) > a:
            k = round(b / a)
            b, c = b - k * a, c - 2 * k * b + k * k * a
        else:
            return a, abs(b), c


def naive_classes(det):
    out = set()
    for a in range(1, 2 * det + 2):
        for b in range(-a, a + 1):
            if (det + b * b) % a == 0:
                out.add(naive_reduce(a, b, (det + b * b) // a))
    return out


def literal_coset_min(f, rx, ry, box):
    best = None
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            if (x - rx) % 2 == 0 and (y - ry) % 2 == 0:
                v = F(f.c * x * x - 2 * f.b * x * y + f.a * y * y, f.det)
                best = v if best is None or v < best else best
    return best


def hj_fraction(p, q):
    # p/q = a_1 - 1/(a_2 - ...), all a_i >= 2
    out = []
    while q:
        a = -(-p // q)
        out.append(a)
        p, q = q, a * q - p
    return out


def plumbing_d(p, q):
    """d-invariants of L(p, q) from the positive definite linear plumbing.

    d = min over characteristic K in a class of (K^t Q^{-1} K - n) / 4.
    """
    a = hj_fraction(p, q)
    n = len(a)
    Q = [[a[i] if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]
    inv = [[F(int(x.p), int(x.q)) for x in row] for row in sympy.Matrix(Q).inv().tolist()]
    best = {}
    ranges = [range(-ai - 2, ai + 3, 2) for ai in a]
    for K in itertools.product(*ranges):
        y = [sum(r * k for r, k in zip(row, K)) for row in inv]
        key = tuple(v % 2 for v in y)
        val = (sum(k * v for k, v in zip(K, y)) - n) / 4
        if key not in best or val < best[key]:
            best[key] = val
    assert len(best) == p
    return sorted(best.values())


# -- binary forms --------------------------------------------------------------------

def test_binary_form_validation():
    assert BinaryForm(2, 1, 2).det == 3
    for bad in ((2, 2, 1), (1, 1, 1), (3, 2, 3), (-1, 0, -1)):
        with pytest.raises(ValueError):
            BinaryForm(*bad)


def test_reduced_forms_examples():
    assert reduced_forms_of_det(1) == [BinaryForm(1, 0, 1)]
    assert reduced_forms_of_det(3) == [BinaryForm(1, 0, 3), BinaryForm(2, 1, 2)]
    assert len(enumerate_definite_rank2(9)) == 6


@pytest.mark.parametrize("det", range(1, 31))
def test_reduced_forms_match_naive_reduction(det):
    got = {(f.a, f.b, f.c) for f in reduced_forms_of_det(det)}
    assert got == naive_classes(det)


@pytest.mark.parametrize("det", range(1, 11))
def test_reduced_forms_are_distinct_orbits(det):
    forms = reduced_forms_of_det(det)
    mats = [(p, q, r, s) for p, q, r, s in itertools.product(range(-3, 4), repeat=4)
            if abs(p * s - q * r) == 1]
    for f in forms:
        for p, q, r, s in mats:
            a = f.a * p * p + 2 * f.b * p * r + f.c * r * r
            b = f.a * p * q + f.b * (p * s + q * r) + f.c * r * s
            c = f.a * q * q + 2 * f.b * q * s + f.c * s * s
            if (a, b, c) in {(g.a, g.b, g.c) for g in forms}:
                assert (a, b, c) == (f.a, f.b, f.c)


def test_coset_bound_values():
    assert coset_bound_N(1) == 2
    assert coset_bound_N(9) == 2
    assert coset_bound_N(1) <= coset_bound_N(3) <= coset_bound_N(9)
    assert coset_bound_N(9, box=40) == coset_bound_N(9)
    with pytest.raises(ValueError):
        coset_bound_N(4)


@pytest.mark.parametrize("D", [1, 3, 5, 9, 15, 25])
def test_coset_minimum_matches_literal_search(D):
    for f in enumerate_definite_rank2(D):
        for rx, ry in itertools.product((0, 1), repeat=2):
            assert coset_minimum(f, rx, ry, 2 * D) == literal_coset_min(f, rx, ry, 2 * D)


# -- d-invariants -----------------------------------------------------------------

def test_d_invariant_examples():
    assert sorted(lens_d_invariants(2, 1).tables[0]) == [F(-1, 4), F(1, 4)]
    assert sorted(lens_d_invariants(3, 1).tables[0]) == [F(-1, 6), F(-1, 6), F(1, 2)]
    assert lens_d_invariants(1, 0).tables[0] == (0,)
    with pytest.raises(ValueError):
        lens_d_invariants(6, 4)


@pytest.mark.parametrize("p", range(2, 14))
def test_d_invariants_match_plumbing(p):
    for q in range(1, p):
        if math.gcd(p, q) != 1:
            continue
        a = hj_fraction(p, q)
        if math.prod(ai + 3 for ai in a) > 4000:
            continue
        assert sorted(lens_d_invariants(p, q).tables[0]) == plumbing_d(p, q)


@pytest.mark.parametrize("p", range(2, 51))
def test_d_invariants_conjugation_symmetric(p):
    for q in range(1, p):
        if math.gcd(p, q) != 1:
            continue
        s = lens_d_invariants(p, q)
        for i in range(p):
            assert s.d((i,)) == s.d(s.conjugate((i,)))


@given(st.integers(2, 60).flatmap(lambda p: st.tuples(
    st.just(p), st.sampled_from([q for q in range(1, p) if math.gcd(p, q) == 1]))))
def test_orientation_reversal_negates(pq):
    p, q = pq
    a = sorted(lens_d_invariants(p, q).tables[0])
    b = sorted(-x for x in lens_d_invariants(p, p - q).tables[0])
    assert a == b


def test_sum_d_invariants_is_additive():
    s = sum_d_invariants([(3, 1), (5, 2)])
    assert s.size == 15
    assert s.max_d() == lens_d_invariants(3, 1).max_d() + lens_d_invariants(5, 2).max_d()
    assert s.d((0, 1)) == lens_d_invariants(3, 1).d((0,)) + lens_d_invariants(5, 2).d((1,))


# -- the negative definite test -------------------------------------------------------

def test_negdef_inapplicable_without_lens_data():
    assert negdef_rank2_excluded(None, 5).verdict is Verdict.INAPPLICABLE


def test_negdef_on_s3_is_possible():
    r = negdef_rank2_excluded((), 1)
    assert r.verdict is Verdict.POSSIBLE and r.max_4d == 0


def test_negdef_checks_order():
    with pytest.raises(ValueError):
        negdef_rank2_excluded(((5, 2),), 7)


def test_negdef_example():
    r = negdef_rank2_excluded(((5, 2),), 5)
    assert r.verdict is Verdict.POSSIBLE
    assert r.N == 2 and r.max_4d == F(8, 5)


@given(st.integers(2, 120).flatmap(lambda p: st.tuples(
    st.just(p), st.sampled_from([q for q in range(1, p) if math.gcd(p, q) == 1]))))
def test_tables_match_single_value_recursion(pq):
    p, q = pq
    table = lens_d_invariants(p, q).tables[0]
    assert list(table) == [_lens_d(p, q, i) for i in range(p)]
