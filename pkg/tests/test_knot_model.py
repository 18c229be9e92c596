import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonor4.exact_algebra import determinant, legendre, signature
from nonor4.knot_model import (BUILTINS, UNKNOT, KnotSyntaxError, Mirror, Seifert, Sum,
                               TwoBridge, count_arf, even_continued_fraction, invariants,
                               levine_arf, parse, render, seifert_for_two_bridge,
                               seifert_matrix, symmetrize, symplectic_arf,
                               two_bridge_seifert_matrix)
from nonor4.linking_forms import EighthRoot, cyclic_form, gauss_lambda, present


def naive_arf(V):
    n = len(V)
    ones = sum(sum(V[i][j] * x[i] * x[j] for i in range(n) for j in range(n)) % 2
               for x in itertools.product((0, 1), repeat=n))
    return int(ones > 2 ** (n - 1))


def cf_value(coeffs):
    v = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        v = a - 1 / v
    return v


names = st.sampled_from(list(BUILTINS))
two_bridge = st.integers(1, 20).flatmap(
    lambda h: st.sampled_from([TwoBridge(2 * h + 1, b) for b in range(1, 2 * h + 1)
                               if math.gcd(2 * h + 1, b) == 1]))
leaves = st.one_of(names.map(BUILTINS.__getitem__), two_bridge)
knots = st.recursive(leaves, lambda ch: st.one_of(
    ch.map(Mirror), st.lists(ch, min_size=2, max_size=3).map(lambda c: Sum(tuple(c)))),
    max_leaves=4)


# -- parsing -------------------------------------------------------------------

def test_parse_examples():
    assert parse("unknot") == UNKNOT
    assert parse("3_1") == BUILTINS["3_1"]
    assert parse("2br(25,2)") == TwoBridge(25, 2)
    assert parse("mirror(5_2)") == Mirror(BUILTINS["5_2"])
    assert parse("4_1 # 5_1") == Sum((BUILTINS["4_1"], BUILTINS["5_1"]))
    assert parse("seifert([[1,1],[0,-1]])") == Seifert(((1, 1), (0, -1)))
    assert parse("  3_1#4_1 ") == parse("3_1 # 4_1")


def test_multiplier_binds_tighter_than_sum():
    k = parse("3*3_1 # 4_1")
    assert k == Sum((Sum((BUILTINS["3_1"],) * 3), BUILTINS["4_1"]))
    assert render(k) == "(3_1 # 3_1 # 3_1) # 4_1"
    assert parse("2*(3_1 # 4_1)") == Sum((parse("3_1 # 4_1"),) * 2)


@pytest.mark.parametrize("text,pos", [
    ("", 0), ("4_1 #", 5), ("foo", 0), ("mirror(3_1", 10), ("3 * ", 4), ("2br(8,3)", 0),
    ("seifert([[1,2],[0,1]])", 0), ("3_1 4_1", 4),
])
def test_parse_errors(text, pos):
    with pytest.raises(KnotSyntaxError) as e:
        parse(text)
    assert e.value.pos == pos


def test_two_bridge_validation():
    for a, b in ((9, 3), (9, 0), (9, 9), (10, 3)):
        with pytest.raises(ValueError):
            TwoBridge(a, b)


@given(knots)
def test_render_parse_round_trip(k):
    assert invariants(parse(render(k))) == invariants(k)


# -- two-bridge construction -----------------------------------------------------

def test_two_bridge_examples():
    assert even_continued_fraction(7, 4) == [2, 4]
    assert even_continued_fraction(25, 2) == [12, -2]
    assert two_bridge_seifert_matrix(25, 2) == ((6, -1), (0, -1))
    with pytest.raises(ValueError):
        even_continued_fraction(7, 3)


@pytest.mark.parametrize("alpha", range(3, 46, 2))
def test_two_bridge_contract(alpha):
    for beta in range(1, alpha):
        if math.gcd(alpha, beta) != 1:
            continue
        b = beta if beta % 2 == 0 else beta - alpha
        coeffs = even_continued_fraction(alpha, b)
        assert all(c % 2 == 0 for c in coeffs)
        assert cf_value(coeffs) == Fraction(alpha, b)
        A = seifert_for_two_bridge(alpha, beta)
        assert abs(A.det()) == alpha
        assert present(A) == cyclic_form(alpha, beta)
        V = two_bridge_seifert_matrix(alpha, beta)
        assert symmetrize(V) == A.entries
        inv = invariants(TwoBridge(alpha, beta))
        assert inv.arf == levine_arf(alpha)
        assert gauss_lambda(inv.minus_linking_form) == EighthRoot(inv.signature)


# -- invariants ------------------------------------------------------------------

@pytest.mark.parametrize("name,D,sig,arf", [
    ("unknot", 1, 0, 0), ("3_1", 3, -2, 1), ("4_1", 5, 0, 1), ("5_1", 5, -4, 1), ("5_2", 7, -2, 0),
])
def test_builtin_invariants(name, D, sig, arf):
    inv = invariants(BUILTINS[name])
    assert (inv.D, inv.signature, inv.arf) == (D, sig, arf)
    if inv.lens:
        assert inv == invariants(TwoBridge(*BUILTINS[name].lens))


def test_mirror_of_five_two_is_seven_four():
    inv = invariants(parse("mirror(5_2)"))
    assert inv.lens == ((7, 4),)
    assert inv.minus_linking_form == invariants(TwoBridge(7, 4)).minus_linking_form
    assert inv.signature == 2


def test_empty_sum_is_unknot():
    assert invariants(Sum(())).D == 1
    assert invariants(Sum(())).minus_linking_form == invariants(UNKNOT).minus_linking_form


@given(knots)
def test_mirror_negates(k):
    a, b = invariants(k), invariants(Mirror(k))
    assert (b.D, b.signature, b.arf) == (a.D, -a.signature, a.arf)
    assert b.minus_linking_form == -a.minus_linking_form
    assert invariants(Mirror(Mirror(k))) == a


@given(knots, knots)
def test_sum_is_additive(j, k):
    a, b, s = invariants(j), invariants(k), invariants(Sum((j, k)))
    assert s.D == a.D * b.D
    assert s.signature == a.signature + b.signature
    assert s.arf == (a.arf + b.arf) % 2
    assert s.minus_linking_form == a.minus_linking_form + b.minus_linking_form


@given(knots)
def test_knot_milgram_and_seifert_matrix(k):
    inv = invariants(k)
    assert gauss_lambda(inv.minus_linking_form) == EighthRoot(inv.signature)
    V = seifert_matrix(k)
    if V:
        A = symmetrize(V)
        assert abs(determinant(A)) == inv.D
        assert signature(A) == inv.signature
        assert present(A) == inv.minus_linking_form
    if 0 < len(V) <= 10:
        assert naive_arf(V) == inv.arf


@st.composite
def odd_det_seifert(draw):
    n = 2 * draw(st.integers(1, 3))
    V = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(n)]
    A = [[V[i][j] + V[j][i] for j in range(n)] for i in range(n)]
    d = determinant(A)
    if d % 2 == 0:
        V[0][0] += 1
    return tuple(tuple(r) for r in V)


@given(odd_det_seifert())
def test_count_arf_matches_naive_majority(V):
    A = symmetrize(V)
    if determinant(A) % 2 == 0:
        return
    assert count_arf(V) == naive_arf(V) == levine_arf(abs(determinant(A)))


def test_levine_arf_formula():
    assert [levine_arf(d) for d in (1, 3, 5, 7, 9)] == [0, 1, 1, 0, 0]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_taylor_signature_mod_8(p):
    for a in range(1, p):
        inv = invariants(TwoBridge(p, a))
        unit = inv.minus_linking_form.summands[0].a
        assert (inv.signature - (2 * legendre(unit, p) - p - 1)) % 8 == 0


@given(odd_det_seifert())
def test_symplectic_arf_matches_count(V):
    if determinant(symmetrize(V)) % 2 == 0:
        return
    assert symplectic_arf(V) == count_arf(V)


def test_large_two_bridge_uses_symplectic_route():
    V = two_bridge_seifert_matrix(97, 96)
    assert len(V) > 24
    inv = invariants(TwoBridge(97, 96))
    assert inv.arf_method == "symplectic+levine"
    assert symplectic_arf(V) == levine_arf(97)
