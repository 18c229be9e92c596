import cmath
import itertools

import pytest
from hypothesis import given, strategies as st

from nonor4.brown_forms import (MAX_DIM, Z4Form, brown, enumerate_forms, gauss_sum,
                                klein_bottle_forms, mobius_forms)
from nonor4.linking_forms import EighthRoot


def float_brown(q):
    s = sum(1j ** v for v in q.values)
    k = cmath.phase(s) / (cmath.pi / 4)
    assert abs(abs(s) - 2 ** (q.dim / 2)) < 1e-9
    return round(k) % 8


def _all_nonsingular(max_n=3):
    out = []
    for n in range(1, max_n + 1):
        cells = [(i, j) for i in range(n) for j in range(i, n)]
        for bits in itertools.product((0, 1), repeat=len(cells)):
            m = [[0] * n for _ in range(n)]
            for (i, j), b in zip(cells, bits):
                m[i][j] = m[j][i] = b
            if Z4Form.from_basis(m, [m[i][i] for i in range(n)]).is_nonsingular():
                out.append(m)
    return out


NONSINGULAR = _all_nonsingular()


def nonsingular_pairings():
    return st.sampled_from(NONSINGULAR)


def test_mobius_values():
    assert sorted(brown(q).k for q in mobius_forms()) == [1, 7]


def test_klein_values():
    ks = sorted(brown(q).k for q in klein_bottle_forms())
    assert ks == [0, 0, 2, 6]
    assert set(ks) <= {0, 2, 6}


def test_hyperbolic_values():
    ks = sorted(brown(q).k for q in enumerate_forms([[0, 1], [1, 0]]))
    assert ks == [0, 0, 0, 4]


def test_gauss_sum_example():
    q = Z4Form.from_basis([[1]], [1])
    assert q.values == (0, 1)
    assert gauss_sum(q) == (1, 0, 1, 0)
    assert brown(q) == EighthRoot(1)


def test_quadratic_law_is_enforced():
    with pytest.raises(ValueError, match="quadratic law"):
        Z4Form(1, (0, 2), ((1,),))
    with pytest.raises(ValueError):
        Z4Form(2, (0, 1, 1, 0), ((1, 0), (1, 1)))
    with pytest.raises(ValueError):
        Z4Form(MAX_DIM + 1, (0,) * (1 << (MAX_DIM + 1)), ((0,) * (MAX_DIM + 1),) * (MAX_DIM + 1))


def test_singular_pairing_has_no_brown_value():
    q = Z4Form.from_basis([[0]], [0])
    assert not q.is_nonsingular()
    with pytest.raises(ValueError, match="pairing singular"):
        brown(q)


@given(nonsingular_pairings(), st.data())
def test_brown_matches_float_phase(m, data):
    forms = enumerate_forms(m)
    q = data.draw(st.sampled_from(forms))
    assert brown(q).k == float_brown(q)


@given(nonsingular_pairings(), nonsingular_pairings(), st.data())
def test_brown_additive(m1, m2, data):
    a = data.draw(st.sampled_from(enumerate_forms(m1)))
    b = data.draw(st.sampled_from(enumerate_forms(m2)))
    assert brown(a.direct_sum(b)) == brown(a) + brown(b)


@given(nonsingular_pairings())
def test_odd_pairing_values_on_diagonal(m):
    # refinements of a pairing take the value x.x mod 2 on each x
    for q in enumerate_forms(m):
        for x in range(1 << q.dim):
            assert q(x) % 2 == q.pair(x, x)


def test_enumerate_forms_counts():
    for m in ([[1]], [[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1, 0], [1, 0, 1], [0, 1, 1]]):
        forms = enumerate_forms(m)
        assert len(forms) == 2 ** len(m)
        assert len({f.values for f in forms}) == len(forms)
    assert all(f.values == g.values for f, g in itertools.zip_longest(
        klein_bottle_forms(), enumerate_forms([[1, 0], [0, 1]])))
