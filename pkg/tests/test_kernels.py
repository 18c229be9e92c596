import itertools
import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from nonor4 import _kernels_py, kernels

BACKENDS = kernels.available_backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def naive_arf_ones(diag, rows, n):
    ones = 0
    for x in range(1 << n):
        q = (diag & x).bit_count()
        for i in range(n):
            for j in range(i + 1, n):
                q += (x >> i & 1) * (x >> j & 1) * (rows[i] >> j & 1)
        ones += q & 1
    return ones


@st.composite
def arf_inputs(draw):
    n = draw(st.integers(1, 10))
    diag = draw(st.integers(0, (1 << n) - 1))
    S = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            S[i][j] = S[j][i] = draw(st.integers(0, 1))
    rows = [sum(S[k][j] << j for j in range(n)) for k in range(n)]
    return diag, rows, n


@given(arf_inputs())
def test_arf_ones_reference(args):
    assert _kernels_py.arf_ones(*args) == naive_arf_ones(*args)


@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 9)), max_size=3),
       st.integers(1, 27))
def test_residue_counts_reference(pairs, modulus):
    weights = [w for w, _ in pairs]
    moduli = [m for _, m in pairs]
    counts = [0] * modulus
    for x in itertools.product(*(range(m) for m in moduli)):
        counts[sum(w * v * v for w, v in zip(weights, x)) % modulus] += 1
    assert _kernels_py.residue_counts(weights, moduli, modulus) == counts


@compiled
@given(arf_inputs())
def test_arf_ones_backends_agree(args):
    assert BACKENDS["cython"].arf_ones(*args) == _kernels_py.arf_ones(*args)


@compiled
@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 12)), max_size=4),
       st.integers(1, 125))
def test_residue_counts_backends_agree(pairs, modulus):
    weights = [w for w, _ in pairs]
    moduli = [m for _, m in pairs]
    assert (BACKENDS["cython"].residue_counts(weights, moduli, modulus)
            == _kernels_py.residue_counts(weights, moduli, modulus))


@compiled
@given(st.integers(1, 30), st.integers(0, 15), st.integers(1, 30),
       st.integers(0, 1), st.integers(0, 1), st.integers(1, 25))
def test_coset_min_backends_agree(a, b, c, rx, ry, box):
    args = (a, b, c, rx, ry, box)
    assert BACKENDS["cython"].coset_min(*args) == _kernels_py.coset_min(*args)


def test_coset_min_example():
    # [[1,0],[0,1]] on the odd coset: x = y = 1 gives 2
    assert _kernels_py.coset_min(1, 0, 1, 1, 1, 4) == 2
    assert _kernels_py.coset_min(1, 0, 1, 0, 0, 4) == 0


def test_pure_python_env_var():
    env = dict(os.environ, NONOR4_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from nonor4 import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@compiled
def test_compiled_is_default():
    env = {k: v for k, v in os.environ.items() if k != "NONOR4_PURE_PYTHON"}
    out = subprocess.run([sys.executable, "-c", "from nonor4 import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
