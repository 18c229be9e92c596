"""Exact integer, rational and modular arithmetic.

Everything here works on Python integers and :class:`fractions.Fraction`,
so there is no overflow and no floating point.  Matrices are plain
tuples of tuples; :class:`SymIntMatrix` adds the symmetry check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import isprime

Rat = Fraction

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    """Normalize a nested sequence into a square tuple-of-tuples matrix."""
    m = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    return m


@dataclass(frozen=True)
class SymIntMatrix:
    """Symmetric integer matrix."""

    entries: Matrix

    def __post_init__(self):
        m = as_matrix(self.entries)
        object.__setattr__(self, "entries", m)
        for i, row in enumerate(m):
            for j in range(i):
                if row[j] != m[j][i]:
                    raise ValueError("matrix is not symmetric")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "SymIntMatrix":
        return cls(as_matrix(rows))

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "SymIntMatrix":
        n = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else 0 for j in range(n))
                         for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __neg__(self) -> "SymIntMatrix":
        return SymIntMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def has_even_diagonal(self) -> bool:
        return all(self.entries[i][i] % 2 == 0 for i in range(self.n))

    def det(self) -> int:
        return determinant(self.entries)

    def block_sum(self, other: "SymIntMatrix") -> "SymIntMatrix":
        return SymIntMatrix(block_diagonal([self.entries, other.entries]))

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form ``U @ A @ V == diag(d)`` with ``d[i] | d[i+1]``.

    ``U_inv`` is the inverse of U, tracked during the elimination.
    """

    d: tuple[int, ...]
    U: Matrix
    V: Matrix
    U_inv: Matrix = ()

    def coker_order(self) -> int:
        """Order of Z^n / A Z^n, or 0 when the cokernel is infinite."""
        out = 1
        for x in self.d:
            out *= x
        return out


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
                 for row in a)


def transpose(a: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(zip(*a)) if a else ()


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return tuple(tuple(row) for row in out)


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free Bareiss elimination."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        piv, row_k = m[k][k], m[k]
        for i in range(k + 1, n):
            row_i, c = m[i], m[i][k]
            if c:
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * piv - c * row_k[j]) // prev
            elif piv != prev:
                for j in range(k + 1, n):
                    if row_i[j]:
                        row_i[j] = row_i[j] * piv // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form of a square integer matrix with both transforms.

    Works for any square integer matrix (symmetry is not needed); zero
    elementary divisors of a singular matrix come last.
    """
    m = [list(row) for row in as_matrix(a)]
    n = len(m)
    U = [list(row) for row in identity(n)]
    V = [list(row) for row in identity(n)]
    Ui = [list(row) for row in identity(n)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        if c:
            m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]
            for row in Ui:
                row[src] -= c * row[dst]

    def add_col(src, dst, c):
        if c:
            for row in m:
                row[dst] += c * row[src]
            for row in V:
                row[dst] += c * row[src]

    for t in range(n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, n):
            for j in range(t, n):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, n):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the trailing block
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if m[i][j] % m[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]

    d = tuple(m[i][i] for i in range(n))
    return SnfResult(d, tuple(map(tuple, U)), tuple(map(tuple, V)), tuple(map(tuple, Ui)))


def inverse_rational(a: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse over Q by Gauss-Jordan elimination."""
    m = [[Fraction(x) for x in row] for row in as_matrix(a)]
    n = len(m)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        s = m[c][c]
        m[c] = [x / s for x in m[c]]
        inv[c] = [x / s for x in inv[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    return tuple(tuple(row) for row in inv)


def integer_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular matrix, as an integer matrix."""
    inv = inverse_rational(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def signature(a: SymIntMatrix | Sequence[Sequence[int]]) -> int:
    """Signature of a nonsingular symmetric matrix, computed exactly.

    Symmetric congruence diagonalization over Q.  A vanishing diagonal
    with a nonzero off-diagonal entry is handled by splitting off the
    hyperbolic 2x2 block, which contributes nothing.
    """
    rows = a.entries if isinstance(a, SymIntMatrix) else as_matrix(a)
    if determinant(rows) == 0:
        raise ValueError("degenerate form")
    m = {i: {j: Fraction(x) for j, x in enumerate(row) if x} for i, row in enumerate(rows)}
    sig = 0
    # sparse elimination: only rows meeting the pivot column are touched
    while m:
        k = next((i for i in m if m[i].get(i)), None)
        if k is not None:
            row_k = m.pop(k)
            piv = row_k.pop(k)
            sig += 1 if piv > 0 else -1
            for i in [i for i in row_k if i in m]:
                f = m[i].pop(k) / piv
                row_i = m[i]
                for j, v in row_k.items():
                    x = row_i.get(j, 0) - f * v
                    if x:
                        row_i[j] = x
                    else:
                        row_i.pop(j, None)
            continue
        pair = next(((i, j) for i in m for j in m[i] if j != i), None)
        if pair is None:
            raise ValueError("degenerate form")
        i, j = pair
        b = m[i][j]
        # Schur complement of [[0, b], [b, 0]], whose inverse is [[0, 1/b], [1/b, 0]]
        row_i, row_j = m.pop(i), m.pop(j)
        for r in m:
            m[r].pop(i, None)
            m[r].pop(j, None)
        row_i.pop(i, None), row_i.pop(j, None), row_j.pop(i, None), row_j.pop(j, None)
        for r in set(row_i) | set(row_j):
            ri, rj = row_i.get(r, 0), row_j.get(r, 0)
            row_r = m[r]
            for s_, vj in row_j.items():
                x = row_r.get(s_, 0) - ri * vj / b
                if x:
                    row_r[s_] = x
                else:
                    row_r.pop(s_, None)
            for s_, vi in row_i.items():
                x = row_r.get(s_, 0) - rj * vi / b
                if x:
                    row_r[s_] = x
                else:
                    row_r.pop(s_, None)
    return sig


def is_odd_prime(p: int) -> bool:
    return p > 2 and isprime(p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if not is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def least_nonsquare(p: int) -> int:
    """Least positive quadratic nonresidue modulo an odd prime."""
    a = 2
    while legendre(a, p) != -1:
        a += 1
    return a


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1


def frac_mod1(x: Fraction) -> Fraction:
    """Representative of x in Q/Z lying in [0, 1)."""
    return x - (x.numerator // x.denominator)
