"""Z/4-valued quadratic forms on Z/2 vector spaces and their Brown invariants.

A form is stored as its full value table, indexed by the bitmask of the
vector.  Sums of powers of i are evaluated in Z[zeta_8] on the basis
1, zeta, zeta^2, zeta^3, where zeta^4 = -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linking_forms import EighthRoot

MAX_DIM = 12

Z8Elt = tuple[int, int, int, int]


def _zeta_power(k: int) -> Z8Elt:
    k %= 8
    out = [0, 0, 0, 0]
    out[k % 4] = 1 if k < 4 else -1
    return tuple(out)


def _add(x: Z8Elt, y: Z8Elt) -> Z8Elt:
    return tuple(a + b for a, b in zip(x, y))


def _scale(c: int, x: Z8Elt) -> Z8Elt:
    return tuple(c * a for a in x)


def _z2_rank(rows: Sequence[int]) -> int:
    rows = list(rows)
    rank = 0
    while rows:
        r = rows.pop()
        if r:
            rank += 1
            low = r & -r
            rows = [x ^ r if x & low else x for x in rows]
    return rank


@dataclass(frozen=True)
class Z4Form:
    dim: int
    values: tuple[int, ...]
    pairing: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim > MAX_DIM:
            raise ValueError(f"dimension {self.dim} exceeds {MAX_DIM}")
        pairing = tuple(tuple(x % 2 for x in row) for row in self.pairing)
        values = tuple(v % 4 for v in self.values)
        if len(pairing) != self.dim or any(len(r) != self.dim for r in pairing):
            raise ValueError("pairing has the wrong shape")
        if any(pairing[i][j] != pairing[j][i] for i in range(self.dim) for j in range(i)):
            raise ValueError("pairing is not symmetric")
        if len(values) != 1 << self.dim:
            raise ValueError("value table has the wrong length")
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "values", values)
        for x in range(1 << self.dim):
            for y in range(1 << self.dim):
                if values[x ^ y] != (values[x] + values[y] + 2 * self.pair(x, y)) % 4:
                    raise ValueError("values do not satisfy the quadratic law")

    def pair(self, x: int, y: int) -> int:
        out = 0
        for i in range(self.dim):
            if x >> i & 1:
                for j in range(self.dim):
                    if y >> j & 1:
                        out ^= self.pairing[i][j]
        return out

    def __call__(self, x: int) -> int:
        return self.values[x]

    def is_nonsingular(self) -> bool:
        rows = [sum(self.pairing[i][j] << j for j in range(self.dim)) for i in range(self.dim)]
        return _z2_rank(rows) == self.dim

    @classmethod
    def from_basis(cls, pairing: Sequence[Sequence[int]], basis_values: Sequence[int]) -> "Z4Form":
        """The refinement taking the given values on the standard basis."""
        n = len(pairing)
        vals = []
        for x in range(1 << n):
            bits = [i for i in range(n) if x >> i & 1]
            v = sum(basis_values[i] for i in bits)
            v += 2 * sum(pairing[i][j] for a, i in enumerate(bits) for j in bits[a + 1:])
            vals.append(v % 4)
        return cls(n, tuple(vals), tuple(tuple(r) for r in pairing))

    def direct_sum(self, other: "Z4Form") -> "Z4Form":
        n, m = self.dim, other.dim
        pairing = tuple(
            tuple(self.pairing[i][j] if i < n and j < n else
                  other.pairing[i - n][j - n] if i >= n and j >= n else 0
                  for j in range(n + m)) for i in range(n + m))
        low = (1 << n) - 1
        values = tuple((self.values[x & low] + other.values[x >> n]) % 4
                       for x in range(1 << (n + m)))
        return Z4Form(n + m, values, pairing)


def gauss_sum(q: Z4Form) -> Z8Elt:
    """``sum_x i^q(x)`` as an element of Z[zeta_8]."""
    counts = [0, 0, 0, 0]
    for v in q.values:
        counts[v] += 1
    return (counts[0] - counts[2], 0, counts[1] - counts[3], 0)


def brown(q: Z4Form) -> EighthRoot:
    """The k with ``sum_x i^q(x) = 2^{dim/2} zeta_8^k``."""
    s = gauss_sum(q)
    n = q.dim
    for k in range(8):
        if n % 2 == 0:
            target = _scale(2 ** (n // 2), _zeta_power(k))
        else:
            # sqrt(2) zeta^k = zeta^(k+1) + zeta^(k-1)
            target = _scale(2 ** (n // 2), _add(_zeta_power(k + 1), _zeta_power(k - 1)))
        if s == target:
            return EighthRoot(k)
    raise ValueError("pairing singular or form invalid")


def enumerate_forms(pairing: Sequence[Sequence[int]]) -> list[Z4Form]:
    """All 2^dim quadratic refinements of a symmetric Z/2 pairing."""
    n = len(pairing)
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds {MAX_DIM}")
    diag = [pairing[i][i] % 2 for i in range(n)]
    out = []
    for choice in range(1 << n):
        basis_values = [diag[i] + 2 * (choice >> i & 1) for i in range(n)]
        out.append(Z4Form.from_basis(pairing, basis_values))
    return out


def mobius_forms() -> list[Z4Form]:
    """The refinements of the odd pairing on Z/2."""
    return enumerate_forms([[1]])


def klein_bottle_forms() -> list[Z4Form]:
    """The refinements of the identity pairing on (Z/2)^2."""
    return enumerate_forms([[1, 0], [0, 1]])
