"""Knot expressions and their classical invariants.

A knot is an expression tree: Seifert-matrix leaves, two-bridge leaves,
mirrors and connected sums.  From a Seifert matrix V we take the
symmetrized form ``A = V + V^t``; its determinant, signature and the
linking form it presents give D(K), sigma(K) and minus the linking form
of the double branched cover.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

from . import kernels
from .exact_algebra import Matrix, SymIntMatrix, as_matrix, block_diagonal, determinant, signature
from .linking_forms import EighthRoot, LinkingForm, cyclic_form, gauss_lambda, present

# above this many Z/2 coordinates the Arf invariant is reduced, not counted
ARF_COUNT_LIMIT = 24


@dataclass(frozen=True)
class Seifert:
    V: Matrix
    name: str | None = None
    # (alpha, beta) when the double branched cover is known to be L(alpha, beta)
    lens: tuple[int, int] | None = None

    def __post_init__(self):
        V = as_matrix(self.V) if self.V else ()
        object.__setattr__(self, "V", V)
        if V:
            d = determinant(symmetrize(V))
            if d % 2 == 0:
                raise ValueError("Seifert matrix has even determinant")


@dataclass(frozen=True)
class TwoBridge:
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 1 or self.alpha % 2 == 0:
            raise ValueError(f"2-bridge numerator {self.alpha} must be odd and positive")
        if not 0 < self.beta < self.alpha:
            raise ValueError(f"2-bridge parameter {self.beta} must lie in (0, {self.alpha})")
        if math.gcd(self.alpha, self.beta) != 1:
            raise ValueError(f"2-bridge fraction {self.alpha}/{self.beta} is not reduced")


@dataclass(frozen=True)
class Mirror:
    child: "KnotSpec"


@dataclass(frozen=True)
class Sum:
    children: tuple["KnotSpec", ...]


KnotSpec = Union[Seifert, TwoBridge, Mirror, Sum]

UNKNOT = Seifert((), "unknot", None)


def symmetrize(V: Sequence[Sequence[int]]) -> Matrix:
    n = len(V)
    return tuple(tuple(V[i][j] + V[j][i] for j in range(n)) for i in range(n))


def render(k: KnotSpec) -> str:
    if isinstance(k, Seifert):
        if k.name:
            return k.name
        return "seifert([" + ",".join("[" + ",".join(map(str, r)) + "]" for r in k.V) + "])"
    if isinstance(k, TwoBridge):
        return f"2br({k.alpha},{k.beta})"
    if isinstance(k, Mirror):
        return f"mirror({render(k.child)})"
    if not k.children:
        return "unknot"
    return " # ".join(f"({render(c)})" if isinstance(c, Sum) else render(c) for c in k.children)


# -- two-bridge Seifert surfaces --------------------------------------------

def even_continued_fraction(alpha: int, beta: int) -> list[int]:
    """Even integers a_1..a_m with ``alpha/beta = a_1 - 1/(a_2 - 1/(...))``.

    beta must have the parity that makes ``alpha/beta`` odd over even.
    """
    if (alpha - beta) % 2 == 0:
        raise ValueError("alpha and beta must have opposite parity")
    x, y = alpha, beta
    out = []
    while y:
        a = 2 * round(x / (2 * y))
        if a == 0:
            a = 2 if x * y > 0 else -2
        out.append(a)
        x, y = y, a * y - x
    return out


@lru_cache(maxsize=4096)
def seifert_for_two_bridge(alpha: int, beta: int) -> SymIntMatrix:
    """Symmetrized Seifert form of K_{alpha/beta} from an even plumbing.

    The tridiagonal matrix with the even continued fraction coefficients
    on the diagonal and -1 off it has determinant +-alpha, and its inverse
    has corner entry beta'/alpha with beta' = beta mod alpha, so it
    presents the form beta xy / alpha on Z/alpha.
    """
    TwoBridge(alpha, beta)
    b = beta if beta % 2 == 0 else beta - alpha
    coeffs = even_continued_fraction(alpha, b)
    m = len(coeffs)
    rows = tuple(tuple(coeffs[i] if i == j else -1 if abs(i - j) == 1 else 0
                       for j in range(m)) for i in range(m))
    A = SymIntMatrix(rows)
    if abs(A.det()) != alpha or not A.has_even_diagonal():
        raise RuntimeError(f"two-bridge construction failed for {alpha}/{beta}")
    form = present(A)
    if form != cyclic_form(alpha, beta):
        raise RuntimeError(f"two-bridge linking form mismatch for {alpha}/{beta}")
    if gauss_lambda(form) != EighthRoot(signature(A)):
        raise RuntimeError(f"two-bridge Milgram check failed for {alpha}/{beta}")
    return A


def two_bridge_seifert_matrix(alpha: int, beta: int) -> Matrix:
    """A Seifert matrix V with V + V^t the plumbing form above."""
    A = seifert_for_two_bridge(alpha, beta).entries
    m = len(A)
    return tuple(tuple(A[i][i] // 2 if i == j else A[i][j] if j > i else 0
                       for j in range(m)) for i in range(m))


# -- invariants --------------------------------------------------------------

@dataclass(frozen=True)
class KnotInvariants:
    D: int
    signature: int
    arf: int
    minus_linking_form: LinkingForm
    # lens-space summands of the double branched cover, when known
    lens: tuple[tuple[int, int], ...] | None
    # "count+levine" when the form was counted, "symplectic+levine" when it was
    # too large to count and was reduced to a symplectic basis instead
    arf_method: str = "count+levine"

    @property
    def linking_form(self) -> LinkingForm:
        return -self.minus_linking_form


def levine_arf(D: int) -> int:
    return ((D + 1) // 4) % 2


def count_arf(V: Sequence[Sequence[int]]) -> int:
    """Arf invariant as the majority value of ``x^t V x mod 2``."""
    n = len(V)
    if n == 0:
        return 0
    diag = sum((V[i][i] & 1) << i for i in range(n))
    rows = [sum(((V[k][j] + V[j][k]) & 1) << j for j in range(n) if j != k) for k in range(n)]
    ones = kernels.arf_ones(diag, rows, n)
    half = 1 << (n - 1)
    if ones == half:
        raise ValueError("mod 2 Seifert form is singular")
    return int(ones > half)


def symplectic_arf(V: Sequence[Sequence[int]]) -> int:
    """Arf invariant of ``x -> x^t V x mod 2`` from a symplectic basis.

    Polynomial time, for matrices too large to count.  Pairs (e, f) with
    b(e, f) = 1 are split off one at a time and Arf = sum q(e) q(f).
    """
    n = len(V)
    diag = [V[i][i] & 1 for i in range(n)]
    rows = [sum(((V[k][j] + V[j][k]) & 1) << j for j in range(n)) for k in range(n)]

    def b(x, y):
        out = 0
        for i in range(n):
            if x >> i & 1:
                out ^= (rows[i] & y).bit_count() & 1
        return out

    def q(x):
        lin = sum(diag[i] for i in range(n) if x >> i & 1)
        quad = sum((rows[i] & x & ~((2 << i) - 1)).bit_count() for i in range(n) if x >> i & 1)
        return (lin + quad) & 1

    vecs = [1 << i for i in range(n)]
    arf = 0
    while vecs:
        e = vecs.pop()
        j = next((k for k, y in enumerate(vecs) if b(e, y)), None)
        if j is None:
            raise ValueError("mod 2 Seifert form is singular")
        f = vecs.pop(j)
        arf ^= q(e) & q(f)
        vecs = [z ^ (e if b(z, f) else 0) ^ (f if b(z, e) else 0) for z in vecs]
    return arf


@lru_cache(maxsize=4096)
def _leaf_invariants(V: Matrix, lens: tuple[int, int] | None) -> KnotInvariants:
    if not V:
        return KnotInvariants(1, 0, 0, LinkingForm(), () if lens is None else (lens,))
    A = symmetrize(V)
    D = abs(determinant(A))
    sig = signature(A)
    form = present(A)
    levine = levine_arf(D)
    if len(V) <= ARF_COUNT_LIMIT:
        arf, method = count_arf(V), "count+levine"
    else:
        arf, method = symplectic_arf(V), "symplectic+levine"
    if arf != levine:
        raise RuntimeError("Arf invariant: the Seifert form disagrees with the determinant formula")
    if form.order != D:
        raise RuntimeError("linking form order differs from the determinant")
    return KnotInvariants(D, sig, arf, form, None if lens is None else (lens,), method)


def _combine(parts: Sequence[KnotInvariants]) -> KnotInvariants:
    form = LinkingForm()
    for p in parts:
        form = form + p.minus_linking_form
    lens = None if any(p.lens is None for p in parts) else tuple(l for p in parts for l in p.lens)
    method = ("symplectic+levine" if any(p.arf_method == "symplectic+levine" for p in parts)
              else "count+levine")
    return KnotInvariants(math.prod(p.D for p in parts), sum(p.signature for p in parts),
                          sum(p.arf for p in parts) % 2, form, lens, method)


def invariants(k: KnotSpec) -> KnotInvariants:
    if isinstance(k, Seifert):
        return _leaf_invariants(k.V, k.lens)
    if isinstance(k, TwoBridge):
        return _leaf_invariants(two_bridge_seifert_matrix(k.alpha, k.beta), (k.alpha, k.beta))
    if isinstance(k, Mirror):
        inv = invariants(k.child)
        lens = None if inv.lens is None else tuple((a, a - b) if b else (a, b)
                                                   for a, b in inv.lens)
        return KnotInvariants(inv.D, -inv.signature, inv.arf, -inv.minus_linking_form,
                              lens, inv.arf_method)
    if isinstance(k, Sum):
        if not k.children:
            return KnotInvariants(1, 0, 0, LinkingForm(), ())
        return _combine([invariants(c) for c in k.children])
    raise TypeError(f"not a knot expression: {k!r}")


def seifert_matrix(k: KnotSpec) -> Matrix:
    """A Seifert matrix for the whole expression (mirror is -V^t)."""
    if isinstance(k, Seifert):
        return k.V
    if isinstance(k, TwoBridge):
        return two_bridge_seifert_matrix(k.alpha, k.beta)
    if isinstance(k, Mirror):
        V = seifert_matrix(k.child)
        n = len(V)
        return tuple(tuple(-V[j][i] for j in range(n)) for i in range(n))
    return block_diagonal([seifert_matrix(c) for c in k.children])


# -- built-in table ----------------------------------------------------------

BUILTINS: dict[str, Seifert] = {
    "unknot": UNKNOT,
    "3_1": Seifert(((-1, 1), (0, -1)), "3_1", (3, 1)),
    "4_1": Seifert(((1, 1), (0, -1)), "4_1", (5, 2)),
    "5_1": Seifert(((-1, 1, 0, 0), (0, -1, 1, 0), (0, 0, -1, 1), (0, 0, 0, -1)), "5_1", (5, 1)),
    "5_2": Seifert(((-1, 1), (0, -2)), "5_2", (7, 3)),
}

_EXPECTED = {"3_1": (3, -2), "4_1": (5, 0), "5_1": (5, -4), "5_2": (7, -2)}


def _validate_builtins() -> None:
    for name, (D, sig) in _EXPECTED.items():
        leaf = BUILTINS[name]
        inv = invariants(leaf)
        if (inv.D, inv.signature) != (D, sig):
            raise RuntimeError(f"built-in {name} has wrong determinant or signature")
        if gauss_lambda(inv.minus_linking_form) != EighthRoot(inv.signature):
            raise RuntimeError(f"built-in {name} fails the Milgram check")
        if inv.minus_linking_form != invariants(TwoBridge(*leaf.lens)).minus_linking_form:
            raise RuntimeError(f"built-in {name} disagrees with its two-bridge form")


_validate_builtins()


# -- parser ------------------------------------------------------------------

class KnotSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<twobr>2br(?=\s*\())
  | (?P<name>\d+_\d+|[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>-?\d+)
  | (?P<op>[#*(),\[\]])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise KnotSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise KnotSyntaxError(f"expected {want}, found {got}", self.text, tok[2])
        self.i += 1
        return tok

    def knot(self) -> KnotSpec:
        parts = [self.term()]
        while self.peek()[1] == "#":
            self.take("#")
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def term(self) -> KnotSpec:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            self.take("*")
            count = int(value)
            if count < 0:
                raise KnotSyntaxError("negative multiplicity", self.text, pos)
            child = self.term()
            return Sum((child,) * count)
        if value == "(":
            self.take("(")
            inner = self.knot()
            self.take(")")
            return inner
        return self.atom()

    def int_(self) -> int:
        return int(self.take(kind="int")[1])

    def atom(self) -> KnotSpec:
        kind, value, pos = self.peek()
        if kind == "twobr":
            self.take()
            self.take("(")
            a = self.int_()
            self.take(",")
            b = self.int_()
            self.take(")")
            try:
                return TwoBridge(a, b)
            except ValueError as e:
                raise KnotSyntaxError(str(e), self.text, pos) from None
        if kind != "name":
            got = repr(value) if kind != "end" else "end of input"
            raise KnotSyntaxError(f"expected a knot, found {got}", self.text, pos)
        self.take()
        if value == "mirror":
            self.take("(")
            inner = self.knot()
            self.take(")")
            return Mirror(inner)
        if value == "seifert":
            self.take("(")
            rows = self.rows()
            self.take(")")
            try:
                return Seifert(tuple(rows))
            except ValueError as e:
                raise KnotSyntaxError(str(e), self.text, pos) from None
        if value not in BUILTINS:
            raise KnotSyntaxError(f"unknown knot name {value!r}", self.text, pos)
        return BUILTINS[value]

    def rows(self) -> list[tuple[int, ...]]:
        self.take("[")
        rows = []
        if self.peek()[1] != "]":
            rows.append(self.row())
            while self.peek()[1] == ",":
                self.take(",")
                rows.append(self.row())
        self.take("]")
        return rows

    def row(self) -> tuple[int, ...]:
        self.take("[")
        vals = [self.int_()]
        while self.peek()[1] == ",":
            self.take(",")
            vals.append(self.int_())
        self.take("]")
        return tuple(vals)


def parse(text: str) -> KnotSpec:
    p = _Parser(text)
    k = p.knot()
    p.take(kind="end")
    return k
