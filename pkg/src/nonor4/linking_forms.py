"""Linking forms on finite abelian groups of odd order.

A linking form is stored in Wall's normal form: an orthogonal sum of
cyclic forms ``l(p, n, a)`` on ``Z/p^n`` with ``l(1, 1) = a / p^n``.  Two
forms are isometric iff, for every (p, n), they have the same number of
summands and the same product of Legendre symbols of the units, so each
(p, n) block is stored as ``r - 1`` copies of ``a = 1`` followed by one
summand whose unit is 1 or the least nonsquare mod p.  Isometry is then
plain equality.
"""

from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from sympy import factorint

from . import kernels
from .exact_algebra import (
    SymIntMatrix,
    as_matrix,
    frac_mod1,
    is_odd_prime,
    least_nonsquare,
    legendre,
    p_adic_valuation,
    smith_normal_form,
)

# brute-force isotropic-subgroup search is run on p-primary parts up to this order
BRUTE_FORCE_LIMIT = 3000
# exhaustive Gauss sums are refused above this p-primary order
GAUSS_SUM_LIMIT = 200_000


@dataclass(frozen=True, order=True)
class EighthRoot:
    """``exp(2 pi i k / 8)``, stored additively as k in Z/8."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 8)

    def __add__(self, other: "EighthRoot") -> "EighthRoot":
        return EighthRoot(self.k + other.k)

    def __neg__(self) -> "EighthRoot":
        return EighthRoot(-self.k)

    def __sub__(self, other: "EighthRoot") -> "EighthRoot":
        return EighthRoot(self.k - other.k)

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * self.k / 8)

    def __str__(self) -> str:
        return {0: "1", 2: "i", 4: "-1", 6: "-i"}.get(self.k, f"zeta8^{self.k}")


@dataclass(frozen=True, order=True)
class CyclicSummand:
    """The form ``l(p, n, a)`` on Z/p^n with the generator pairing to a/p^n.

    The unit is canonicalized to 1 or the least nonsquare mod p, since
    changing the generator multiplies a by a square.
    """

    p: int
    n: int
    a: int

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        if self.n < 1:
            raise ValueError("exponent must be positive")
        if self.a % self.p == 0:
            raise ValueError(f"{self.a} is not a unit mod {self.p}")
        a = 1 if legendre(self.a, self.p) == 1 else least_nonsquare(self.p)
        object.__setattr__(self, "a", a)

    @property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def legendre(self) -> int:
        return legendre(self.a, self.p)

    def __str__(self) -> str:
        return f"l({self.p},{self.n},{self.a})"


_SUMMAND_RE = re.compile(r"l\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(-?\d+)\s*\)")


@dataclass(frozen=True)
class LinkingForm:
    summands: tuple[CyclicSummand, ...] = ()

    def __post_init__(self):
        items = [s if isinstance(s, CyclicSummand) else CyclicSummand(*s)
                 for s in self.summands]
        blocks: dict[tuple[int, int], list[int]] = {}
        for s in items:
            blocks.setdefault((s.p, s.n), []).append(s.legendre)
        canon = []
        for (p, n), signs in sorted(blocks.items()):
            canon.extend(CyclicSummand(p, n, 1) for _ in range(len(signs) - 1))
            canon.append(CyclicSummand(p, n, 1 if math.prod(signs) == 1 else least_nonsquare(p)))
        object.__setattr__(self, "summands", tuple(canon))

    @classmethod
    def of(cls, summands: Iterable) -> "LinkingForm":
        return cls(tuple(summands))

    @classmethod
    def parse(cls, text: str) -> "LinkingForm":
        """Inverse of ``str``; accepts ``"0"`` for the trivial form."""
        text = text.strip()
        if text in ("", "0"):
            return cls()
        parts = [t.strip() for t in text.split("+")]
        out = []
        for part in parts:
            m = _SUMMAND_RE.fullmatch(part)
            if not m:
                raise ValueError(f"cannot parse linking form summand {part!r}")
            out.append(tuple(int(g) for g in m.groups()))
        return cls(tuple(out))

    def __str__(self) -> str:
        return "+".join(str(s) for s in self.summands) if self.summands else "0"

    def __add__(self, other: "LinkingForm") -> "LinkingForm":
        return LinkingForm(self.summands + other.summands)

    direct_sum = __add__

    def __neg__(self) -> "LinkingForm":
        return LinkingForm(tuple((s.p, s.n, -s.a) for s in self.summands))

    @property
    def order(self) -> int:
        return math.prod(s.order for s in self.summands)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({s.p for s in self.summands}))

    def p_part(self, p: int) -> "LinkingForm":
        return LinkingForm(tuple(s for s in self.summands if s.p == p))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Orders of the cyclic summands, sorted (not the Smith form)."""
        return tuple(sorted(s.order for s in self.summands))

    def is_cyclic(self) -> bool:
        return len(self.primes) == len(self.summands)

    def is_elementary(self, p: int) -> bool:
        return all(s.n == 1 for s in self.summands if s.p == p)

    def rank(self, p: int) -> int:
        return sum(1 for s in self.summands if s.p == p)

    def pairing_table(self, p: int) -> tuple[list[int], list[list[Fraction]]]:
        """Orders and Gram matrix of the p-primary part in the stored basis."""
        comp = [s for s in self.summands if s.p == p]
        orders = [s.order for s in comp]
        gram = [[Fraction(s.a, s.order) if i == j else Fraction(0)
                 for j in range(len(comp))] for i, s in enumerate(comp)]
        return orders, gram


def is_isometric(f: LinkingForm, g: LinkingForm) -> bool:
    return f.summands == g.summands


# -- presentation and diagonalization ---------------------------------------

def present(a: SymIntMatrix | Sequence[Sequence[int]]) -> LinkingForm:
    """The linking form ``w^t A^{-1} z mod Z`` on coker(A)."""
    rows = a.entries if isinstance(a, SymIntMatrix) else SymIntMatrix(as_matrix(a)).entries
    return _present(rows)


@lru_cache(maxsize=4096)
def _present(rows: tuple[tuple[int, ...], ...]) -> LinkingForm:
    snf = smith_normal_form(rows)
    det = math.prod(snf.d)
    if det == 0 or det % 2 == 0:
        raise ValueError("form not odd-nonsingular")
    if det == 1:
        return LinkingForm()
    n = len(rows)
    # generator g_i = U^{-1} e_i has order d_i, and A^{-1} g_j = V e_j / d_j
    live = [i for i, d in enumerate(snf.d) if d > 1]
    gens = [(snf.d[i], [snf.U_inv[r][i] for r in range(n)]) for i in live]
    cols = [[snf.V[r][i] for r in range(n)] for i in live]
    base = [[frac_mod1(Fraction(sum(a * b for a, b in zip(gi, cj)), dj))
             for cj, (dj, _) in zip(cols, gens)] for _, gi in gens]

    summands = []
    for p in sorted(factorint(abs(det))):
        orders, idx, idem = [], [], []
        for k, (d, _) in enumerate(gens):
            if d % p:
                continue
            pv = p ** p_adic_valuation(d, p)
            cof = d // pv
            # CRT idempotent of Z/d projecting onto its p-part
            idem.append(cof * pow(cof, -1, pv) % d)
            orders.append(pv)
            idx.append(k)
        gram = [[frac_mod1(ei * ej * base[i][j]) for j, ej in zip(idx, idem)]
                for i, ei in zip(idx, idem)]
        summands.extend(diagonalize(orders, gram))
    return LinkingForm(tuple(summands))


def diagonalize(orders: Sequence[int], gram: Sequence[Sequence[Fraction]]) -> list[CyclicSummand]:
    """Split a linking form on a p-group into cyclic orthogonal summands.

    ``orders[i]`` is the order of the i-th generator (all powers of one odd
    prime) and ``gram[i][j]`` the pairing of generators i and j in Q/Z.
    """
    k = len(orders)
    if k == 0:
        return []
    p = min(factorint(orders[0]))
    exps = []
    for o in orders:
        if o < p or p ** p_adic_valuation(o, p) != o:
            raise ValueError("orders must be powers of a single prime")
        exps.append(p_adic_valuation(o, p))
    if not is_odd_prime(p):
        raise ValueError("group order must be odd")
    E = max(exps)
    M = p ** E
    B = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            x = Fraction(gram[i][j])
            if frac_mod1(x - Fraction(gram[j][i])) != 0:
                raise ValueError("pairing is not symmetric")
            if (x * orders[i]).denominator != 1:
                raise ValueError("pairing is not well defined on the given orders")
            B[i][j] = int(x * M) % M

    def scaled(x, y, m):
        # beta(x, y) * p^m, valid when both elements have order dividing p^m
        t = sum(x[i] * B[i][j] * y[j] for i in range(k) if x[i]
                for j in range(k) if y[j]) % M
        return (t // p ** (E - m)) % p ** m

    basis = [([int(i == j) for j in range(k)], exps[i]) for i in range(k)]
    out = []
    while basis:
        m = max(e for _, e in basis)
        top = [i for i, (_, e) in enumerate(basis) if e == m]
        pick = next((i for i in top if scaled(basis[i][0], basis[i][0], m) % p), None)
        if pick is None:
            pair = next(((i, j) for i in top for j in top
                         if i != j and scaled(basis[i][0], basis[j][0], m) % p), None)
            if pair is None:
                raise ValueError("singular pairing")
            i, j = pair
            vi, vj = basis[i][0], basis[j][0]
            basis[i] = ([(x + y) % o for x, y, o in zip(vi, vj, orders)], m)
            pick = i
        x, _ = basis.pop(pick)
        mod = p ** m
        u = scaled(x, x, m)
        out.append(CyclicSummand(p, m, u))
        uinv = pow(u, -1, mod)
        for idx, (y, e) in enumerate(basis):
            c = scaled(x, y, m) * uinv % mod
            if c:
                basis[idx] = ([(yy - c * xx) % o for yy, xx, o in zip(y, x, orders)], e)
    return out


def cyclic_form(alpha: int, beta: int) -> LinkingForm:
    """The form ``(x, y) -> beta x y / alpha`` on Z/alpha, for odd alpha."""
    if alpha < 1 or alpha % 2 == 0 or math.gcd(alpha, beta) != 1:
        raise ValueError("need odd alpha coprime to beta")
    out = []
    for p, v in sorted(factorint(alpha).items()):
        pv = p ** v
        cof = alpha // pv
        # the generator cof of the p-part pairs with itself to beta cof^2 / alpha
        out.append(CyclicSummand(p, v, beta * cof % pv))
    return LinkingForm(tuple(out))


# -- discriminant and metabolic tests ---------------------------------------

def discriminant(f: LinkingForm, p: int) -> int | None:
    """Square class of ``(-1)^{n(n-1)/2} det`` of the p-part over F_p.

    Returns +1 for the square class, -1 for the nonsquare class, and None
    when the p-primary part is not elementary.
    """
    comp = [s for s in f.summands if s.p == p]
    if any(s.n != 1 for s in comp):
        return None
    r = len(comp)
    d = (-1) ** (r * (r - 1) // 2) * math.prod(s.a for s in comp)
    return legendre(d, p) if comp else 1


def _witt_trivial(comp: Sequence[CyclicSummand], p: int) -> bool:
    # summands with even exponent are metabolic; odd ones reduce to F_p
    odd = [s for s in comp if s.n % 2 == 1]
    r = len(odd)
    if r % 2:
        return False
    return legendre((-1) ** (r // 2) * math.prod(s.a for s in odd), p) == 1


def brute_force_metabolic(orders: Sequence[int], weights: Sequence[int], modulus: int) -> bool:
    """Search for a self-annihilating subgroup of half order.

    The group is ``prod Z/orders[i]`` with diagonal pairing
    ``beta(x, y) = sum weights[i] x_i y_i / modulus``.  Every isotropic
    subgroup is visited at most once.
    """
    size = math.prod(orders)
    target = math.isqrt(size)
    if target * target != size:
        return False
    if size == 1:
        return True
    k = len(orders)

    def beta(x, y):
        return sum(w * a * b for w, a, b in zip(weights, x, y)) % modulus

    zero = (0,) * k
    iso = [g for g in itertools.product(*(range(o) for o in orders))
           if g != zero and beta(g, g) == 0]

    def extend(h: frozenset, g) -> frozenset:
        out = set(h)
        cur = g
        while cur != zero:
            out.update(tuple((a + b) % o for a, b, o in zip(x, cur, orders)) for x in h)
            cur = tuple((a + b) % o for a, b, o in zip(cur, g, orders))
        return frozenset(out)

    seen = set()

    def dfs(h: frozenset, cands: list) -> bool:
        if len(h) == target:
            return True
        for g in cands:
            h2 = extend(h, g)
            if h2 in seen:
                continue
            seen.add(h2)
            rest = [c for c in cands if c not in h2 and beta(c, g) == 0]
            if dfs(h2, rest):
                return True
        return False

    return dfs(frozenset([zero]), iso)


def _brute_force_component(comp: Sequence[CyclicSummand]) -> bool:
    E = max(s.n for s in comp)
    p = comp[0].p
    M = p ** E
    return brute_force_metabolic([s.order for s in comp],
                                 [s.a * p ** (E - s.n) for s in comp], M)


def is_metabolic(f: LinkingForm) -> bool | None:
    """Whether f vanishes on a subgroup of half order.

    Each p-primary part is decided by its Witt class; parts of order at
    most ``BRUTE_FORCE_LIMIT`` are also searched exhaustively and the two
    answers must agree.  Larger non-elementary parts give None
    ("undecided").
    """
    verdicts = []
    for p in f.primes:
        comp = [s for s in f.summands if s.p == p]
        witt = _witt_trivial(comp, p)
        size = math.prod(s.order for s in comp)
        if size <= BRUTE_FORCE_LIMIT:
            brute = _brute_force_component(comp)
            if brute != witt:
                raise RuntimeError(f"metabolic criteria disagree on {LinkingForm(tuple(comp))}")
            verdicts.append(brute)
        elif f.is_elementary(p):
            verdicts.append(witt)
        else:
            verdicts.append(None)
    if False in verdicts:
        return False
    if None in verdicts:
        return None
    return True


# -- quadratic refinements and Gauss sums -----------------------------------

@dataclass(frozen=True)
class QuadraticRefinement:
    """``q(g) = beta(2* g, g)`` where 2* inverts 2 on the odd group."""

    base: LinkingForm

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(s.order for s in self.base.summands)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(o) for o in self.orders))

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return frac_mod1(sum(Fraction(s.a * a * b, s.order)
                             for s, a, b in zip(self.base.summands, x, y)))

    @classmethod
    def cyclic(cls, p: int, n: int, a: int) -> "QuadraticRefinement":
        """The function ``x -> a x^2 / p^n`` on Z/p^n.

        It refines l(p, n, 2a), because its polarization is 2a xy / p^n.
        """
        return cls(LinkingForm(((p, n, 2 * a),)))

    def __call__(self, x: Sequence[int]) -> Fraction:
        e = math.lcm(*self.orders) if self.orders else 1
        half = (e + 1) // 2
        return self.pairing([half * a for a in x], x)


def _cyclotomic_prime_power_remainder(coeffs: Sequence[int], p: int, e: int) -> list[int]:
    """Reduce a polynomial of degree < p^e modulo the p^e-th cyclotomic polynomial."""
    step = p ** (e - 1)
    deg = (p - 1) * step
    c = list(coeffs)
    for d in range(len(c) - 1, deg - 1, -1):
        lead = c[d]
        if lead:
            # Phi = sum_{j<p} x^{j*step}; x^deg = -sum_{j<p-1} x^{j*step}
            base = d - deg
            for j in range(p - 1):
                c[base + j * step] -= lead
            c[d] = 0
    return c[:deg]


def _component_gamma(comp: Sequence[CyclicSummand]) -> EighthRoot:
    p = comp[0].p
    E = max(s.n for s in comp)
    M = p ** E
    size = math.prod(s.order for s in comp)
    if size > GAUSS_SUM_LIMIT:
        raise ValueError("group too large for an exhaustive Gauss sum")
    weights = [s.a * ((s.order + 1) // 2) * p ** (E - s.n) % M for s in comp]
    counts = kernels.residue_counts(weights, [s.order for s in comp], M)
    total = _cyclotomic_prime_power_remainder(counts, p, E)

    def scalar(c):
        return [c] + [0] * (len(total) - 1)

    root = math.isqrt(size)
    if root * root == size:
        if total == scalar(root):
            return EighthRoot(0)
        if total == scalar(-root):
            return EighthRoot(4)
        raise RuntimeError("Gauss sum is not a fourth root of unity")
    # |G| = p^(2j+1): compare with +-p^j times the quadratic Gauss sum of F_p,
    # which is sqrt(p) for p = 1 mod 4 and i sqrt(p) for p = 3 mod 4
    j = p_adic_valuation(size, p) // 2
    step = p ** (E - 1)
    g = [0] * M
    for x in range(1, p):
        g[x * step] = legendre(x, p) * p ** j
    g = _cyclotomic_prime_power_remainder(g, p, E)
    base = 0 if p % 4 == 1 else 2
    if total == g:
        return EighthRoot(base)
    if total == [-c for c in g]:
        return EighthRoot(base + 4)
    raise RuntimeError("Gauss sum is not a fourth root of unity")


def gauss_gamma(q: QuadraticRefinement) -> EighthRoot:
    """``|G|^{-1/2} sum_g exp(2 pi i q(g))`` by exhaustive summation.

    Each p-primary part is summed over all of its elements into the
    cyclotomic integers Z[zeta_{p^E}] and identified there exactly.
    """
    out = EighthRoot(0)
    for p in q.base.primes:
        out += _component_gamma([s for s in q.base.summands if s.p == p])
    return out


def lambda_summand(s: CyclicSummand) -> EighthRoot:
    """Closed form of the Gauss sum of the refinement of l(p, n, a)."""
    if s.n % 2 == 0:
        return EighthRoot(0)
    base = {1: 0, 3: 6, 5: 4, 7: 2}[s.p % 8]
    return EighthRoot(base + (0 if s.legendre == 1 else 4))


def gauss_lambda(f: LinkingForm) -> EighthRoot:
    out = EighthRoot(0)
    for s in f.summands:
        out += lambda_summand(s)
    return out
