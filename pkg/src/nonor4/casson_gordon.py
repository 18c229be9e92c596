"""Casson-Gordon signatures of lens spaces and ribbon genus bounds.

For L(alpha, beta) and a character of H_1 = Z/alpha onto Z/p sending the
generator to exp(2 pi i r / p), the signature defect is the cotangent sum

    sigma(r) = (2 / alpha) sum_{k=1}^{alpha-1}
               cot(pi k beta / alpha) cot(pi k / alpha) sin^2(pi k r / p)

evaluated in high precision and then identified with a rational of
denominator p (an integer whenever p^2 divides alpha).

If nK bounds a ribbon surface F with h(F) = h, its double branched cover
bounds a 4-manifold whose Z/p covers give, for some x >= (n - h)/2 and
y <= (n + h)/2 with x + y = n, the inequality
``x sigma_max + y sigma_min <= x + y + 2h``.  With sigma_min >= 1 the
worst case y = (n + h)/2 gives ``h >= n (sigma_max - 1) / (sigma_max + 3)``,
and h < n is impossible once ``n < (sigma_max + 3) / 4``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from sympy import primefactors

# single global calibration of the cotangent sum
CG_SCALE = 2
CG_SIGN = 1
RESIDUAL_LIMIT = 1e-6
DEFAULT_PRECISION = 50


def precision_digits() -> int:
    raw = os.environ.get("NONOR4_PRECISION_DIGITS", "")
    if not raw:
        return DEFAULT_PRECISION
    digits = int(raw)
    if digits < 15:
        raise ValueError("NONOR4_PRECISION_DIGITS must be at least 15")
    return digits


@dataclass(frozen=True)
class CgSignatureSet:
    alpha: int
    beta: int
    p: int
    sigma: dict[int, Fraction] = field(hash=False)
    residual: float
    digits: int

    @property
    def sigma_max(self) -> Fraction:
        return max(self.sigma.values())

    @property
    def sigma_min(self) -> Fraction:
        return min(self.sigma.values())


def cg_signatures(alpha: int, beta: int, p: int) -> CgSignatureSet:
    if alpha < 3 or alpha % 2 == 0 or math.gcd(alpha, beta) != 1:
        raise ValueError("need odd alpha >= 3 coprime to beta")
    if p not in primefactors(alpha):
        raise ValueError(f"{p} is not a prime divisor of {alpha}")
    digits = precision_digits()
    ctx = mpmath.MPContext()
    ctx.dps = digits
    pi = ctx.pi
    weights = [ctx.cot(pi * k * beta / alpha) * ctx.cot(pi * k / alpha) for k in range(1, alpha)]
    sigma = {}
    worst = 0.0
    for r in range(1, p):
        s = ctx.fsum(w * ctx.sin(pi * k * r / p) ** 2 for k, w in enumerate(weights, start=1))
        s = CG_SIGN * CG_SCALE * s / alpha
        scaled = s * p
        nearest = int(ctx.nint(scaled))
        residual = float(abs(scaled - nearest))
        if residual >= RESIDUAL_LIMIT:
            raise ArithmeticError("precision or formula fault")
        worst = max(worst, residual)
        sigma[r] = Fraction(nearest, p)
    return CgSignatureSet(alpha, beta, p, sigma, worst, digits)


@dataclass(frozen=True)
class PrimeBound:
    p: int
    sigma_max: Fraction
    sigma_min: Fraction
    bound: int | None
    rule: str


@dataclass(frozen=True)
class RibbonBoundReport:
    alpha: int
    beta: int
    n: int
    bound: int
    rule: str
    per_prime: tuple[PrimeBound, ...] = ()

    @property
    def applicable(self) -> bool:
        return self.rule != "inapplicable"


def _prime_bound(cg: CgSignatureSet, n: int) -> PrimeBound:
    smax, smin = cg.sigma_max, cg.sigma_min
    if smin < 1:
        return PrimeBound(cg.p, smax, smin, None, "inapplicable")
    ratio = (smax - 1) / (smax + 3)
    linear = math.ceil(n * ratio)
    if n < (smax + 3) / 4:
        return PrimeBound(cg.p, smax, smin, max(n, linear), "ribbon-cg-integrality")
    return PrimeBound(cg.p, smax, smin, linear, "ribbon-cg-linear")


def ribbon_bound(alpha: int, beta: int, n: int) -> RibbonBoundReport:
    """Lower bound on the nonorientable ribbon genus of n copies of K_{alpha/beta}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return RibbonBoundReport(alpha, beta, 0, 0, "empty-sum")
    per = tuple(_prime_bound(cg_signatures(alpha, beta, p), n) for p in primefactors(alpha))
    usable = [b for b in per if b.bound is not None]
    if not usable:
        return RibbonBoundReport(alpha, beta, n, 0, "inapplicable", per)
    best = max(usable, key=lambda b: (b.bound, b.rule == "ribbon-cg-integrality"))
    return RibbonBoundReport(alpha, beta, n, best.bound, best.rule, per)
