"""Obstructions to small nonorientable surfaces in the 4-ball and the h ladder.

Each test returns an :class:`ObstructionResult` carrying a verdict, a
stable rule identifier and the numbers it was decided on.  The ladder in
:func:`h_lower_bound` climbs one rung at a time:

- h >= 1 when minus the linking form is not metabolic (a slice disk
  would make it metabolic);
- h >= 2 when in addition a Mobius band is excluded;
- h >= 3 when in addition every Klein bottle is excluded, either by the
  discriminant test or by all three of the definite and indefinite tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .definite_fillings import negdef_rank2_excluded
from .exact_algebra import is_odd_prime, legendre
from .knot_model import KnotInvariants, KnotSpec, invariants, render
from .linking_forms import LinkingForm, discriminant, is_metabolic
from .verdicts import Verdict


@dataclass(frozen=True)
class ObstructionResult:
    verdict: Verdict
    rule: str
    detail: dict[str, Any] = field(default_factory=dict, hash=False, compare=False)

    @property
    def fired(self) -> bool:
        return self.verdict is Verdict.EXCLUDED


def sigma_arf_value(inv: KnotInvariants) -> int:
    return (inv.signature + 4 * inv.arf) % 8


def _signed_residue(x: int, p: int) -> int:
    x %= p
    return x - p if x > p // 2 else x


def _prime_parts(form: LinkingForm) -> dict[int, list]:
    out: dict[int, list] = {}
    for s in form.summands:
        out.setdefault(s.p, []).append(s)
    return out


def yasuhara_mobius(inv: KnotInvariants) -> ObstructionResult:
    """A Mobius band forces ``sigma + 4 Arf`` into {0, 2, 6} mod 8."""
    v = sigma_arf_value(inv)
    verdict = Verdict.PASSED if v in (0, 2, 6) else Verdict.EXCLUDED
    return ObstructionResult(verdict, "mobius-sigma-arf", {"value_mod_8": v})


def rank1_linking_mobius(inv: KnotInvariants) -> ObstructionResult:
    """A Mobius band forces a generator g with lk(g, g) = +-1/n.

    Needs H_1 cyclic of order n with every prime to an odd power.  With
    lk(g, g) = lambda / n we need ``s lambda`` to be a square mod n for a
    sign s, which is decided prime by prime with Legendre symbols.
    """
    rule = "mobius-rank1-linking"
    lk = inv.linking_form
    parts = _prime_parts(lk)
    if any(len(v) > 1 for v in parts.values()):
        return ObstructionResult(Verdict.INAPPLICABLE, rule, {"reason": "H_1 not cyclic"})
    if any(v[0].n % 2 == 0 for v in parts.values()):
        return ObstructionResult(Verdict.INAPPLICABLE, rule, {"reason": "a prime divides n to an even power"})
    n = lk.order
    # the p-part generator pairs to a_p / p^e, so lambda = a_p (n / p^e) mod p^e
    lam = {p: v[0].a * (n // v[0].order) % p for p, v in parts.items()}
    signs = [s for s in (1, -1) if all(legendre(s * l, p) == 1 for p, l in lam.items())]
    detail = {"n": n, "units_mod_p": {str(p): _signed_residue(l, p) for p, l in lam.items()},
              "signs_attained": signs}
    return ObstructionResult(Verdict.PASSED if signs else Verdict.EXCLUDED, rule, detail)


def klein_homological(inv: KnotInvariants) -> ObstructionResult:
    """A Klein bottle with H_1 = Z_p + Z_p forces disc = +-1."""
    rule = "klein-discriminant"
    lk = inv.linking_form
    parts = _prime_parts(lk)
    if len(parts) != 1:
        return ObstructionResult(Verdict.INAPPLICABLE, rule, {"reason": "H_1 not Z_p + Z_p"})
    (p, comp), = parts.items()
    if len(comp) != 2 or any(s.n != 1 for s in comp):
        return ObstructionResult(Verdict.INAPPLICABLE, rule, {"reason": "H_1 not Z_p + Z_p"})
    d = -math.prod(s.a for s in comp)
    cls = discriminant(lk, p)
    pm1 = legendre(d, p) == 1 or legendre(-d, p) == 1
    detail = {"p": p, "disc": _signed_residue(d, p), "square_class": cls, "is_plus_minus_one": pm1}
    return ObstructionResult(Verdict.PASSED if pm1 else Verdict.EXCLUDED, rule, detail)


def posdef_closed_form(lens) -> dict[str, int] | None:
    """``4 floor((q+1)/4) + 2 (b/q) - 2p - q mod 8`` for lens data L(p,a)^2 # L(q,b).

    Only reported alongside the positive definite test; the verdict itself
    is decided on ``sigma + 4 Arf``.
    """
    if lens is None or len(lens) != 3:
        return None
    groups = sorted(lens, key=lambda x: (lens.count(x) == 1, x))
    (p, a), (p2, a2), (q, b) = groups
    if (p, a) != (p2, a2) or p == q or not all(map(is_odd_prime, (p, q))):
        return None
    floor = (q + 1) // 4
    leg = legendre(b, q)
    return {"p": p, "q": q, "b": b, "floor": floor, "legendre_b_q": leg,
            "value_mod_8": (4 * floor + 2 * leg - 2 * p - q) % 8}


def klein_definite(inv: KnotInvariants) -> dict[str, ObstructionResult]:
    """Definite W(F) forces ``sigma + 4 Arf`` into {0,2,4} (positive) or {0,4,6} (negative)."""
    v = sigma_arf_value(inv)
    pos = Verdict.PASSED if v in (0, 2, 4) else Verdict.EXCLUDED
    neg = Verdict.PASSED if v in (0, 4, 6) else Verdict.EXCLUDED
    pos_detail = {"value_mod_8": v}
    closed = posdef_closed_form(inv.lens)
    if closed is not None:
        pos_detail["closed_form"] = closed
    return {
        "posdef": ObstructionResult(pos, "klein-posdef-sigma-arf", pos_detail),
        "negdef_mod8": ObstructionResult(neg, "klein-negdef-sigma-arf", {"value_mod_8": v}),
    }


def klein_indefinite(inv: KnotInvariants) -> ObstructionResult:
    """Indefinite W(F) with H_1 = Z_p + Z_p + Z_q, q a square mod p, makes the p-part metabolic."""
    rule = "klein-indefinite-metabolic"
    lk = inv.linking_form
    parts = _prime_parts(lk)
    shape = sorted((len(v), p) for p, v in parts.items())
    if (len(shape) != 2 or [c for c, _ in shape] != [1, 2]
            or any(s.n != 1 for s in lk.summands)):
        return ObstructionResult(Verdict.INAPPLICABLE, rule, {"reason": "H_1 not Z_p + Z_p + Z_q"})
    q, p = shape[0][1], shape[1][1]
    if legendre(q, p) != 1:
        return ObstructionResult(Verdict.INAPPLICABLE, rule,
                                 {"p": p, "q": q, "reason": "q is not a square mod p"})
    meta = is_metabolic(lk.p_part(p))
    detail = {"p": p, "q": q, "p_part": str(lk.p_part(p)), "p_part_metabolic": meta}
    return ObstructionResult(Verdict.PASSED if meta else Verdict.EXCLUDED, rule, detail)


def negdef_d_invariant(inv: KnotInvariants, enabled: bool = True) -> ObstructionResult:
    rule = "klein-negdef-d-invariant"
    if not enabled:
        return ObstructionResult(Verdict.INAPPLICABLE, rule, {"reason": "not requested"})
    res = negdef_rank2_excluded(inv.lens, inv.D)
    detail = {"note": res.note}
    if res.N is not None:
        detail.update({"N": str(res.N), "max_4d": str(res.max_4d)})
    return ObstructionResult(res.verdict, rule, detail)


@dataclass(frozen=True)
class LadderStep:
    bound: int
    rule: str
    reason: str


@dataclass(frozen=True)
class ObstructionReport:
    knot: KnotSpec
    invariants: KnotInvariants
    metabolic: bool | None
    mobius: dict[str, ObstructionResult]
    klein: dict[str, ObstructionResult]
    h_lower_bound: int
    chain: tuple[LadderStep, ...]
    notes: tuple[str, ...] = ()

    @property
    def knot_text(self) -> str:
        return render(self.knot)

    def verdicts(self) -> dict[str, str]:
        out = {f"mobius.{k}": str(v.verdict) for k, v in self.mobius.items()}
        out.update({f"klein.{k}": str(v.verdict) for k, v in self.klein.items()})
        return out


def _aggregate_negdef(mod8: ObstructionResult, dinv: ObstructionResult) -> ObstructionResult:
    fired = [r.rule for r in (mod8, dinv) if r.fired]
    verdict = Verdict.EXCLUDED if fired else Verdict.POSSIBLE
    return ObstructionResult(verdict, "+".join(fired) if fired else "klein-negdef",
                             {"mod8": str(mod8.verdict), "d_invariant": str(dinv.verdict)})


def h_lower_bound(k: KnotSpec, use_negdef_dinv: bool = False) -> ObstructionReport:
    inv = invariants(k)
    meta = is_metabolic(inv.minus_linking_form)
    mobius = {"yasuhara": yasuhara_mobius(inv), "rank1_linking": rank1_linking_mobius(inv)}
    definite = klein_definite(inv)
    dinv = negdef_d_invariant(inv, use_negdef_dinv)
    klein = {
        "homological_disc": klein_homological(inv),
        "posdef": definite["posdef"],
        "negdef_mod8": definite["negdef_mod8"],
        "negdef_dinv": dinv,
        "negdef": _aggregate_negdef(definite["negdef_mod8"], dinv),
        "indef": klein_indefinite(inv),
    }

    notes = []
    chain = [LadderStep(0, "trivial", "h is nonnegative")]
    if meta is None:
        notes.append("metabolic test undecided for a large non-elementary group; no bound claimed")
    if meta is False:
        chain.append(LadderStep(1, "slice-metabolic",
                                f"minus the linking form {inv.minus_linking_form} is not metabolic"))
        fired = [r for r in mobius.values() if r.fired]
        if fired:
            chain.append(LadderStep(2, "+".join(r.rule for r in fired), "no Mobius band bounds K"))
            if klein["homological_disc"].fired:
                chain.append(LadderStep(3, klein["homological_disc"].rule,
                                        "discriminant rules out every Klein bottle"))
            elif all(klein[key].fired for key in ("posdef", "negdef", "indef")):
                rules = "+".join(klein[key].rule for key in ("posdef", "negdef", "indef"))
                chain.append(LadderStep(3, rules, "positive definite, negative definite and "
                                        "indefinite Klein bottle fillings all excluded"))
    return ObstructionReport(k, inv, meta, mobius, klein, chain[-1].bound, tuple(chain), tuple(notes))
