"""Report documents and their JSON and text renderings.

``ReportDocument.from_json(doc.to_json())`` reproduces ``doc`` exactly;
the field-by-field layout is described in docs/report-schema.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__, casson_gordon, kernels
from .casson_gordon import PrimeBound, RibbonBoundReport
from .knot_model import KnotInvariants, KnotSpec, Mirror, Seifert, Sum, TwoBridge, render
from .linking_forms import LinkingForm
from .obstruction_engine import LadderStep, ObstructionReport, ObstructionResult
from .verdicts import Verdict

SCHEMA = "nonor4.report/1"


def toolchain() -> dict[str, Any]:
    return {
        "version": __version__,
        "backend": kernels.BACKEND,
        "cg_scale": casson_gordon.CG_SCALE,
        "cg_sign": casson_gordon.CG_SIGN,
        "cg_precision_digits": casson_gordon.precision_digits(),
        "d_invariant_calibration": "d(L(2,1)) = {1/4, -1/4}",
    }


# -- knot trees ---------------------------------------------------------------

def knot_to_json(k: KnotSpec) -> dict[str, Any]:
    if isinstance(k, Seifert):
        return {"type": "seifert", "V": [list(r) for r in k.V], "name": k.name,
                "lens": list(k.lens) if k.lens else None}
    if isinstance(k, TwoBridge):
        return {"type": "two_bridge", "alpha": k.alpha, "beta": k.beta}
    if isinstance(k, Mirror):
        return {"type": "mirror", "child": knot_to_json(k.child)}
    return {"type": "sum", "children": [knot_to_json(c) for c in k.children]}


def knot_from_json(d: dict[str, Any]) -> KnotSpec:
    t = d["type"]
    if t == "seifert":
        return Seifert(tuple(tuple(r) for r in d["V"]), d["name"],
                       tuple(d["lens"]) if d["lens"] else None)
    if t == "two_bridge":
        return TwoBridge(d["alpha"], d["beta"])
    if t == "mirror":
        return Mirror(knot_from_json(d["child"]))
    if t == "sum":
        return Sum(tuple(knot_from_json(c) for c in d["children"]))
    raise ValueError(f"unknown knot node type {t!r}")


# -- pieces -------------------------------------------------------------------

def invariants_to_json(inv: KnotInvariants) -> dict[str, Any]:
    return {
        "determinant": inv.D,
        "signature": inv.signature,
        "arf": inv.arf,
        "arf_method": inv.arf_method,
        "minus_linking_form": str(inv.minus_linking_form),
        "linking_form": str(inv.linking_form),
        "lens": [list(x) for x in inv.lens] if inv.lens is not None else None,
    }


def invariants_from_json(d: dict[str, Any]) -> KnotInvariants:
    lens = tuple(tuple(x) for x in d["lens"]) if d["lens"] is not None else None
    return KnotInvariants(d["determinant"], d["signature"], d["arf"],
                          LinkingForm.parse(d["minus_linking_form"]), lens, d["arf_method"])


def result_to_json(r: ObstructionResult) -> dict[str, Any]:
    return {"verdict": r.verdict.value, "rule": r.rule, "detail": r.detail}


def result_from_json(d: dict[str, Any]) -> ObstructionResult:
    return ObstructionResult(Verdict(d["verdict"]), d["rule"], d["detail"])


def obstruction_to_json(rep: ObstructionReport) -> dict[str, Any]:
    return {
        "metabolic": rep.metabolic,
        "mobius": {k: result_to_json(v) for k, v in rep.mobius.items()},
        "klein": {k: result_to_json(v) for k, v in rep.klein.items()},
        "h_lower_bound": rep.h_lower_bound,
        "chain": [{"bound": s.bound, "rule": s.rule, "reason": s.reason} for s in rep.chain],
        "notes": list(rep.notes),
    }


def obstruction_from_json(d: dict[str, Any], knot: KnotSpec, inv: KnotInvariants) -> ObstructionReport:
    return ObstructionReport(
        knot, inv, d["metabolic"],
        {k: result_from_json(v) for k, v in d["mobius"].items()},
        {k: result_from_json(v) for k, v in d["klein"].items()},
        d["h_lower_bound"],
        tuple(LadderStep(s["bound"], s["rule"], s["reason"]) for s in d["chain"]),
        tuple(d["notes"]),
    )


def ribbon_to_json(r: RibbonBoundReport) -> dict[str, Any]:
    return {
        "alpha": r.alpha, "beta": r.beta, "n": r.n, "bound": r.bound, "rule": r.rule,
        "per_prime": [{"p": b.p, "sigma_max": str(b.sigma_max), "sigma_min": str(b.sigma_min),
                       "bound": b.bound, "rule": b.rule} for b in r.per_prime],
    }


def ribbon_from_json(d: dict[str, Any]) -> RibbonBoundReport:
    per = tuple(PrimeBound(b["p"], Fraction(b["sigma_max"]), Fraction(b["sigma_min"]),
                           b["bound"], b["rule"]) for b in d["per_prime"])
    return RibbonBoundReport(d["alpha"], d["beta"], d["n"], d["bound"], d["rule"], per)


# -- documents ----------------------------------------------------------------

@dataclass(frozen=True)
class ReportDocument:
    input: str
    knot: KnotSpec
    invariants: KnotInvariants
    obstruction: ObstructionReport
    ribbon: RibbonBoundReport | None = None
    toolchain: dict[str, Any] = field(default_factory=toolchain, hash=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "input": self.input,
            "knot": {"text": render(self.knot), "tree": knot_to_json(self.knot)},
            "invariants": invariants_to_json(self.invariants),
            "obstructions": obstruction_to_json(self.obstruction),
            "ribbon": ribbon_to_json(self.ribbon) if self.ribbon else None,
            "toolchain": dict(self.toolchain),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ReportDocument":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        knot = knot_from_json(d["knot"]["tree"])
        inv = invariants_from_json(d["invariants"])
        obs = obstruction_from_json(d["obstructions"], knot, inv)
        ribbon = ribbon_from_json(d["ribbon"]) if d["ribbon"] else None
        return cls(d["input"], knot, inv, obs, ribbon, dict(d["toolchain"]))

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))

    def verdict_lines(self) -> list[str]:
        out = []
        for group in ("mobius", "klein"):
            for name, r in getattr(self.obstruction, group).items():
                out.append(f"verdict {group}.{name}: {r.verdict.value} [{r.rule}]")
        return out

    def to_text(self) -> str:
        inv = self.invariants
        obs = self.obstruction
        lines = [
            f"knot: {render(self.knot)}",
            f"determinant: {inv.D}",
            f"signature: {inv.signature}",
            f"arf: {inv.arf} ({inv.arf_method})",
            f"minus linking form: {inv.minus_linking_form}",
            "metabolic: " + {True: "yes", False: "no", None: "undecided"}[obs.metabolic],
        ]
        lines += self.verdict_lines()
        for step in obs.chain:
            lines.append(f"step h >= {step.bound}: {step.rule} ({step.reason})")
        lines += [f"note: {n}" for n in obs.notes]
        lines.append(f"h_lower_bound: {obs.h_lower_bound}")
        if self.ribbon is not None:
            r = self.ribbon
            for b in r.per_prime:
                lines.append(f"cg p={b.p}: sigma_max={b.sigma_max} sigma_min={b.sigma_min} "
                             f"bound={b.bound} [{b.rule}]")
            lines.append(f"ribbon_lower_bound: {r.bound} for n={r.n} [{r.rule}]")
        return "\n".join(lines)


def parse_verdict_lines(text: str) -> dict[str, tuple[str, str]]:
    """Read the verdict lines back out of a text rendering."""
    out = {}
    for line in text.splitlines():
        if line.startswith("verdict "):
            key, rest = line[len("verdict "):].split(": ", 1)
            verdict, rule = rest.split(" [", 1)
            out[key] = (verdict, rule.rstrip("]"))
    return out
