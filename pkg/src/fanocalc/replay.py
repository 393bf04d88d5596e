"""Data-driven replay of the case analysis behind the bounds 59 and 58.

The proof is shipped as data: a ledger of scenarios, one per case or
subcase, each recording the hypotheses (an exact basket, or bounds on
-K^3, r_X and r_max), the probe integer of the pencil dichotomy, and
the rules that produce mu0', m1, N_0 and the final criterion.  The
engine re-derives every quantity, re-checks every inequality with exact
arithmetic, and emits a machine-checkable certificate per scenario.

Scenario bounds are always consumed in the pessimal direction: criteria
are evaluated at the -K^3 lower bound, at every admissible r_max, and
at the largest admissible r_X for each r_max (capped by lcm(2..r_max),
which is forced because every local index is at most r_max).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Any, Callable, Iterable

from .basket import (
    Basket,
    FanoNumerics,
    anti_plurigenus,
    cartier_index,
    deg_k3,
    format_rational,
    gamma,
    parse_rational,
    r_max,
    refine_k3_lower,
)
from .criteria import (
    CriterionParams,
    RationalBound,
    growth_holds_at,
    n0_lower_bound,
    nonpencil_holds_at,
    nonpencil_min_m,
    pencil_equality_analysis,
    sqrt_bound_terms,
    sqrt_gate_holds,
    two_system_terms,
)
from .geography import plurigenera_nondecreasing

LEDGER_FORMAT = "fanocalc-ledger/1"


class VerificationFailure(RuntimeError):
    """An inequality recorded in a certificate failed re-verification."""


class LedgerFormatError(ValueError):
    """A scenario or ledger file violates the schema."""


# ---------------------------------------------------------------------------
# checks: small typed records, re-verifiable from their own arguments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    kind: str
    args: dict
    ok: bool
    note: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "args": self.args, "ok": self.ok, "note": self.note}


def _frac(args: dict, key: str) -> Fraction:
    return parse_rational(str(args[key]))


def _basket(args: dict, key: str = "basket") -> Basket:
    return Basket.from_json(args[key])


def _eval_criterion(args: dict) -> int | None:
    """Recompute a criterion bound from its recorded raw inputs."""
    mu0 = RationalBound(_frac(args["mu0"], "value"), bool(args["mu0"]["strict_upper"]))
    family, variant = args["family"], args.get("variant")
    result: int | None = None
    for point in args["points"]:
        params = CriterionParams(
            m0=args["m0"],
            mu0=mu0,
            nu0=args["nu0"],
            r_max=point["r_max"],
            r_x=point["r_x"],
            n0=args["n0"],
            m1=args.get("m1"),
        )
        if family == "two_system":
            value = max(two_system_terms(variant, params).values())
        elif family == "sqrt":
            if variant == 2 and not sqrt_gate_holds(params):
                return None
            value = max(sqrt_bound_terms(variant, params).values())
        else:
            raise LedgerFormatError(f"unknown criterion family {family!r}")
        result = value if result is None else max(result, value)
    return result


_VERIFIERS: dict[str, Callable[[dict], bool]] = {
    "growth_at": lambda a: growth_holds_at(
        a["m"], _frac(a, "t"), _frac(a, "l"), _frac(a, "k3"), a["r_max"]
    ),
    "nonpencil_at": lambda a: nonpencil_holds_at(
        a["m"], _frac(a, "t"), _frac(a, "k3"), a["r_x"], a["r_max"], a["variant"]
    ),
    "nonpencil_minimal": lambda a: a["m"] == 1
    or not nonpencil_holds_at(
        a["m"] - 1, _frac(a, "t"), _frac(a, "k3"), a["r_x"], a["r_max"], a["variant"]
    ),
    "plurigenus_exceeds": lambda a: anti_plurigenus(
        FanoNumerics(_basket(a), a["p1"]), a["m"]
    )
    > _frac(a, "rhs"),
    "plurigenus_at_least": lambda a: anti_plurigenus(
        FanoNumerics(_basket(a), a["p1"]), a["m"]
    )
    >= a["rhs"],
    "m1_at_least_m0": lambda a: a["m1"] >= a["m0"],
    "arith_eq": lambda a: _frac(a, "lhs") == _frac(a, "rhs"),
    "arith_ge": lambda a: _frac(a, "lhs") >= _frac(a, "rhs"),
    "n0_value": lambda a: n0_lower_bound(a["r_x"], a["m1"], a["nu0"], a["r_max"])
    == a["n0"],
    "criterion_eval": lambda a: _eval_criterion(a) == a["result"],
    "bound_within_claim": lambda a: a["certified"] <= a["claimed"],
    "k3_refinement": lambda a: refine_k3_lower(_frac(a, "base"), a["r_x"])
    == _frac(a, "refined"),
    "gamma_nonneg": lambda a: gamma(_basket(a)) >= 0,
    "p2_nonneg": lambda a: FanoNumerics(_basket(a), a["p1"]).p2 >= 0,
    "monotone_plurigenera": lambda a: plurigenera_nondecreasing(
        FanoNumerics(_basket(a), a["p1"])
    ),
    "basket_k3": lambda a: deg_k3(FanoNumerics(_basket(a), a["p1"]))
    == _frac(a, "k3"),
    "basket_rx": lambda a: cartier_index(_basket(a)) == a["r_x"],
    "basket_rmax": lambda a: r_max(_basket(a)) == a["r_max"],
    "pencil_equality_contradiction": lambda a: (
        lambda rep: rep.status == "equal"
        and rep.contradiction_if_pencil
        and rep.p_m == a["p_m"]
        and rep.rx_k3 == _frac(a, "rx_k3")
    )(pencil_equality_analysis(_basket(a), a["p1"], a["m"])),
}


def verify_check(check: Check) -> bool:
    """Re-evaluate a recorded inequality from its raw arguments."""
    verifier = _VERIFIERS.get(check.kind)
    if verifier is None:
        raise VerificationFailure(f"unknown check kind {check.kind!r}")
    return bool(verifier(check.args))


def _checked(checks: list[Check], kind: str, args: dict, note: str = "") -> None:
    ok = verify_check(Check(kind, args, True, note))
    checks.append(Check(kind, args, ok, note))
    if not ok:
        raise VerificationFailure(f"{kind} failed: {note or args}")


# ---------------------------------------------------------------------------
# scenario model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hypotheses:
    basket: Basket | None = None
    p1_exact: int | None = None
    p1_min: int | None = None
    k3_lower: Fraction | None = None
    k3_refined_from: Fraction | None = None
    rx: int | None = None
    rx_upper: int | None = None
    rmax_lo: int = 2
    rmax_hi: int | None = None
    expect: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @classmethod
    def from_json(cls, data: dict) -> "Hypotheses":
        p1 = data.get("p1") or {}
        rmax_lo, rmax_hi = 2, None
        if "rmax" in data:
            rmax_lo = rmax_hi = int(data["rmax"])
        elif "rmax_upper" in data:
            rmax_hi = int(data["rmax_upper"])
        elif "rmax_range" in data:
            rmax_lo, rmax_hi = (int(v) for v in data["rmax_range"])
        basket = Basket.from_json(data["basket"]) if "basket" in data else None
        if basket is None and rmax_hi is None:
            raise LedgerFormatError("bound hypotheses need an r_max bound")
        return cls(
            basket=basket,
            p1_exact=p1.get("exact"),
            p1_min=p1.get("min"),
            k3_lower=(
                parse_rational(data["k3_lower"]) if "k3_lower" in data else None
            ),
            k3_refined_from=(
                parse_rational(data["k3_refined_from"])
                if "k3_refined_from" in data
                else None
            ),
            rx=data.get("rx"),
            rx_upper=data.get("rx_upper"),
            rmax_lo=rmax_lo,
            rmax_hi=rmax_hi,
            expect=data.get("expect", {}),
            notes=tuple(data.get("notes", ())),
        )


@dataclass(frozen=True)
class ProbeSpec:
    m: int
    t: Fraction
    l: Fraction


@dataclass(frozen=True)
class M1Rule:
    rule: str  # "nonpencil" | "probe" | "equality_probe"
    t: Fraction | None = None
    variant: int | None = None
    m: int | None = None
    expected: int | None = None


@dataclass(frozen=True)
class N0Rule:
    rule: str  # "one" | "lemma"
    expected: int | None = None


@dataclass(frozen=True)
class CriterionSpec:
    family: str  # "two_system" | "sqrt"
    variant: int


@dataclass(frozen=True)
class BranchPlan:
    label: str  # "same_pencil" | "different_pencil" | "direct"
    criterion: CriterionSpec
    m1_rule: M1Rule | None = None
    n0_rule: N0Rule = N0Rule("one")
    claimed: int | None = None


@dataclass(frozen=True)
class Scenario:
    id: str
    theorem: str
    claimed_bound: int
    m0: int
    nu0: int
    hypotheses: Hypotheses
    probe: ProbeSpec | None
    branches: tuple[BranchPlan, ...]
    variants: tuple[str, ...] = ("weak", "qfano")

    @classmethod
    def from_json(cls, data: dict) -> "Scenario":
        probe = None
        if "probe" in data:
            growth = data["probe"]["growth"]
            probe = ProbeSpec(
                m=int(data["probe"]["m"]),
                t=parse_rational(growth["t"]),
                l=parse_rational(growth["l"]),
            )
        branches = tuple(_branch_from_json(b) for b in data["branches"])
        labels = sorted(b.label for b in branches)
        if probe is not None:
            if labels != ["different_pencil", "same_pencil"]:
                raise LedgerFormatError(
                    f"{data['id']}: a pencil dichotomy needs exactly the "
                    "same_pencil and different_pencil branches"
                )
        elif labels != ["direct"]:
            raise LedgerFormatError(
                f"{data['id']}: a scenario without a probe needs exactly "
                "one direct branch"
            )
        return cls(
            id=data["id"],
            theorem=data["theorem"],
            claimed_bound=int(data["claimed"]),
            m0=int(data["m0"]),
            nu0=int(data["nu0"]),
            hypotheses=Hypotheses.from_json(data["hypotheses"]),
            probe=probe,
            branches=branches,
            variants=tuple(data.get("variants", ("weak", "qfano"))),
        )


def _branch_from_json(data: dict) -> BranchPlan:
    m1_rule = None
    if "m1" in data:
        raw = data["m1"]
        m1_rule = M1Rule(
            rule=raw["rule"],
            t=parse_rational(raw["t"]) if "t" in raw else None,
            variant=raw.get("variant"),
            m=raw.get("m"),
            expected=raw.get("expected"),
        )
    n0 = data.get("n0", {"rule": "one"})
    crit = data["criterion"]
    return BranchPlan(
        label=data["label"],
        criterion=CriterionSpec(crit["family"], int(crit.get("variant", 0))),
        m1_rule=m1_rule,
        n0_rule=N0Rule(n0["rule"], n0.get("expected")),
        claimed=data.get("claimed"),
    )


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedBox:
    """Hypotheses flattened into worst-case parameter ranges."""

    k3_lower: Fraction | None
    rx_exact: int | None
    rx_upper: int
    rmax_lo: int
    rmax_hi: int
    model: FanoNumerics | None

    def rx_at(self, rmax: int) -> int:
        if self.rx_exact is not None:
            return self.rx_exact
        return min(self.rx_upper, lcm(*range(2, rmax + 1)))

    def points(self) -> list[dict]:
        return [
            {"r_max": rm, "r_x": self.rx_at(rm)}
            for rm in range(self.rmax_lo, self.rmax_hi + 1)
        ]

    def to_json(self) -> dict:
        return {
            "k3_lower": format_rational(self.k3_lower) if self.k3_lower else None,
            "rx": self.rx_exact,
            "rx_upper": self.rx_upper,
            "rmax_range": [self.rmax_lo, self.rmax_hi],
            "basket": self.model.basket.to_json() if self.model else None,
            "p1": self.model.p1 if self.model else None,
        }


def _resolve(hyp: Hypotheses, checks: list[Check]) -> ResolvedBox:
    if hyp.basket is not None:
        if hyp.p1_exact is None:
            raise LedgerFormatError("a basket scenario needs an exact p1")
        model = FanoNumerics(hyp.basket, hyp.p1_exact)
        bjson = hyp.basket.to_json()
        k3 = deg_k3(model)
        rx = cartier_index(hyp.basket)
        rmax = r_max(hyp.basket)
        _checked(checks, "gamma_nonneg", {"basket": bjson})
        _checked(checks, "p2_nonneg", {"basket": bjson, "p1": model.p1})
        _checked(
            checks,
            "arith_ge",
            {"lhs": format_rational(k3), "rhs": "1/330"},
            note="-K^3 positive and above the universal floor",
        )
        if model.p1 >= 1:
            _checked(
                checks,
                "monotone_plurigenera",
                {"basket": bjson, "p1": model.p1},
                note="P_{-m} nondecreasing up to m=8",
            )
        for key, kind in (("k3", "basket_k3"), ("rx", "basket_rx"), ("rmax", "basket_rmax")):
            if key in hyp.expect:
                args: dict[str, Any] = {"basket": bjson}
                if kind == "basket_k3":
                    args.update(p1=model.p1, k3=str(hyp.expect[key]))
                elif kind == "basket_rx":
                    args.update(r_x=int(hyp.expect[key]))
                else:
                    args.update(r_max=int(hyp.expect[key]))
                _checked(checks, kind, args, note=f"transcribed {key} matches")
        return ResolvedBox(k3, rx, rx, rmax, rmax, model)

    if hyp.rx is None and hyp.rx_upper is None:
        raise LedgerFormatError("bound hypotheses need rx or rx_upper")
    if hyp.k3_refined_from is not None:
        if hyp.rx is None or hyp.k3_lower is None:
            raise LedgerFormatError("k3 refinement needs exact rx and k3_lower")
        _checked(
            checks,
            "k3_refinement",
            {
                "base": format_rational(hyp.k3_refined_from),
                "r_x": hyp.rx,
                "refined": format_rational(hyp.k3_lower),
            },
            note="lower bound lifted to a multiple of 1/r_X",
        )
    return ResolvedBox(
        hyp.k3_lower,
        hyp.rx,
        hyp.rx if hyp.rx is not None else hyp.rx_upper,  # type: ignore[arg-type]
        hyp.rmax_lo,
        hyp.rmax_hi,  # type: ignore[arg-type]
        None,
    )


@dataclass(frozen=True)
class BranchResult:
    label: str
    mu0: RationalBound
    m1: int | None
    n0: int
    criterion: str
    certified_m: int
    claimed: int | None
    checks: tuple[Check, ...]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "mu0": self.mu0.to_json(),
            "m1": self.m1,
            "n0": self.n0,
            "criterion": self.criterion,
            "certified_m": self.certified_m,
            "claimed": self.claimed,
            "checks": [c.to_json() for c in self.checks],
        }


@dataclass(frozen=True)
class Certificate:
    scenario_id: str
    theorem: str
    hypotheses: dict
    scenario_checks: tuple[Check, ...]
    branches: tuple[BranchResult, ...]
    certified_bound: int
    claimed_bound: int

    @property
    def improvement(self) -> bool:
        return self.certified_bound < self.claimed_bound

    def all_checks(self) -> Iterable[Check]:
        yield from self.scenario_checks
        for branch in self.branches:
            yield from branch.checks

    def to_json(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "theorem": self.theorem,
            "hypotheses": self.hypotheses,
            "scenario_checks": [c.to_json() for c in self.scenario_checks],
            "branches": [b.to_json() for b in self.branches],
            "certified_bound": self.certified_bound,
            "claimed_bound": self.claimed_bound,
            "improvement": self.improvement,
        }


def _require_k3(box: ResolvedBox, what: str) -> Fraction:
    if box.k3_lower is None:
        raise LedgerFormatError(f"{what} needs a -K^3 lower bound")
    return box.k3_lower


def _verify_probe(scenario: Scenario, box: ResolvedBox, checks: list[Check]) -> None:
    probe = scenario.probe
    assert probe is not None
    k3 = _require_k3(box, "the pencil probe")
    _checked(
        checks,
        "growth_at",
        {
            "m": probe.m,
            "t": format_rational(probe.t),
            "l": format_rational(probe.l),
            "k3": format_rational(k3),
            "r_max": box.rmax_hi,
        },
        note=f"P_{{-{probe.m}}} - 1 > {probe.m}/{format_rational(probe.l)}",
    )
    # probe/l >= 1 makes P_{-probe} >= 2, so the probe is usable as m1
    _checked(
        checks,
        "arith_ge",
        {"lhs": str(probe.m), "rhs": format_rational(probe.l)},
        note="probe at least l, so the growth bound gives P >= 2",
    )
    if box.model is not None:
        _checked(
            checks,
            "plurigenus_exceeds",
            {
                "basket": box.model.basket.to_json(),
                "p1": box.model.p1,
                "m": probe.m,
                "rhs": format_rational(Fraction(probe.m) / probe.l + 1),
            },
            note="exact plurigenus confirms the growth bound",
        )


def _derive_m1(
    scenario: Scenario,
    box: ResolvedBox,
    plan: BranchPlan,
    checks: list[Check],
) -> int | None:
    rule = plan.m1_rule
    if plan.label == "different_pencil" and rule is None:
        rule = M1Rule("probe")
    if rule is None:
        return None
    if rule.rule == "probe":
        if scenario.probe is None:
            raise LedgerFormatError("m1 rule 'probe' needs a probe")
        m1 = scenario.probe.m
    elif rule.rule == "nonpencil":
        k3 = _require_k3(box, "the non-pencil m1 rule")
        if rule.t is None or rule.variant is None:
            raise LedgerFormatError("non-pencil m1 rule needs t and a variant")
        rx_w = box.rx_at(box.rmax_hi)
        m1 = nonpencil_min_m(rule.t, k3, rx_w, box.rmax_hi, rule.variant)
        args = {
            "m": m1,
            "t": format_rational(rule.t),
            "k3": format_rational(k3),
            "r_x": rx_w,
            "r_max": box.rmax_hi,
            "variant": rule.variant,
        }
        _checked(checks, "nonpencil_at", args, note="|-m1 K| is not a pencil")
        _checked(checks, "nonpencil_minimal", args, note="m1 - 1 fails a condition")
        if box.model is not None:
            _checked(
                checks,
                "plurigenus_at_least",
                {
                    "basket": box.model.basket.to_json(),
                    "p1": box.model.p1,
                    "m": m1,
                    "rhs": 2,
                },
            )
    elif rule.rule == "equality_probe":
        if box.model is None or rule.m is None:
            raise LedgerFormatError("equality_probe needs a basket and an m")
        report = pencil_equality_analysis(box.model.basket, box.model.p1, rule.m)
        _checked(
            checks,
            "pencil_equality_contradiction",
            {
                "basket": box.model.basket.to_json(),
                "p1": box.model.p1,
                "m": rule.m,
                "p_m": report.p_m,
                "rx_k3": format_rational(report.rx_k3),
            },
            note=(
                "P_{-m} sits exactly on the degree bound while r_X(-K^3) != 1: "
                "for an ample -K this forbids |-mK| from being a pencil"
            ),
        )
        m1 = rule.m
    else:
        raise LedgerFormatError(f"unknown m1 rule {rule.rule!r}")
    _checked(checks, "m1_at_least_m0", {"m1": m1, "m0": scenario.m0})
    if rule.expected is not None:
        _checked(
            checks,
            "arith_eq",
            {"lhs": str(m1), "rhs": str(rule.expected)},
            note="derived m1 matches the transcribed value",
        )
    return m1


def _criterion_detail(
    scenario: Scenario,
    box: ResolvedBox,
    spec: CriterionSpec,
    mu0: RationalBound,
    m1: int | None,
    n0: int,
    certified: int,
) -> dict:
    """Human-facing breakdown at the pessimal box point (not re-verified).

    Square-root thresholds are rendered exactly as surds; the only
    floating point in a certificate sits under the *_approx key.
    """
    from .surd import surd_from_sqrt

    for point in box.points():
        params = CriterionParams(
            m0=scenario.m0,
            mu0=mu0,
            nu0=scenario.nu0,
            r_max=point["r_max"],
            r_x=point["r_x"],
            n0=n0,
            m1=m1,
        )
        if spec.family == "two_system":
            terms = two_system_terms(spec.variant, params)
        else:
            terms = sqrt_bound_terms(spec.variant, params)
        if max(terms.values()) != certified:
            continue
        detail = {"worst_point": point, "terms": terms}
        if spec.family == "sqrt" and spec.variant == 1:
            threshold = surd_from_sqrt(
                mu0.value, Fraction(1), Fraction(8 * point["r_x"], n0)
            )
            detail["sqrt_threshold"] = threshold.render()
            detail["sqrt_threshold_approx"] = f"{threshold.approx():.6f}"
        return detail
    return {}


def _run_branch(
    scenario: Scenario, box: ResolvedBox, plan: BranchPlan
) -> BranchResult:
    checks: list[Check] = []
    if plan.label == "same_pencil":
        assert scenario.probe is not None
        mu0 = RationalBound.strict(scenario.probe.l)
    else:
        mu0 = RationalBound.exact(scenario.m0)

    m1 = _derive_m1(scenario, box, plan, checks)

    if plan.n0_rule.rule == "lemma":
        if box.rx_exact is None:
            raise LedgerFormatError("the N0 lemma needs r_X known exactly")
        if m1 is None:
            raise LedgerFormatError("the N0 lemma needs m1")
        n0 = n0_lower_bound(box.rx_exact, m1, scenario.nu0, box.rmax_hi)
        _checked(
            checks,
            "n0_value",
            {
                "r_x": box.rx_exact,
                "m1": m1,
                "nu0": scenario.nu0,
                "r_max": box.rmax_hi,
                "n0": n0,
            },
        )
        if plan.n0_rule.expected is not None:
            _checked(
                checks,
                "arith_eq",
                {"lhs": str(n0), "rhs": str(plan.n0_rule.expected)},
                note="derived N0 matches the transcribed value",
            )
    elif plan.n0_rule.rule == "one":
        n0 = 1
    else:
        raise LedgerFormatError(f"unknown n0 rule {plan.n0_rule.rule!r}")

    spec = plan.criterion
    crit_args = {
        "family": spec.family,
        "variant": spec.variant,
        "m0": scenario.m0,
        "nu0": scenario.nu0,
        "n0": n0,
        "m1": m1,
        "mu0": mu0.to_json(),
        "points": box.points(),
    }
    certified = _eval_criterion(dict(crit_args))
    if certified is None:
        raise VerificationFailure(
            f"{scenario.id}/{plan.label}: criterion gate failed on the parameter box"
        )
    crit_args["result"] = certified
    crit_args.update(_criterion_detail(scenario, box, spec, mu0, m1, n0, certified))
    _checked(checks, "criterion_eval", crit_args, note="worst case over the box")
    if plan.claimed is not None:
        _checked(
            checks,
            "bound_within_claim",
            {"certified": certified, "claimed": plan.claimed},
            note="branch bound does not exceed the transcribed one",
        )
    return BranchResult(
        label=plan.label,
        mu0=mu0,
        m1=m1,
        n0=n0,
        criterion=f"{spec.family}:{spec.variant}",
        certified_m=certified,
        claimed=plan.claimed,
        checks=tuple(checks),
    )


def certify_scenario(scenario: Scenario) -> Certificate:
    """Execute every branch of a scenario and re-verify each inequality."""
    scenario_checks: list[Check] = []
    box = _resolve(scenario.hypotheses, scenario_checks)
    if scenario.probe is not None:
        _verify_probe(scenario, box, scenario_checks)
    branches = tuple(_run_branch(scenario, box, plan) for plan in scenario.branches)
    certified = max(b.certified_m for b in branches)
    _checked(
        scenario_checks,
        "bound_within_claim",
        {"certified": certified, "claimed": scenario.claimed_bound},
        note="scenario bound does not exceed its claim",
    )
    cert = Certificate(
        scenario_id=scenario.id,
        theorem=scenario.theorem,
        hypotheses=box.to_json(),
        scenario_checks=tuple(scenario_checks),
        branches=branches,
        certified_bound=certified,
        claimed_bound=scenario.claimed_bound,
    )
    recheck_certificate(cert)
    return cert


def recheck_certificate(cert: Certificate) -> None:
    """Re-evaluate every recorded inequality from raw data; fail loudly."""
    for check in cert.all_checks():
        if not check.ok or not verify_check(check):
            raise VerificationFailure(
                f"{cert.scenario_id}: check {check.kind} {check.args} failed"
            )


# ---------------------------------------------------------------------------
# ledger and report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ledger:
    name: str
    variant: str
    global_claimed: int
    theorem_claims: dict[str, int]
    scenarios: tuple[Scenario, ...]


def data_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get("FANOCALC_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).parent / "data"


def load_ledger(
    path: str | os.PathLike | None = None,
    variant: str = "weak",
    directory: str | os.PathLike | None = None,
) -> Ledger:
    """Load the scenario ledger, keeping the scenarios of one variant."""
    if variant not in ("weak", "qfano"):
        raise LedgerFormatError(f"unknown ledger variant {variant!r}")
    ledger_path = Path(path) if path is not None else data_dir(directory) / "ledger.json"
    data = json.loads(ledger_path.read_text(encoding="utf-8"))
    if data.get("format") != LEDGER_FORMAT:
        raise LedgerFormatError(f"unsupported ledger format {data.get('format')!r}")
    scenarios = tuple(
        scn
        for scn in (Scenario.from_json(raw) for raw in data["scenarios"])
        if variant in scn.variants
    )
    claims = {str(k): int(v) for k, v in data["theorems"].items()}
    for key, value in data.get("theorem_overrides", {}).get(variant, {}).items():
        claims[str(key)] = int(value)
    return Ledger(
        name=data.get("name", ledger_path.stem),
        variant=variant,
        global_claimed=int(data["global_claimed"][variant]),
        theorem_claims=claims,
        scenarios=scenarios,
    )


@dataclass(frozen=True)
class Report:
    ledger_name: str
    variant: str
    global_bound: int
    global_claimed: int
    theorem_bounds: dict[str, int]
    theorem_claims: dict[str, int]
    certificates: tuple[Certificate, ...]
    improvements: tuple[str, ...]

    @property
    def ok(self) -> bool:
        if self.global_bound > self.global_claimed:
            return False
        return all(
            self.theorem_bounds.get(name, 0) <= claim
            for name, claim in self.theorem_claims.items()
        )

    def to_json(self) -> dict:
        return {
            "ledger": self.ledger_name,
            "variant": self.variant,
            "global_bound": self.global_bound,
            "global_claimed": self.global_claimed,
            "theorem_bounds": dict(sorted(self.theorem_bounds.items())),
            "theorem_claims": dict(sorted(self.theorem_claims.items())),
            "improvements": list(self.improvements),
            "ok": self.ok,
            "certificates": [c.to_json() for c in self.certificates],
        }


def replay_ledger(ledger: Ledger, jobs: int = 1) -> Report:
    """Certify every scenario and aggregate the per-theorem maxima."""
    if not ledger.scenarios:
        raise LedgerFormatError("empty ledger")
    scenarios = sorted(ledger.scenarios, key=lambda s: s.id)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certificates = tuple(pool.map(certify_scenario, scenarios))
    else:
        certificates = tuple(certify_scenario(s) for s in scenarios)
    theorem_bounds: dict[str, int] = {}
    for cert in certificates:
        current = theorem_bounds.get(cert.theorem, 0)
        theorem_bounds[cert.theorem] = max(current, cert.certified_bound)
    return Report(
        ledger_name=ledger.name,
        variant=ledger.variant,
        global_bound=max(c.certified_bound for c in certificates),
        global_claimed=ledger.global_claimed,
        theorem_bounds=theorem_bounds,
        theorem_claims=dict(ledger.theorem_claims),
        certificates=certificates,
        improvements=tuple(
            c.scenario_id for c in certificates if c.improvement
        ),
    )
