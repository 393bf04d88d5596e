"""Re-derivation of every enumeration-backed claim used by the ledger.

Each claim pins an exhaustive computation to a transcribed answer: the
19-row table of baskets with a large local index, emptiness and
uniqueness statements, the short packing lists, the caps on the Cartier
index r_X for each value of r_max, and the minimal positive -K^3 over
small index families.  A claim can come back "exact", "superset" (the
search found strictly more than transcribed -- reported, never silently
filtered) or "mismatch".
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .basket import (
    Basket,
    FanoNumerics,
    anti_plurigenus,
    cartier_index,
    deg_k3,
    format_rational,
    parse_rational,
)
from .geography import (
    BasketConstraints,
    NoAdmissibleBasket,
    enumerate_baskets,
    min_positive_k3,
)
from .packing import descendants
from .replay import data_dir

# analytic tail for the minimal -K^3 families: for P_{-1} >= 4 every
# admissible basket has -K^3 >= 2*4 - 6 + sigma/2 >= 5/2, so checking
# P_{-1} in {1, 2, 3} settles any expected minimum below 5/2
_TAIL_FLOOR = Fraction(5, 2)


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    status: str  # "exact" | "superset" | "mismatch"
    detail: str

    def to_json(self) -> dict:
        return {"id": self.claim_id, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class ClaimsReport:
    results: tuple[ClaimResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.status == "exact" for r in self.results)

    def to_json(self) -> dict:
        return {"ok": self.ok, "claims": [r.to_json() for r in self.results]}


def _compare_sets(expected: list[Basket], got: list[Basket]) -> tuple[str, str]:
    exp, act = set(expected), set(got)
    if exp == act:
        return "exact", f"{len(got)} baskets, exact match"
    if exp <= act:
        extras = sorted(act - exp, key=lambda b: b.key)
        return "superset", "unexpected extras: " + "; ".join(map(str, extras))
    missing = sorted(exp - act, key=lambda b: b.key)
    return "mismatch", "missing: " + "; ".join(map(str, missing))


def _expected_rows(rows: list[dict]) -> list[tuple[Basket, str | None]]:
    return [(Basket.from_json(row["basket"]), row.get("k3")) for row in rows]


def _check_enumeration(claim: dict) -> ClaimResult:
    constraints = BasketConstraints.from_json(claim["constraints"])
    rows = _expected_rows(claim["expected"])
    got = enumerate_baskets(constraints)
    status, detail = _compare_sets([b for b, _ in rows], got)
    if status == "exact":
        p1 = constraints.p1
        for basket, k3_text in rows:
            if k3_text is None or p1 is None:
                continue
            k3 = deg_k3(FanoNumerics(basket, p1))
            if k3_text == "<0":
                if k3 >= 0:
                    return ClaimResult(
                        claim["id"], "mismatch", f"{basket}: expected -K^3 < 0, got {k3}"
                    )
            elif k3 != parse_rational(k3_text):
                return ClaimResult(
                    claim["id"],
                    "mismatch",
                    f"{basket}: expected -K^3 = {k3_text}, got {format_rational(k3)}",
                )
    return ClaimResult(claim["id"], status, detail)


def _check_rx_bound(claim: dict) -> ClaimResult:
    constraints = BasketConstraints.from_json(claim["constraints"])
    cap = claim["rx_max"]
    exceptions = [Basket.from_json(b) for b in claim.get("exceptions", ())]
    seen_exceptions = set()
    for basket in enumerate_baskets(constraints):
        rx = cartier_index(basket)
        if rx <= cap:
            continue
        if basket in exceptions:
            seen_exceptions.add(basket)
            continue
        return ClaimResult(
            claim["id"], "mismatch", f"{basket} has r_X = {rx} above the cap {cap}"
        )
    missing = [b for b in exceptions if b not in seen_exceptions]
    if missing:
        return ClaimResult(
            claim["id"],
            "mismatch",
            "transcribed exceptions never materialised: "
            + "; ".join(map(str, missing)),
        )
    return ClaimResult(
        claim["id"], "exact", f"r_X <= {cap} with {len(exceptions)} known exceptions"
    )


def _check_descendants(claim: dict) -> ClaimResult:
    source = Basket.from_json(claim["source"])
    constraints = BasketConstraints.from_json(claim["constraints"])
    rows = _expected_rows(claim["expected"])
    got = descendants(source, constraints)
    status, detail = _compare_sets([b for b, _ in rows], got)
    if status == "exact" and claim.get("p1") is not None:
        p1 = claim["p1"]
        for basket, k3_text in rows:
            if k3_text is None:
                continue
            k3 = deg_k3(FanoNumerics(basket, p1))
            if k3 != parse_rational(k3_text):
                return ClaimResult(
                    claim["id"],
                    "mismatch",
                    f"{basket}: expected -K^3 = {k3_text}, got {format_rational(k3)}",
                )
        if "below_threshold" in claim:
            # the baskets under the -K^3 threshold must have small r_X
            threshold = parse_rational(claim["below_threshold"]["k3"])
            cap = claim["below_threshold"]["rx_max"]
            for basket, _ in rows:
                if deg_k3(FanoNumerics(basket, p1)) < threshold:
                    rx = cartier_index(basket)
                    if rx > cap:
                        return ClaimResult(
                            claim["id"],
                            "mismatch",
                            f"{basket}: r_X = {rx} exceeds {cap}",
                        )
    return ClaimResult(claim["id"], status, detail)


def _check_descendant_rmax_cap(claim: dict) -> ClaimResult:
    cap = claim["cap"]
    for raw in claim["sources"]:
        source = Basket.from_json(raw)
        for basket in descendants(source):
            worst = max((p.r for p in basket), default=0)
            if worst > cap:
                return ClaimResult(
                    claim["id"],
                    "mismatch",
                    f"descendant {basket} of {source} has r_max {worst} > {cap}",
                )
    return ClaimResult(
        claim["id"], "exact", f"all packings stay at r_max <= {cap}"
    )


def _check_augmented_descendants(claim: dict) -> ClaimResult:
    """Union over admissible tails (1, s1), (1, s2) of the filtered packings."""
    stem = Basket.from_json(claim["stem"])
    tail_min = claim["tail_min"]
    constraints = BasketConstraints.from_json(claim["constraints"])
    budget = Fraction(24)

    def weight(r: int) -> Fraction:
        return Fraction(r * r - 1, r)

    stem_weight = sum((p.gamma_weight() for p in stem), Fraction(0))
    union: set[Basket] = set()
    s1 = tail_min
    while stem_weight + 2 * weight(s1) <= budget:
        s2 = s1
        while stem_weight + weight(s1) + weight(s2) <= budget:
            base = Basket.from_json(
                stem.to_json() + [[1, s1], [1, s2]]
            )
            union.update(descendants(base, constraints))
            s2 += 1
        s1 += 1
    rows = _expected_rows(claim["expected"])
    status, detail = _compare_sets([b for b, _ in rows], sorted(union, key=lambda b: b.key))
    if status != "exact":
        return ClaimResult(claim["id"], status, detail)
    cap = claim["rx_max"]
    exceptions = {Basket.from_json(e["basket"]): e for e in claim.get("exceptions", ())}
    for basket in union:
        rx = cartier_index(basket)
        if rx <= cap:
            continue
        info = exceptions.get(basket)
        if info is None:
            return ClaimResult(
                claim["id"], "mismatch", f"{basket} has r_X = {rx} above the cap {cap}"
            )
        if rx != info["rx"]:
            return ClaimResult(
                claim["id"], "mismatch", f"{basket}: r_X = {rx} != {info['rx']}"
            )
        if "k3_at_p1" in info:
            p1, expected = info["k3_at_p1"]
            k3 = deg_k3(FanoNumerics(basket, int(p1)))
            if k3 != parse_rational(expected):
                return ClaimResult(
                    claim["id"],
                    "mismatch",
                    f"{basket}: -K^3 = {format_rational(k3)} != {expected}",
                )
    return ClaimResult(claim["id"], "exact", detail)


def _family_constraints(claim: dict, p1: int) -> BasketConstraints:
    # P_{-2} >= 2 P_{-1} - 1 holds for every weak Q-Fano 3-fold with
    # effective -K, so it rides along with the explicit constraints
    return BasketConstraints(
        index_multiset=tuple(claim["indices"]),
        p1=p1,
        k3_positive=True,
        p2_derived_min=max(0, 2 * p1 - 1),
        monotone_when_p1_positive=bool(claim.get("monotone", False)),
    )


def _check_min_k3_family(claim: dict) -> ClaimResult:
    expected = parse_rational(claim["expected"])
    if expected >= _TAIL_FLOOR:
        return ClaimResult(
            claim["id"], "mismatch", "expected minimum not below the P_{-1} >= 4 tail"
        )
    best: tuple[Fraction, Basket] | None = None
    p2_floor: int | None = None
    for p1 in (1, 2, 3):
        constraints = _family_constraints(claim, p1)
        try:
            value, witness = min_positive_k3(constraints)
        except NoAdmissibleBasket:
            continue
        if best is None or value < best[0]:
            best = (value, witness)
        if claim.get("p2_at_least") is not None:
            for basket in enumerate_baskets(constraints):
                p2 = FanoNumerics(basket, p1).p2
                p2_floor = p2 if p2_floor is None else min(p2_floor, p2)
    if best is None:
        return ClaimResult(claim["id"], "mismatch", "no admissible basket at all")
    value, witness = best
    if value != expected:
        return ClaimResult(
            claim["id"],
            "mismatch",
            f"minimum -K^3 = {format_rational(value)}, expected {claim['expected']}",
        )
    if "witness" in claim and witness != Basket.from_json(claim["witness"]):
        return ClaimResult(claim["id"], "mismatch", f"witness {witness} unexpected")
    if "second" in claim:
        second = parse_rational(claim["second"])
        rest = [
            deg_k3(FanoNumerics(b, 1))
            for b in enumerate_baskets(_family_constraints(claim, 1))
            if b != witness
        ]
        if not rest or min(rest) != second:
            got = format_rational(min(rest)) if rest else "nothing"
            return ClaimResult(
                claim["id"], "mismatch", f"second-smallest -K^3 is {got}"
            )
    if "rejected" in claim:
        rej = claim["rejected"]
        basket = Basket.from_json(rej["basket"])
        model = FanoNumerics(basket, 1)
        if anti_plurigenus(model, rej["plurigenus_zero_at"]) != 0:
            return ClaimResult(
                claim["id"], "mismatch", f"{basket} lacks the vanishing plurigenus"
            )
        if deg_k3(model) >= expected:
            return ClaimResult(
                claim["id"],
                "mismatch",
                f"{basket} would not even undercut the minimum",
            )
    if claim.get("p2_at_least") is not None and (
        p2_floor is None or p2_floor < claim["p2_at_least"]
    ):
        return ClaimResult(
            claim["id"], "mismatch", f"P_{{-2}} floor is {p2_floor}"
        )
    return ClaimResult(
        claim["id"], "exact", f"minimum -K^3 = {claim['expected']} at {witness}"
    )


def _index_multisets(rmax: int) -> list[tuple[int, ...]]:
    """All index multisets with gamma >= 0 and largest index exactly rmax."""
    budget = Fraction(24) - Fraction(rmax * rmax - 1, rmax)
    if budget < 0:
        return []
    out: list[tuple[int, ...]] = []

    def walk(r: int, left: Fraction, chosen: tuple[int, ...]) -> None:
        out.append(chosen + (rmax,))
        for nxt in range(r, rmax + 1):
            w = Fraction(nxt * nxt - 1, nxt)
            if w > left:
                break
            walk(nxt, left - w, chosen + (nxt,))

    walk(2, budget, ())
    return out


def _check_index_rx_set(claim: dict) -> ClaimResult:
    rmax = claim["rmax"]
    cap = claim["rx_max"]
    extras = set(claim.get("extras", ()))
    seen_extras = set()
    for indices in _index_multisets(rmax):
        rx = lcm(*indices)
        if rx <= cap:
            continue
        if rx in extras:
            seen_extras.add(rx)
            continue
        return ClaimResult(
            claim["id"],
            "mismatch",
            f"indices {indices} give r_X = {rx}, outside {cap} and {sorted(extras)}",
        )
    if seen_extras != extras:
        return ClaimResult(
            claim["id"],
            "mismatch",
            f"transcribed r_X values never realised: {sorted(extras - seen_extras)}",
        )
    return ClaimResult(
        claim["id"],
        "exact",
        f"r_max = {rmax}: r_X <= {cap} or r_X in {sorted(extras)}",
    )


def _check_divisor_filter(claim: dict) -> ClaimResult:
    n, lo, hi = claim["n"], claim["greater_than"], claim["at_most"]
    got = sorted(d for d in range(1, n + 1) if n % d == 0 and lo < d <= hi)
    if got != sorted(claim["expected"]):
        return ClaimResult(claim["id"], "mismatch", f"divisors: {got}")
    return ClaimResult(claim["id"], "exact", f"divisors of {n} in ({lo}, {hi}]: {got}")


_HANDLERS = {
    "enumeration": _check_enumeration,
    "rx_bound": _check_rx_bound,
    "descendants": _check_descendants,
    "descendant_rmax_cap": _check_descendant_rmax_cap,
    "augmented_descendants": _check_augmented_descendants,
    "min_k3_family": _check_min_k3_family,
    "index_rx_set": _check_index_rx_set,
    "divisor_filter": _check_divisor_filter,
}


def load_claims(directory: str | os.PathLike | None = None) -> list[dict]:
    base = data_dir(directory)
    claims = json.loads((base / "claims.json").read_text(encoding="utf-8"))
    table = json.loads((base / "table1.json").read_text(encoding="utf-8"))
    for claim in claims:
        if claim.get("expected") == "@table1":
            claim["expected"] = table["rows"]
    return claims


def enumerative_claims_check(
    directory: str | os.PathLike | None = None,
) -> ClaimsReport:
    """Run every bundled enumeration claim and report per-claim status."""
    results = []
    for claim in load_claims(directory):
        handler = _HANDLERS.get(claim["kind"])
        if handler is None:
            results.append(
                ClaimResult(claim["id"], "mismatch", f"unknown kind {claim['kind']!r}")
            )
            continue
        results.append(handler(claim))
    ordered = tuple(sorted(results, key=lambda r: r.claim_id))
    return ClaimsReport(ordered)
