"""Command line front end.

Verbs: info, pg, pack, unpack, dominates, descendants, enumerate,
certify, replay, check-claims.  Baskets are passed as inline JSON or
``@file``; all numeric fields in emitted JSON are exact "p/q" strings
(floating point only ever appears under keys suffixed ``_approx``), and
identical invocations produce byte-identical output.

Exit codes: 0 success, 1 bad input, 2 verification or claim failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .basket import (
    Basket,
    EmptyBasketError,
    FanoNumerics,
    InvalidPair,
    NonIntegralResult,
    anti_plurigenus,
)
from .claims import enumerative_claims_check
from .geography import (
    BasketConstraints,
    NoAdmissibleBasket,
    UnboundedSearch,
    annotate,
    enumerate_baskets,
)
from .packing import descendants, domination_witness, initial_basket, prime_packings
from .replay import (
    LedgerFormatError,
    Scenario,
    VerificationFailure,
    certify_scenario,
    load_ledger,
    replay_ledger,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        return Path(text[1:]).read_text(encoding="utf-8")
    return text


def _basket_arg(text: str) -> Basket:
    try:
        data = json.loads(_read_arg(text))
        return Basket.from_json(data)
    except (OSError, ValueError) as exc:  # InvalidPair is a ValueError
        raise UsageError(f"bad basket: {exc}") from exc


def _constraints_arg(text: str) -> BasketConstraints:
    try:
        return BasketConstraints.from_json(json.loads(_read_arg(text)))
    except (OSError, ValueError) as exc:
        raise UsageError(f"bad constraints: {exc}") from exc


def _dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="fanocalc", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_basket(p: argparse.ArgumentParser, p1: bool = False) -> None:
        p.add_argument("--basket", required=True, help="inline JSON [[b,r],...] or @file")
        if p1:
            p.add_argument("--p1", type=int, required=True, help="P_{-1}")

    p_info = sub.add_parser("info", help="invariants of a basket")
    with_basket(p_info, p1=True)

    p_pg = sub.add_parser("pg", help="anti-plurigenus P_{-m}")
    with_basket(p_pg, p1=True)
    p_pg.add_argument("--m", type=int, required=True)

    p_pack = sub.add_parser("pack", help="all one-step prime packings")
    with_basket(p_pack)

    p_unpack = sub.add_parser("unpack", help="initial basket (full unpacking)")
    with_basket(p_unpack)

    p_dom = sub.add_parser("dominates", help="reachability by prime packings")
    with_basket(p_dom)
    p_dom.add_argument("--target", required=True, help="target basket")

    p_desc = sub.add_parser("descendants", help="all dominated baskets")
    with_basket(p_desc)
    p_desc.add_argument("--constraints", help="constraints JSON or @file")

    p_enum = sub.add_parser("enumerate", help="baskets under constraints")
    p_enum.add_argument("--constraints", required=True)
    p_enum.add_argument("--out")

    p_cert = sub.add_parser("certify", help="certify one scenario file")
    p_cert.add_argument("--scenario", required=True)
    p_cert.add_argument("--out")

    p_replay = sub.add_parser("replay", help="replay a scenario ledger")
    p_replay.add_argument("--ledger", help="ledger file (default: bundled)")
    p_replay.add_argument("--variant", choices=("weak", "qfano"), default="weak")
    p_replay.add_argument("--out")
    p_replay.add_argument("--jobs", type=int, default=1)
    p_replay.add_argument("--data-dir")

    p_claims = sub.add_parser("check-claims", help="verify enumeration claims")
    p_claims.add_argument("--out")
    p_claims.add_argument("--data-dir")

    return parser


def run(args: argparse.Namespace) -> int:
    if args.verb == "info":
        basket = _basket_arg(args.basket)
        _emit(_dump(annotate(basket, args.p1)), None)
        return EXIT_OK

    if args.verb == "pg":
        basket = _basket_arg(args.basket)
        value = anti_plurigenus(FanoNumerics(basket, args.p1), args.m)
        sys.stdout.write(f"{value}\n")
        return EXIT_OK

    if args.verb == "pack":
        basket = _basket_arg(args.basket)
        payload = [
            dict(step.to_json(), basket=result.to_json())
            for step, result in prime_packings(basket)
        ]
        _emit(_dump(payload), None)
        return EXIT_OK

    if args.verb == "unpack":
        basket = _basket_arg(args.basket)
        _emit(_dump(initial_basket(basket).to_json()), None)
        return EXIT_OK

    if args.verb == "dominates":
        source = _basket_arg(args.basket)
        target = _basket_arg(args.target)
        witness = domination_witness(source, target)
        payload = {
            "dominates": witness is not None,
            "witness": [s.to_json() for s in witness] if witness is not None else None,
        }
        _emit(_dump(payload), None)
        return EXIT_OK

    if args.verb == "descendants":
        source = _basket_arg(args.basket)
        constraints = _constraints_arg(args.constraints) if args.constraints else None
        payload = [b.to_json() for b in descendants(source, constraints)]
        _emit(_dump(payload), None)
        return EXIT_OK

    if args.verb == "enumerate":
        constraints = _constraints_arg(args.constraints)
        baskets = enumerate_baskets(constraints)
        payload = [annotate(b, constraints.p1) for b in baskets]
        _emit(_dump(payload), args.out)
        return EXIT_OK

    if args.verb == "certify":
        try:
            raw = json.loads(_read_arg(args.scenario))
        except (OSError, ValueError) as exc:
            raise UsageError(f"bad scenario: {exc}") from exc
        scenario = Scenario.from_json(raw)
        certificate = certify_scenario(scenario)
        _emit(_dump(certificate.to_json()), args.out)
        return EXIT_OK

    if args.verb == "replay":
        ledger = load_ledger(args.ledger, args.variant, args.data_dir)
        report = replay_ledger(ledger, jobs=max(1, args.jobs))
        _emit(_dump(report.to_json()), args.out)
        return EXIT_OK if report.ok else EXIT_VERIFICATION

    if args.verb == "check-claims":
        report = enumerative_claims_check(args.data_dir)
        _emit(_dump(report.to_json()), args.out)
        return EXIT_OK if report.ok else EXIT_VERIFICATION

    raise UsageError(f"unknown verb {args.verb!r}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return run(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (InvalidPair, EmptyBasketError, UnboundedSearch, NoAdmissibleBasket,
            LedgerFormatError, NonIntegralResult, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except VerificationFailure as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return EXIT_VERIFICATION


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
