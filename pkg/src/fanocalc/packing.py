"""Prime packings of baskets and the Stern-Brocot unpacking calculus.

A prime packing merges two pairs (b1, r1), (b2, r2) with
b1*r2 - b2*r1 = 1 into their mediant (b1+b2, r1+r2).  Reversing
packings all the way down yields the unique initial basket whose
weights are all 1; a basket B' is dominated by B when B' is reachable
from B by a sequence of packings.  sigma and sum(r) are conserved by
every packing while gamma and sigma' strictly decrease, which is what
makes the reachability searches finite and prunable.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

from .basket import Basket, InvalidPair, OrbifoldPair, gamma, r_max

if TYPE_CHECKING:  # pragma: no cover
    from .geography import BasketConstraints


@dataclass(frozen=True)
class PackingStep:
    """One prime packing; left/right ordered so the determinant is +1."""

    left: OrbifoldPair
    right: OrbifoldPair
    merged: OrbifoldPair

    def __post_init__(self) -> None:
        if self.left.b * self.right.r - self.right.b * self.left.r != 1:
            raise InvalidPair("packing sources must have determinant 1")
        if self.merged != OrbifoldPair(
            self.left.b + self.right.b, self.left.r + self.right.r
        ):
            raise InvalidPair("merged pair must be the mediant of the sources")

    def to_json(self) -> dict:
        return {
            "left": [self.left.b, self.left.r],
            "right": [self.right.b, self.right.r],
            "merged": [self.merged.b, self.merged.r],
        }


@dataclass(frozen=True)
class InitialCounts:
    """Multiplicities n0_{1,2}, n0_{1,3}, n0_{1,4} of an initial basket."""

    n12: int
    n13: int
    n14: int
    sigma5: int


def _merge(basket: Basket, first: OrbifoldPair, second: OrbifoldPair) -> tuple[PackingStep, Basket]:
    left, right = (first, second) if first.b * second.r - second.b * first.r == 1 else (second, first)
    merged = OrbifoldPair(left.b + right.b, left.r + right.r)
    remaining = list(basket.pairs)
    remaining.remove(first)
    remaining.remove(second)
    remaining.append(merged)
    return PackingStep(left, right, merged), Basket(remaining)


def prime_packings(basket: Basket) -> list[tuple[PackingStep, Basket]]:
    """All one-step packings of a basket, deduplicated as multisets.

    Two equal pairs have determinant 0, so only distinct pair values can
    merge; choosing different copies of the same value gives the same
    multiset and is reported once.
    """
    values = sorted(set(basket.pairs), key=lambda p: p.key)
    out = []
    for i, p in enumerate(values):
        for q in values[i + 1 :]:
            if abs(p.b * q.r - q.b * p.r) != 1:
                continue
            out.append(_merge(basket, p, q))
    out.sort(key=lambda item: item[1].key)
    return out


def unpack_pair(pair: OrbifoldPair) -> Basket:
    """Split a pair into weight-1 pairs by reversing prime packings.

    A pair (b, r) with b > 1 is the mediant of its Stern-Brocot parents,
    recovered from the extended Euclidean relation b*q = 1 (mod r) with
    0 < q < r: the parents are (p0, q) and (b - p0, r - q) where
    p0 = (b*q - 1)/r.  Each split preserves sum(b) and sum(r), and both
    parents are again valid orbifold pairs, so the recursion terminates
    in the unique all-weight-1 decomposition.
    """
    done: list[OrbifoldPair] = []
    work = [pair]
    while work:
        p = work.pop()
        if p.b == 1:
            done.append(p)
            continue
        q = pow(p.b, -1, p.r)
        p0 = (p.b * q - 1) // p.r
        work.append(OrbifoldPair(p0, q))
        work.append(OrbifoldPair(p.b - p0, p.r - q))
    return Basket(done)


def initial_basket(basket: Basket) -> Basket:
    """The unique all-weight-1 basket dominating the given one."""
    pairs: list[OrbifoldPair] = []
    for p in basket:
        pairs.extend(unpack_pair(p).pairs)
    return Basket(pairs)


def domination_witness(source: Basket, target: Basket) -> Optional[list[PackingStep]]:
    """A packing sequence from source to target, or None if unreachable.

    Breadth-first search over canonical multisets; each packing removes
    one pair, so the depth is fixed at len(source) - len(target) and the
    search is finite without a cap.  sigma and sum(r) conservation gives
    a cheap early rejection.
    """
    if source == target:
        return []
    if len(source) <= len(target):
        return None
    if sum(p.b for p in source) != sum(p.b for p in target) or sum(
        p.r for p in source
    ) != sum(p.r for p in target):
        return None
    parent: dict[Basket, tuple[Basket, PackingStep]] = {}
    frontier = deque([source])
    seen = {source}
    while frontier:
        state = frontier.popleft()
        if len(state) <= len(target):
            continue
        for step, nxt in prime_packings(state):
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (state, step)
            if nxt == target:
                path = []
                cur = nxt
                while cur != source:
                    cur, step = parent[cur]
                    path.append(step)
                path.reverse()
                return path
            frontier.append(nxt)
    return None


def dominates(source: Basket, target: Basket) -> bool:
    """True iff target is reachable from source by prime packings."""
    return domination_witness(source, target) is not None


def descendants(source: Basket, constraints: "BasketConstraints | None" = None) -> list[Basket]:
    """All baskets dominated by the source that pass the constraints.

    gamma strictly decreases and r_max never decreases along packings,
    so subtrees failing gamma >= 0 or exceeding the r_max ceiling are
    pruned outright; all other constraints only filter the output.
    """
    gamma_prune = constraints is not None and constraints.gamma_nonneg
    rmax_cap = None
    if constraints is not None and constraints.r_max_range is not None:
        rmax_cap = constraints.r_max_range[1]

    def admissible(state: Basket) -> bool:
        if gamma_prune and gamma(state) < 0:
            return False
        if rmax_cap is not None and len(state) and r_max(state) > rmax_cap:
            return False
        return True

    collected = []
    frontier = deque([source])
    seen = {source}
    while frontier:
        state = frontier.popleft()
        if not admissible(state):
            continue
        if constraints is None or constraints.satisfies(state):
            collected.append(state)
        for _, nxt in prime_packings(state):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    collected.sort(key=lambda b: b.key)
    return collected


def pair_counts(basket: Basket) -> Counter:
    return Counter(basket.pairs)


def initial_counts(p1: int, p2: int, p3: int, p4: int, sigma5: int) -> InitialCounts:
    """Multiplicities of (1,2), (1,3), (1,4) in the initial basket.

    Linear identities in P_{-1}..P_{-4} and sigma_5 = sum of the
    initial-basket multiplicities with index >= 5:

        n0_{1,2} = 5 - 6 P_{-1} + 4 P_{-2} - P_{-3}
        n0_{1,3} = 4 - 2 P_{-1} - 2 P_{-2} + 3 P_{-3} - P_{-4}
        n0_{1,4} = 1 + 3 P_{-1} - P_{-2} - 2 P_{-3} + P_{-4} - sigma_5
    """
    if sigma5 < 0:
        raise ValueError("sigma5 must be non-negative")
    return InitialCounts(
        n12=5 - 6 * p1 + 4 * p2 - p3,
        n13=4 - 2 * p1 - 2 * p2 + 3 * p3 - p4,
        n14=1 + 3 * p1 - p2 - 2 * p3 + p4 - sigma5,
        sigma5=sigma5,
    )
