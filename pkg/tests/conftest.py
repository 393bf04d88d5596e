from __future__ import annotations

import random
from math import gcd

from fanocalc.basket import Basket, OrbifoldPair


def valid_weights(r: int) -> list[int]:
    return [b for b in range(1, r // 2 + 1) if gcd(b, r) == 1]


def random_pair(rng: random.Random, r_hi: int = 25) -> OrbifoldPair:
    while True:
        r = rng.randint(2, r_hi)
        choices = valid_weights(r)
        if choices:
            return OrbifoldPair(rng.choice(choices), r)


def random_basket(
    rng: random.Random,
    max_pairs: int = 6,
    r_hi: int = 25,
    min_pairs: int = 0,
) -> Basket:
    count = rng.randint(min_pairs, max_pairs)
    return Basket(random_pair(rng, r_hi) for _ in range(count))
