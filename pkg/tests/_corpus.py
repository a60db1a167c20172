"""Seeded instance families shared by several test modules."""

from __future__ import annotations

import random
from functools import lru_cache

from seqdecomp.field import make_prime_field
from seqdecomp.instances import gen_instance, random_specs

P = 10007
F = make_prime_field(P)


@lru_cache(maxsize=None)
def oracle_family(count: int = 100, max_dim: int = 20):
    """``(specs, n)`` for ``count`` mixed fat-point/curvilinear instances over F_10007."""
    out = []
    for i in range(count):
        rng = random.Random(i)
        n = rng.choice([2, 3])
        out.append((random_specs(F, n, rng, max_dim), n))
    return tuple(out)


def instance(i: int, conjugate: bool):
    specs, n = oracle_family()[i]
    return gen_instance(specs, F, n, seed=i, conjugate=conjugate)
