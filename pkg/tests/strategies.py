"""Random inputs shared by the property tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from koszul_forge.free_algebra import NcPoly
from koszul_forge.quadratic import QuadraticAlgebra, make_quadratic
from oracles import random_relator_dicts


def random_algebra(rng: random.Random, primes=(2, 3, 5), max_d: int = 4, r: int | None = None) -> QuadraticAlgebra:
    p = rng.choice(primes)
    d = rng.randint(1, max_d)
    if r is None:
        r = rng.randint(0, d * d)
    rels = [NcPoly(p, d, f) for f in random_relator_dicts(rng, p, d, r)]
    return make_quadratic(p, d, rels)


def sparse_algebra(rng: random.Random, p: int, d: int, r: int, terms: int = 2) -> QuadraticAlgebra:
    """Relators with few terms, which tend to have small Groebner bases."""
    words = [(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    rels = []
    for _ in range(r):
        rels.append(NcPoly(p, d, {w: rng.randrange(1, p) for w in rng.sample(words, min(terms, len(words)))}))
    return make_quadratic(p, d, rels)


@st.composite
def algebras(draw, primes=(2, 3, 5), max_d: int = 4):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_algebra(random.Random(seed), primes, max_d)
