"""Finite simplicial graphs and the algebras and groups built from them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .free_algebra import NcPoly, commutator_poly
from .groups import GroupPresentation, GroupWord, commutator
from .quadratic import QuadraticAlgebra, make_quadratic


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, n: int, edges=()):
        clean = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"loop at vertex {a}")
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"edge {a}-{b} outside vertices 1..{n}")
            clean.add((min(a, b), max(a, b)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(clean))

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, itertools.combinations(range(1, n + 1), 2))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls(n, [(i, i + 1) for i in range(1, n)])

    # text forms ---------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> Graph:
        """``"4; 1-2, 2-3"`` or an adjacency-list JSON object."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_json(json.loads(text))
        head, _, rest = text.partition(";")
        n = int(head)
        edges = []
        for part in rest.split(","):
            part = part.strip()
            if not part:
                continue
            a, sep, b = part.partition("-")
            if not sep:
                raise ValueError(f"bad edge {part!r}; expected i-j")
            edges.append((int(a), int(b)))
        return cls(n, edges)

    def format(self) -> str:
        return f"{self.n}; " + ", ".join(f"{a}-{b}" for a, b in self.sorted_edges())

    def to_json(self) -> dict:
        adj = {str(v): [] for v in range(1, self.n + 1)}
        for a, b in self.sorted_edges():
            adj[str(a)].append(b)
            adj[str(b)].append(a)
        return {"n": self.n, "adjacency": {k: sorted(v) for k, v in adj.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> Graph:
        n = int(obj["n"])
        if "edges" in obj:
            return cls(n, [tuple(e) for e in obj["edges"]])
        edges = [(int(a), int(b)) for a, nbrs in obj.get("adjacency", {}).items() for b in nbrs]
        return cls(n, edges)


def triangle_free(G: Graph) -> tuple[bool, tuple[int, int, int] | None]:
    for a, b, c in itertools.combinations(range(1, G.n + 1), 3):
        if G.adjacent(a, b) and G.adjacent(b, c) and G.adjacent(a, c):
            return False, (a, b, c)
    return True, None


def raag_algebra(G: Graph, p: int) -> QuadraticAlgebra:
    """Right-angled Artin algebra: commutators over the edges."""
    return make_quadratic(p, G.n, [commutator_poly(a, b, p, G.n) for a, b in G.sorted_edges()])


def stanley_reisner(G: Graph, p: int) -> QuadraticAlgebra:
    """Exterior Stanley-Reisner algebra: exterior relations plus products of non-adjacent vertices."""
    d = G.n
    rels = [NcPoly(p, d, {(i, i): 1}) for i in range(1, d + 1)]
    for i, j in itertools.combinations(range(1, d + 1), 2):
        rels.append(NcPoly(p, d, {(i, j): 1, (j, i): 1}))
        if not G.adjacent(i, j):
            rels.append(NcPoly(p, d, {(i, j): 1}))
    return make_quadratic(p, d, rels)


def clique_series(G: Graph, nmax: int) -> list[int]:
    """``c_k`` = number of k-cliques for ``k <= nmax`` (``c_0 = 1``)."""
    counts = [0] * (nmax + 1)
    counts[0] = 1

    def extend(clique, candidates):
        k = len(clique)
        if k <= nmax and k:
            counts[k] += 1
        if k == nmax:
            return
        for idx, v in enumerate(candidates):
            extend(clique + [v], [u for u in candidates[idx + 1 :] if G.adjacent(u, v)])

    extend([], list(range(1, G.n + 1)))
    return counts


def raag_series_from_cliques(G: Graph, nmax: int) -> list[int]:
    """Expansion of ``1 / sum_k (-1)^k c_k z^k`` to degree ``nmax``."""
    c = clique_series(G, nmax)
    den = [(-1) ** k * ck for k, ck in enumerate(c)]
    out = [1]
    for n in range(1, nmax + 1):
        out.append(-sum(den[k] * out[n - k] for k in range(1, n + 1)))
    return out


def gen_raag_group(G: Graph, p: int, lam: dict | None = None, mu: dict | None = None) -> GroupPresentation:
    """Generalised pro-p RAAG: ``[v_i, v_j] = v_i^lam_ij v_j^mu_ij`` for edges ``i < j``.

    Relators are ``[v_i, v_j] v_j^-mu_ij v_i^-lam_ij``.  Parameters must be
    divisible by ``p`` (by 4 when ``p = 2``).
    """
    lam, mu = dict(lam or {}), dict(mu or {})
    modulus = 4 if p == 2 else p
    for name, table in (("lambda", lam), ("mu", mu)):
        for (i, j), v in table.items():
            if (min(i, j), max(i, j)) not in G.edges or i > j:
                raise ValueError(f"{name} given on ({i},{j}), which is not an edge i<j")
            if v % modulus:
                raise ValueError(f"{name}_{i}{j} = {v} is not divisible by {modulus}")
    relators = []
    for i, j in G.sorted_edges():
        vi, vj = GroupWord.gen(i), GroupWord.gen(j)
        relators.append(commutator(vi, vj) * vj ** (-mu.get((i, j), 0)) * vi ** (-lam.get((i, j), 0)))
    return GroupPresentation(p, G.n, tuple(relators))
