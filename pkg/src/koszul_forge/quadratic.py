"""Quadratic algebras Q(V, Omega), their duals and binary constructions.

A relation space lives in ``F_p^(d*d)``: coordinate ``(i-1)*d + (j-1)``
corresponds to the word ``X_i X_j``.  Relation spaces are always stored in
canonical (rref) form, so equality of algebras is equality of subspaces
under the fixed generator identification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import gf
from .free_algebra import NcPoly, commutator_poly, format_poly


class Combine(str, Enum):
    SUM = "sum"  # direct sum, all mixed products killed
    FREE = "free"  # free product, no mixed relations
    TENSOR = "tensor"  # symmetric tensor product, mixed commutators
    WEDGE = "wedge"  # wedge product, mixed anticommutators


@dataclass(frozen=True)
class Provenance:
    kind: Combine
    left: "QuadraticAlgebra"
    right: "QuadraticAlgebra"


@dataclass(frozen=True)
class QuadraticAlgebra:
    p: int
    d: int
    omega: tuple[tuple[int, ...], ...]
    provenance: Provenance | None = field(default=None, compare=False, repr=False)

    @property
    def r(self) -> int:
        return len(self.omega)

    def omega_matrix(self) -> np.ndarray:
        return gf.as_matrix(self.omega, self.p, self.d * self.d)

    def relators(self) -> list[NcPoly]:
        return [vector_to_poly(v, self.p, self.d) for v in self.omega]

    def relator_strings(self) -> list[str]:
        return [format_poly(f) for f in self.relators()]

    def __repr__(self) -> str:
        return f"QuadraticAlgebra(p={self.p}, d={self.d}, r={self.r})"


def pair_index(i: int, j: int, d: int) -> int:
    return (i - 1) * d + (j - 1)


def poly_to_vector(f: NcPoly, d: int) -> list[int]:
    v = [0] * (d * d)
    for w, c in f.items():
        if len(w) != 2:
            raise ValueError(f"relator {format_poly(f)!r} is not homogeneous of degree 2")
        v[pair_index(w[0], w[1], d)] = c
    return v


def vector_to_poly(v: Sequence[int], p: int, d: int) -> NcPoly:
    terms = {}
    for k, c in enumerate(v):
        if c % p:
            terms[(k // d + 1, k % d + 1)] = int(c)
    return NcPoly(p, d, terms)


def from_subspace(p: int, d: int, vectors, provenance: Provenance | None = None) -> QuadraticAlgebra:
    canon = gf.canonical_basis(vectors, d * d, p)
    return QuadraticAlgebra(p, d, tuple(tuple(int(x) for x in row) for row in canon), provenance)


def make_quadratic(p: int, d: int, relators: Sequence[NcPoly]) -> QuadraticAlgebra:
    gf.check_prime(p)
    if d < 0:
        raise ValueError("generator count must be nonnegative")
    vectors = []
    for f in relators:
        if f.p != p or f.d != d:
            raise ValueError("relator modulus or arity does not match the algebra")
        if f.is_zero():
            continue
        if f.low_degree() != 2 or f.degree() != 2:
            raise ValueError(f"relator {format_poly(f)!r} is not homogeneous of degree 2")
        vectors.append(poly_to_vector(f, d))
    if d == 0 and vectors:
        raise ValueError("an algebra without generators cannot carry relators")
    return from_subspace(p, d, vectors)


def dual(A: QuadraticAlgebra) -> QuadraticAlgebra:
    """Q(V*, Omega-perp) for the pairing <e*_i e*_j, e_k e_l> = delta_ik delta_jl."""
    return from_subspace(A.p, A.d, gf.annihilator(A.omega_matrix(), A.d * A.d, A.p))


def _embed(A: QuadraticAlgebra, offset: int, d: int) -> list[list[int]]:
    out = []
    for row in A.omega:
        v = [0] * (d * d)
        for k, c in enumerate(row):
            if c:
                i, j = k // A.d + 1, k % A.d + 1
                v[pair_index(i + offset, j + offset, d)] = c
        out.append(v)
    return out


def combine(A: QuadraticAlgebra, B: QuadraticAlgebra, kind: Combine | str) -> QuadraticAlgebra:
    """Generators of ``A`` come first, then those of ``B``."""
    kind = Combine(kind)
    if A.p != B.p:
        raise ValueError(f"modulus mismatch: {A.p} vs {B.p}")
    p, d = A.p, A.d + B.d
    vectors = _embed(A, 0, d) + _embed(B, A.d, d)
    for a in range(1, A.d + 1):
        for b in range(A.d + 1, d + 1):
            ab, ba = pair_index(a, b, d), pair_index(b, a, d)
            if kind is Combine.SUM:
                for k in (ab, ba):
                    v = [0] * (d * d)
                    v[k] = 1
                    vectors.append(v)
            elif kind in (Combine.TENSOR, Combine.WEDGE):
                v = [0] * (d * d)
                v[ab] = 1
                v[ba] = (-1 if kind is Combine.TENSOR else 1) % p
                vectors.append(v)
    return from_subspace(p, d, vectors, Provenance(kind, A, B))


DUAL_OF_COMBINE = {
    Combine.SUM: Combine.FREE,
    Combine.FREE: Combine.SUM,
    Combine.TENSOR: Combine.WEDGE,
    Combine.WEDGE: Combine.TENSOR,
}


# standard families ----------------------------------------------------------

def free_algebra(p: int, d: int) -> QuadraticAlgebra:
    return from_subspace(p, d, [])


def trivial_algebra(p: int, d: int) -> QuadraticAlgebra:
    return from_subspace(p, d, np.eye(d * d, dtype=np.int64))


def symmetric_algebra(p: int, d: int) -> QuadraticAlgebra:
    return make_quadratic(
        p, d, [commutator_poly(i, j, p, d) for i in range(1, d + 1) for j in range(i + 1, d + 1)]
    )


def exterior_algebra(p: int, d: int) -> QuadraticAlgebra:
    rels = [NcPoly(p, d, {(i, i): 1}) for i in range(1, d + 1)]
    rels += [
        NcPoly(p, d, {(i, j): 1, (j, i): 1}) for i in range(1, d + 1) for j in range(i + 1, d + 1)
    ]
    return make_quadratic(p, d, rels)


def demushkin_relator(p: int, d: int, kind: str | None = None) -> NcPoly:
    """The one-relator Demushkin forms.

    ``a``: ``[X1,X2] + [X3,X4] + ... + [X(d-1),Xd]`` for even ``d``;
    ``b``: ``X1^2`` plus the same sum, for ``p = 2`` and even ``d``;
    ``c``: ``X1^2 + [X2,X3] + ... + [X(d-1),Xd]`` for ``p = 2`` and odd ``d``.
    Without ``kind``, even ``d`` gives ``a`` and odd ``d`` gives ``c``.
    """
    gf.check_prime(p)
    if kind is None:
        kind = "a" if d % 2 == 0 else "c"
    if kind in ("a", "b") and (d < 2 or d % 2):
        raise ValueError(f"form ({kind}) needs an even d >= 2, got {d}")
    if kind in ("b", "c") and p != 2:
        raise ValueError(f"form ({kind}) exists only for p = 2")
    if kind == "c" and (d < 1 or d % 2 == 0):
        raise ValueError(f"form (c) needs an odd d, got {d}")
    if kind not in ("a", "b", "c"):
        raise ValueError(f"unknown Demushkin form {kind!r}")
    f = NcPoly.zero(p, d)
    start = 2 if kind == "c" else 1
    for i in range(start, d, 2):
        f = f + commutator_poly(i, i + 1, p, d)
    if kind in ("b", "c"):
        f = f + NcPoly(p, d, {(1, 1): 1})
    return f


def demushkin_algebra(p: int, d: int, kind: str | None = None) -> QuadraticAlgebra:
    return make_quadratic(p, d, [demushkin_relator(p, d, kind)])


def component_dim(A: QuadraticAlgebra, n: int, order=None) -> int:
    from .rewriting import algebra_hilbert

    if n < 0:
        raise ValueError("degree must be nonnegative")
    return algebra_hilbert(A, n, order)[n]


def k_of(A: QuadraticAlgebra, nmax: int, order=None) -> int | str:
    """Top nonvanishing degree, or ``">= nmax"`` when none vanishes up to nmax."""
    from .rewriting import algebra_hilbert

    if nmax < 2:
        raise ValueError("nmax must be at least 2")
    coeffs = algebra_hilbert(A, nmax, order)
    for n, a in enumerate(coeffs):
        if a == 0:
            return n - 1
    return f">= {nmax}"
