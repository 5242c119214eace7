"""Koszulity and strong-freeness verdicts.

All claims are bounded: a ``Certified`` verdict carries a certificate that
holds in every degree, a ``Refuted`` verdict carries a concrete witness, and
anything else is reported as ``ConsistentUpTo(N)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .free_algebra import MonomialOrder
from .quadratic import Combine, QuadraticAlgebra, component_dim, dual, make_quadratic, pair_index
from .rewriting import (
    DEFAULT_NMAX,
    algebra_hilbert,
    algebra_system,
    combinatorially_free,
    complete,
    counts_from_system,
    enumerate_normal_words,
    pbw_certificate,
    rational_series_equal,
    relator_leads,
    series_inverse,
)
from .errors import InternalInvariantError

DEFAULT_UW_BUDGET = 200

CERTIFIED = "Certified"
REFUTED = "Refuted"
CONSISTENT = "ConsistentUpTo"


@dataclass
class Verdict:
    status: str
    certificate: str | None = None
    refutation: dict | None = None
    upto: int | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status == CERTIFIED and not self.certificate:
            raise InternalInvariantError("a Certified verdict needs a certificate")
        if self.status == REFUTED and not self.refutation:
            raise InternalInvariantError("a Refuted verdict needs a refutation")
        if self.certificate and self.refutation:
            raise InternalInvariantError("a verdict cannot be both certified and refuted")

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    def label(self) -> str:
        if self.status == CONSISTENT:
            return f"ConsistentUpTo({self.upto})"
        if self.status == REFUTED:
            detail = ", ".join(f"{k}={v}" for k, v in self.refutation.items() if k != "kind")
            return f"Refuted({self.refutation['kind']}: {detail})"
        return f"Certified({self.certificate})"

    def to_dict(self) -> dict:
        return {
            "verdict": self.status,
            "certificate": self.certificate,
            "refutation": self.refutation,
            "upto": self.upto,
            "notes": list(self.notes),
        }


KoszulVerdict = Verdict


def target_denominator(d: int, degrees) -> list[int]:
    """Coefficients of ``1 - d z + sum z^s``."""
    top = max(list(degrees) + [1])
    den = [0] * (top + 1)
    den[0] = 1
    den[1] -= d
    for s in degrees:
        den[s] += 1
    return den


def first_mismatch(a, b) -> int | None:
    for n, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return n
    return None


def strongly_free_check(
    relators,
    order=None,
    p=None,
    d=None,
    nmax: int = DEFAULT_NMAX,
    budget: int = DEFAULT_UW_BUDGET,
    seed: int = 0,
    koszul_route: bool = True,
) -> Verdict:
    """Is the quotient series equal to ``1/(1 - dz + sum z^{s_i})``?

    Routes, in order: combinatorial freeness of the leading monomials, a
    finite Groebner basis with matching rational series, and (for quadratic
    relators) a Koszul certificate for the quotient whose dual vanishes in
    degree 3.  The last one is independent of the variable order.
    """
    relators = list(relators)
    if relators:
        p, d = relators[0].p, relators[0].d
    order = order or MonomialOrder.default(d)
    if not relators:
        return Verdict(CERTIFIED, "EmptySequence", notes=["the empty sequence is strongly free"])
    for f in relators:
        if f.is_zero() or not f.is_homogeneous():
            raise ValueError(f"relator {f} is not a nonzero homogeneous polynomial")
        if f.degree() < 2:
            raise ValueError(f"relator {f} has degree < 2")
    degrees = [f.degree() for f in relators]
    den = target_denominator(d, degrees)
    leads = relator_leads(relators, order)
    ok, witness = combinatorially_free(leads)
    if ok:
        return Verdict(
            CERTIFIED,
            "CombinatorialFreeness",
            notes=[f"leading monomials {leads} are combinatorially free"],
        )
    R = complete(relators, order, p, d, nmax)
    coeffs = counts_from_system(R, nmax)
    k = first_mismatch(coeffs, series_inverse(den, nmax))
    if k is not None:
        return Verdict(
            REFUTED,
            refutation={"kind": "SeriesMismatch", "degree": k},
            notes=[f"quotient series {coeffs[:k + 1]} vs target {series_inverse(den, k)}"],
        )
    if R.finite and rational_series_equal(R, den):
        return Verdict(CERTIFIED, "RationalSeries", notes=["finite Groebner basis; series equal as rational functions"])
    notes = [f"combinatorial freeness fails: {witness}"]
    if koszul_route and set(degrees) == {2}:
        A = make_quadratic(p, d, relators)
        if A.r == len(relators) and component_dim(dual(A), 3) == 0:
            cert = koszul_certificate(A, nmax, budget, seed)
            if cert is not None:
                return Verdict(
                    CERTIFIED,
                    "KoszulDual",
                    notes=notes
                    + [
                        f"algebra is Koszul ({cert.label()}) and its dual has series 1 + {d}z + {A.r}z^2, "
                        "so the series is 1/(1 - dz + rz^2) exactly"
                    ],
                )
    return Verdict(CONSISTENT, upto=nmax, notes=notes)


def extremal_series_koszul(A: QuadraticAlgebra, nmax: int = DEFAULT_NMAX, order=None) -> Verdict:
    """Compare the series of ``A`` with ``1/(1 - dz + rz^2)``."""
    den = [1, -A.d, A.r]
    coeffs = algebra_hilbert(A, nmax, order)
    k = first_mismatch(coeffs, series_inverse(den, nmax))
    if k is not None:
        return Verdict(
            REFUTED,
            refutation={"kind": "ExtremalSeriesMismatch", "degree": k},
            notes=["refutes the extremal series property only, not Koszulity"],
        )
    R = algebra_system(A, nmax, order)
    if R.finite and rational_series_equal(R, den):
        return Verdict(
            CERTIFIED,
            "ExtremalSeries",
            notes=["series equals (1-dz+rz^2)^-1 exactly; Koszulity via the extremal-series criterion"],
        )
    return Verdict(CONSISTENT, upto=nmax)


@dataclass
class SeriesIdentity:
    holds: bool
    upto: int
    fails_at: int | None
    product: list[int]

    def label(self) -> str:
        return f"holds_up_to({self.upto})" if self.holds else f"fails_at({self.fails_at})"


def series_identity_check(A: QuadraticAlgebra, nmax: int = DEFAULT_NMAX, order=None) -> SeriesIdentity:
    """Coefficients of ``h_A(z) * h_{A!}(-z)``; a nonzero one refutes Koszulity."""
    a = algebra_hilbert(A, nmax, order)
    b = algebra_hilbert(dual(A), nmax, order)
    prod = [sum(a[k] * b[n - k] * (-1) ** (n - k) for k in range(n + 1)) for n in range(nmax + 1)]
    bad = next((n for n, c in enumerate(prod) if c != (1 if n == 0 else 0)), None)
    return SeriesIdentity(bad is None, nmax, bad, prod)


# ---------------------------------------------------------------------------
# U + W criterion
# ---------------------------------------------------------------------------

@dataclass
class UWResult:
    certified: bool
    failed: str | None = None
    notes: list[str] = field(default_factory=list)


def _tensor(u, w, d: int, p: int) -> list[int]:
    v = [0] * (d * d)
    for i in range(d):
        if u[i] % p:
            for j in range(d):
                if w[j] % p:
                    v[pair_index(i + 1, j + 1, d)] = (v[pair_index(i + 1, j + 1, d)] + u[i] * w[j]) % p
    return v


def uw_check(A: QuadraticAlgebra, U_basis, W_basis, verify_cubic: bool = True) -> UWResult:
    """Test ``A_2 = U.W`` and ``U.U = 0`` for a splitting ``A_1 = U + W``."""
    p, d = A.p, A.d
    U = [list(map(int, u)) for u in U_basis]
    W = [list(map(int, w)) for w in W_basis]
    if any(len(v) != d for v in U + W):
        raise ValueError(f"basis vectors must have length {d}")
    if len(U) + len(W) != d or gf.rank(gf.as_matrix(U + W, p, d), p) != d:
        raise ValueError("U and W do not form a direct-sum decomposition of A_1")
    omega = A.omega_matrix()
    r = A.r
    products = [_tensor(u, w, d, p) for u in U for w in W]
    span = gf.rank(np.vstack([omega, gf.as_matrix(products, p, d * d)]), p) if products else r
    if span != d * d:
        return UWResult(False, "i", [f"U.W spans {span - r} of the {d * d - r} dimensions of A_2"])
    for u, v in itertools.product(U, repeat=2):
        if not gf.in_span(_tensor(u, v, d, p), omega, d * d, p):
            return UWResult(False, "ii", ["a product of two U vectors is nonzero in A_2"])
    res = UWResult(True)
    if verify_cubic:
        a3 = component_dim(A, 3)
        if a3 != 0:
            raise InternalInvariantError(f"U+W conditions hold but dim A_3 = {a3}")
        res.notes.append("verified A_3 = 0")
    return res


def _coordinate_splits(d: int):
    for k in range(d + 1):
        for S in itertools.combinations(range(d), k):
            U = [[1 if i == s else 0 for i in range(d)] for s in S]
            W = [[1 if i == s else 0 for i in range(d)] for s in range(d) if s not in S]
            yield U, W


def _random_invertible(d: int, p: int, rng: random.Random) -> list[list[int]]:
    while True:
        M = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        if gf.rank(gf.as_matrix(M, p, d), p) == d:
            return M


@dataclass
class UWSearch:
    found: bool
    U: list | None = None
    W: list | None = None
    tried: int = 0
    notes: list[str] = field(default_factory=list)


def _complement(U: list[list[int]], d: int, p: int) -> list[list[int]]:
    """Coordinate vectors completing ``U`` to a basis."""
    W: list[list[int]] = []
    for i in range(d):
        e = [1 if j == i else 0 for j in range(d)]
        if gf.rank(gf.as_matrix(U + W + [e], p, d), p) == len(U) + len(W) + 1:
            W.append(e)
    return W


def _sparse_isotropic_splits(A: QuadraticAlgebra, limit: int):
    """Depth-first search over ``U`` spanned by vectors with at most two entries in {1, -1}.

    Only ``U`` matters: when ``U.U = 0`` one has ``U.W = U.A_1``, so any
    complement ``W`` works.  Yields at most ``limit`` candidate splits.
    """
    p, d = A.p, A.d
    omega = A.omega_matrix()
    quiet = lambda u, v: gf.in_span(_tensor(u, v, d, p), omega, d * d, p)  # noqa: E731
    cands = []
    for i in range(d):
        cands.append([1 if j == i else 0 for j in range(d)])
        for j in range(i + 1, d):
            for s in sorted({1, p - 1}):
                v = [0] * d
                v[i], v[j] = 1, s
                cands.append(v)
    cands = [v for v in cands if quiet(v, v)]
    count = 0

    def extend(U, start):
        nonlocal count
        for t in range(start, len(cands)):
            if count >= limit:
                return
            v = cands[t]
            if gf.rank(gf.as_matrix(U + [v], p, d), p) != len(U) + 1:
                continue
            if not all(quiet(u, v) and quiet(v, u) for u in U):
                continue
            U2 = U + [v]
            count += 1
            yield U2, _complement(U2, d, p)
            if len(U2) < d - 1:
                yield from extend(U2, t + 1)

    yield from extend([], 0)


def uw_search(
    A: QuadraticAlgebra, budget: int = DEFAULT_UW_BUDGET, seed: int = 0, coordinate_only: bool = False
) -> UWSearch:
    """Look for ``A_1 = U + W`` passing :func:`uw_check`.

    Coordinate splits are tried exhaustively first, then up to ``budget``
    sparse isotropic subspaces, then ``budget`` random changes of basis.
    ``not found`` is not a refutation.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    tried = 0
    for U, W in _coordinate_splits(A.d):
        tried += 1
        if uw_check(A, U, W, verify_cubic=False).certified:
            uw_check(A, U, W)
            return UWSearch(True, U, W, tried, ["coordinate split"])
    if coordinate_only or not A.d:
        return UWSearch(False, tried=tried, notes=["no coordinate split works"])
    for U, W in _sparse_isotropic_splits(A, budget):
        tried += 1
        if uw_check(A, U, W, verify_cubic=False).certified:
            uw_check(A, U, W)
            return UWSearch(True, U, W, tried, ["sparse isotropic subspace"])
    rng = random.Random(seed)
    for _ in range(budget):
        M = _random_invertible(A.d, A.p, rng)
        k = rng.randrange(A.d + 1)
        tried += 1
        if uw_check(A, M[:k], M[k:], verify_cubic=False).certified:
            uw_check(A, M[:k], M[k:])
            return UWSearch(True, M[:k], M[k:], tried, [f"random basis change, seed={seed}"])
    return UWSearch(False, tried=tried, notes=[f"no split found (seed={seed}, budget={budget})"])


# ---------------------------------------------------------------------------
# bigraded Ext via a minimal resolution of the trivial module
# ---------------------------------------------------------------------------

@dataclass
class ExtTable:
    imax: int
    jmax: int
    dims: dict[tuple[int, int], int]

    def __getitem__(self, ij) -> int:
        return self.dims.get(ij, 0)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.imax, self.jmax) + 1)]

    def off_diagonal(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, n) for (i, j), n in self.dims.items() if i != j and n)

    def is_diagonal(self) -> bool:
        return not self.off_diagonal()

    def rows(self) -> list[list[int]]:
        return [[self[i, j] for j in range(self.jmax + 1)] for i in range(self.imax + 1)]


def ext_table(A: QuadraticAlgebra, imax: int, jmax: int, order=None) -> ExtTable:
    """Dimensions of Ext^{i,j}_A(k, k) for ``i <= imax``, ``j <= jmax``.

    Builds a minimal graded free resolution of the trivial right module
    degree by degree over the normal-word basis of ``A``.  New generators in
    degree ``j`` are added exactly when the kernel in degree ``j`` is not
    reached by generators of lower degree, detected by a rank comparison.
    """
    p = A.p
    R = algebra_system(A, jmax, order)
    basis = {n: enumerate_normal_words(R, n) for n in range(jmax + 1)}

    def act(img: dict, w) -> dict:
        out: dict = {}
        for (h, u), c in img.items():
            for v, x in R.reduce_word(u + w).items():
                key = (h, v)
                y = (out.get(key, 0) + c * x) % p
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
        return out

    gens: dict[int, list[tuple[int, dict | None]]] = {0: [(0, None)]}
    dims = {(i, j): 0 for i in range(imax + 1) for j in range(jmax + 1)}
    dims[0, 0] = 1
    kdim: dict[tuple[int, int], int] = {}

    def free_dim(i: int, j: int) -> int:
        return sum(len(basis[j - g]) for g, _ in gens[i] if g <= j)

    def kernel(i: int, j: int) -> list[dict]:
        if i == 0:
            return [{(0, w): 1} for w in basis[j]] if j >= 1 else []
        ech = gf.SparseEchelon(p, track=True)
        out = []
        for g, (deg, img) in enumerate(gens[i]):
            if deg > j:
                continue
            for w in basis[j - deg]:
                rel = ech.add(act(img, w), label=(g, w))
                if rel is not None:
                    out.append(rel)
        return out

    for i in range(imax):
        gens[i + 1] = []
        for j in range(jmax + 1):
            kd = (len(basis[j]) if j >= 1 else 0) if i == 0 else free_dim(i, j) - kdim[i - 1, j]
            kdim[i, j] = kd
            if kd == 0:
                continue
            ech = gf.SparseEchelon(p)
            for deg, img in gens[i + 1]:
                for w in basis[j - deg]:
                    if len(ech) == kd:
                        break
                    ech.add(act(img, w))
            new = kd - len(ech)
            if new < 0:
                raise InternalInvariantError("image exceeds kernel dimension")
            if new:
                added = 0
                for v in kernel(i, j):
                    if ech.add(v) is None:
                        gens[i + 1].append((j, v))
                        added += 1
                        if added == new:
                            break
                if added != new:
                    raise InternalInvariantError(f"could not complete kernel at ({i}, {j})")
                dims[i + 1, j] = new
    return ExtTable(imax, jmax, dims)


# ---------------------------------------------------------------------------
# aggregate verdict
# ---------------------------------------------------------------------------

def pbw_search(A: QuadraticAlgebra, max_orders: int = 120) -> MonomialOrder | None:
    """Variable order under which ``A`` has a quadratic Groebner basis, if any is found."""
    rels = A.relators()
    orders = [MonomialOrder.default(A.d)]
    if A.d <= 5:
        orders += [MonomialOrder(perm) for perm in itertools.permutations(range(1, A.d + 1))][1:]
    for order in orders[:max_orders]:
        R = complete(rels, order, A.p, A.d, 3)
        if pbw_certificate(R):
            return order
    return None


def koszul_certificate(A: QuadraticAlgebra, nmax: int = DEFAULT_NMAX, budget: int = DEFAULT_UW_BUDGET, seed: int = 0) -> Verdict | None:
    """Certificate search only: provenance, PBW, extremal series, U+W on ``A`` or its dual."""
    prov = A.provenance
    if prov is not None and prov.kind in (Combine.SUM, Combine.FREE):
        parts = [koszul_certificate(X, nmax, budget, seed) for X in (prov.left, prov.right)]
        if all(v is not None for v in parts):
            return Verdict(
                CERTIFIED,
                "ClosureOperation",
                notes=[f"{prov.kind.value} of Koszul algebras: " + "; ".join(v.label() for v in parts)],
            )
    order = pbw_search(A)
    if order is not None:
        return Verdict(CERTIFIED, "PBW", notes=[f"quadratic Groebner basis for order {order.variables}"])
    ext = extremal_series_koszul(A, nmax)
    if ext.certified:
        return ext
    if not series_identity_check(A, min(nmax, 5)).holds:
        return None
    for target, where in ((A, "algebra"), (dual(A), "quadratic dual")):
        search = uw_search(target, budget, seed)
        if search.found:
            return Verdict(
                CERTIFIED, "UWDecomposition", notes=[f"split of the {where}: U={search.U}, W={search.W}"]
            )
    return None


def koszul_verdict(
    A: QuadraticAlgebra,
    nmax: int = DEFAULT_NMAX,
    budget: int = DEFAULT_UW_BUDGET,
    seed: int = 0,
    ext_bounds: tuple[int, int] | None = None,
) -> Verdict:
    """Aggregate certificate / refutation search for the Koszul property."""
    notes = [f"nmax={nmax}, budget={budget}, seed={seed}"]
    cert = koszul_certificate(A, nmax, budget, seed)
    if cert is not None:
        cert.notes = notes + cert.notes
        return cert
    ident = series_identity_check(A, nmax)
    if not ident.holds:
        return Verdict(
            REFUTED,
            refutation={"kind": "SeriesIdentityFailure", "degree": ident.fails_at},
            notes=notes + [f"h_A(z) h_A!(-z) = {ident.product}"],
        )
    imax, jmax = ext_bounds or (min(nmax, 4), min(nmax, 5))
    table = ext_table(A, imax, jmax)
    off = table.off_diagonal()
    if off:
        i, j, _ = off[0]
        return Verdict(REFUTED, refutation={"kind": "OffDiagonalExt", "i": i, "j": j}, notes=notes)
    return Verdict(CONSISTENT, upto=nmax, notes=notes + [f"Ext diagonal up to ({imax}, {jmax})"])
