"""Pro-p group presentations and the passage to graded algebras.

Relators are words in the free generators with integer exponents.  The
truncated Magnus expansion ``x_i -> 1 + X_i`` gives each relator an initial
form (lowest nonzero homogeneous part of ``psi(r) - 1``) whose degree is the
relator's Zassenhaus weight.  The initial forms present ``gr F_p[[G]]`` when
they are strongly free, which is what :func:`analyze` checks before drawing
the duality and Koszulity conclusions.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

from . import gf
from .errors import WeightExceedsBound
from .free_algebra import MonomialOrder, NcPoly, format_poly, multiply
from .koszul import (
    CONSISTENT,
    REFUTED,
    DEFAULT_UW_BUDGET,
    Verdict,
    koszul_verdict,
    series_identity_check,
    strongly_free_check,
)
from .quadratic import QuadraticAlgebra, component_dim, dual, make_quadratic, demushkin_relator
from .rewriting import DEFAULT_NMAX, algebra_hilbert, series_inverse


class GroupWord:
    """Reduced word ``x_{i1}^{e1} x_{i2}^{e2} ...`` with nonzero exponents."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        out: list[list[int]] = []
        for i, e in factors:
            i, e = int(i), int(e)
            if i < 1:
                raise ValueError(f"generator index must be positive, got {i}")
            if not e:
                continue
            if out and out[-1][0] == i:
                out[-1][1] += e
                if not out[-1][1]:
                    out.pop()
            else:
                out.append([i, e])
        self.factors = tuple((i, e) for i, e in out)

    @classmethod
    def gen(cls, i: int, e: int = 1) -> GroupWord:
        return cls([(i, e)])

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.factors + other.factors)

    def inverse(self) -> GroupWord:
        return GroupWord((i, -e) for i, e in reversed(self.factors))

    def __pow__(self, n: int) -> GroupWord:
        base = self if n >= 0 else self.inverse()
        return GroupWord(base.factors * abs(n))

    def max_index(self) -> int:
        return max((i for i, _ in self.factors), default=0)

    def is_identity(self) -> bool:
        return not self.factors

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupWord) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"GroupWord({format_group_word(self)!r})"

    def __str__(self) -> str:
        return format_group_word(self)


def commutator(u: GroupWord, v: GroupWord) -> GroupWord:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def format_group_word(w: GroupWord) -> str:
    if w.is_identity():
        return "1"
    return "*".join(f"x{i}" + (f"^{e}" if e != 1 else "") for i, e in w.factors)


_GTOKEN = re.compile(r"\s*(?:([xX])(\d+)|(-?\d+)|(\^)|([*\[\](),]))")


def parse_group_word(text: str) -> GroupWord:
    """Parse ``[x1,x2]*x3^-2``-style relator text (nested brackets allowed)."""
    toks, pos, text = [], 0, text.strip()
    while pos < len(text):
        m = _GTOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse group word near {text[pos:]!r}")
        _, idx, num, caret, sym = m.groups()
        toks.append(("gen", idx) if idx else ("num", num) if num else ("^", "^") if caret else (sym, sym))
        pos = m.end()
    k = 0

    def peek():
        return toks[k][0] if k < len(toks) else None

    def take(kind):
        nonlocal k
        if peek() != kind:
            raise ValueError(f"expected {kind!r} in {text!r}")
        k += 1
        return toks[k - 1][1]

    def word() -> GroupWord:
        acc = factor()
        while peek() == "*":
            take("*")
            acc = acc * factor()
        return acc

    def power(base: GroupWord) -> GroupWord:
        if peek() == "^":
            take("^")
            return base ** int(take("num"))
        return base

    def factor() -> GroupWord:
        t = peek()
        if t == "gen":
            return power(GroupWord.gen(int(take("gen"))))
        if t == "num":
            if take("num") != "1":
                raise ValueError(f"only 1 may stand alone as a number in {text!r}")
            return power(GroupWord())
        if t == "[":
            take("[")
            u = word()
            take(",")
            v = word()
            take("]")
            return power(commutator(u, v))
        if t == "(":
            take("(")
            u = word()
            take(")")
            return power(u)
        raise ValueError(f"unexpected token {t!r} in {text!r}")

    if not toks:
        raise ValueError("empty relator text")
    w = word()
    if k != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return w


@dataclass(frozen=True)
class GroupPresentation:
    p: int
    d: int
    relators: tuple[GroupWord, ...]

    def __post_init__(self):
        gf.check_prime(self.p)
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            if r.max_index() > self.d:
                raise ValueError(f"relator {r} uses a generator beyond x{self.d}")

    @classmethod
    def parse(cls, p: int, d: int, relators) -> GroupPresentation:
        return cls(p, d, tuple(parse_group_word(r) if isinstance(r, str) else r for r in relators))

    @property
    def m(self) -> int:
        return len(self.relators)

    def relator_strings(self) -> list[str]:
        return [format_group_word(r) for r in self.relators]


def default_dmax(p: int) -> int:
    return max(p, 4)


def _binom(e: int, k: int) -> int:
    # generalised binomial coefficient C(e, k) for any integer e
    if e >= 0:
        return math.comb(e, k)
    return (-1) ** k * math.comb(-e + k - 1, k)


def magnus_expand(w: GroupWord, p: int, d: int, D: int) -> NcPoly:
    """Truncated Magnus series of ``w``: product of ``(1 + X_i)^e`` up to degree ``D``."""
    if D < 1:
        raise ValueError("truncation degree must be at least 1")
    if w.max_index() > d:
        raise ValueError(f"word {w} uses a generator beyond x{d}")
    out = NcPoly.one(p, d)
    for i, e in w.factors:
        factor = NcPoly(p, d, {(i,) * k: _binom(e, k) for k in range(D + 1)})
        out = multiply(out, factor, D)
    return out


@dataclass(frozen=True)
class InitialForm:
    form: NcPoly
    weight: int


def initial_form(r: GroupWord, p: int, d: int, Dmax: int | None = None, retry: bool = True) -> InitialForm:
    """Lowest nonzero homogeneous part of ``psi(r) - 1`` and its degree.

    If the expansion is trivial up to ``Dmax``, the bound is doubled once
    before giving up with :class:`WeightExceedsBound`.
    """
    if r.is_identity():
        raise ValueError("the identity word has no initial form")
    Dmax = Dmax or default_dmax(p)
    for D in (Dmax, 2 * Dmax) if retry else (Dmax,):
        f = magnus_expand(r, p, d, D) - NcPoly.one(p, d)
        if not f.is_zero():
            n = f.low_degree()
            return InitialForm(f.homogeneous_component(n), n)
    raise WeightExceedsBound(f"relator {r} has weight above {D}; raise Dmax")


def minimality_check(G: GroupPresentation, Dmax: int | None = None) -> int | None:
    """Index of the first relator of weight 1, or ``None`` if the presentation is minimal."""
    for k, r in enumerate(G.relators):
        if r.is_identity() or initial_form(r, G.p, G.d, Dmax).weight < 2:
            return k
    return None


def initial_forms(G: GroupPresentation, Dmax: int | None = None) -> list[InitialForm]:
    return [initial_form(r, G.p, G.d, Dmax) for r in G.relators]


@dataclass
class GradedPresentation:
    p: int
    d: int
    relators: list[NcPoly]
    weights: list[int]
    notes: list[str] = field(default_factory=list)

    def relator_strings(self) -> list[str]:
        return [format_poly(f) for f in self.relators]

    def is_quadratic(self) -> bool:
        return all(w == 2 for w in self.weights)

    def algebra(self) -> QuadraticAlgebra:
        if not self.is_quadratic():
            raise ValueError("initial forms are not all quadratic")
        return make_quadratic(self.p, self.d, self.relators)


def gr_presentation(G: GroupPresentation, Dmax: int | None = None) -> GradedPresentation:
    bad = minimality_check(G, Dmax)
    if bad is not None:
        raise ValueError(f"presentation is not minimal: relator {bad} has weight 1")
    forms = initial_forms(G, Dmax)
    return GradedPresentation(
        G.p,
        G.d,
        [f.form for f in forms],
        [f.weight for f in forms],
        ["presents gr F_p[[G]] when the initial forms are strongly free (G mild)"],
    )


@dataclass
class CohomologyDims:
    h1: int
    h2: int
    independent: bool | None


def cohomology_dims(G: GroupPresentation, Dmax: int | None = None) -> CohomologyDims:
    """``dim H^1`` and ``dim H^2`` read off a minimal presentation."""
    gr = gr_presentation(G, Dmax)
    if not G.relators:
        return CohomologyDims(G.d, 0, True)
    if gr.is_quadratic():
        rk = gr.algebra().r
        return CohomologyDims(G.d, rk, rk == G.m)
    return CohomologyDims(G.d, G.m, None)


def mildness_check(
    G: GroupPresentation,
    order: MonomialOrder | None = None,
    Dmax: int | None = None,
    nmax: int = DEFAULT_NMAX,
    budget: int = DEFAULT_UW_BUDGET,
    seed: int = 0,
    koszul_route: bool = True,
) -> Verdict:
    """Strong freeness of the initial forms, for this presentation and variable order."""
    gr = gr_presentation(G, Dmax)
    order = order or MonomialOrder.default(G.d)
    v = strongly_free_check(gr.relators, order, G.p, G.d, nmax, budget, seed, koszul_route)
    v.notes.append(f"relative to variable order {order.variables}")
    if v.refuted:
        v.notes.append("refutes strong freeness of this relator sequence only, not mildness of G")
    if G.p == 2 and G.m == 1:
        v.notes.append("one-relator mildness is classically stated for p != 2")
    return v


def mildness_search(
    G: GroupPresentation,
    Dmax: int | None = None,
    nmax: int = DEFAULT_NMAX,
    max_d: int = 6,
    budget: int = DEFAULT_UW_BUDGET,
    seed: int = 0,
) -> tuple[Verdict, MonomialOrder]:
    """Retry :func:`mildness_check` over all variable orders (for ``d <= max_d``)."""
    first = mildness_check(G, None, Dmax, nmax, budget, seed)
    best = (first, MonomialOrder.default(G.d))
    if first.certified or first.refuted or G.d > max_d:
        return best
    for perm in itertools.permutations(range(1, G.d + 1)):
        order = MonomialOrder(perm)
        # the Koszul route does not depend on the order and already ran above
        v = mildness_check(G, order, Dmax, nmax, budget, seed, koszul_route=False)
        if v.certified:
            return v, order
        if v.status == CONSISTENT and best[0].status == REFUTED:
            best = (v, order)
    return best


@dataclass
class QuadraticityReport:
    condition_a: bool
    condition_b: bool | None
    cohomology: QuadraticAlgebra | None
    notes: list[str] = field(default_factory=list)


def quadraticity_conditions(
    G: GroupPresentation,
    order: MonomialOrder | None = None,
    Dmax: int | None = None,
    nmax: int = DEFAULT_NMAX,
    mild: Verdict | None = None,
) -> QuadraticityReport:
    """Conditions (a) and (b) for quadratic cohomology of a mild group.

    (a): every initial form is quadratic and they are linearly independent;
    (b): the quadratic dual of the graded algebra vanishes in degree 3.
    """
    gr = gr_presentation(G, Dmax)
    notes = []
    mild = mild or mildness_check(G, order, Dmax, nmax)
    if not mild.certified:
        notes.append(f"mildness not certified ({mild.label()}); cd(G) = 2 is not established")
    if not gr.is_quadratic():
        return QuadraticityReport(False, None, None, notes + [f"initial form weights {gr.weights}"])
    A = gr.algebra()
    cond_a = A.r == G.m
    if not cond_a:
        notes.append(f"initial forms span {A.r} < {G.m} dimensions")
    H = dual(A)
    cond_b = component_dim(H, 3) == 0
    if not cond_b:
        notes.append("dual algebra has nonzero degree-3 component")
    return QuadraticityReport(cond_a, cond_b, H if cond_a and cond_b else None, notes)


@dataclass
class GroupReport:
    presentation: GroupPresentation
    minimal: bool
    h1: int | None = None
    h2: int | None = None
    independent: bool | None = None
    weights: list[int] = field(default_factory=list)
    gr: GradedPresentation | None = None
    mildness: Verdict | None = None
    order: MonomialOrder | None = None
    condition_a: bool | None = None
    condition_b: bool | None = None
    gr_algebra: QuadraticAlgebra | None = None
    cohomology: QuadraticAlgebra | None = None
    gr_koszul: Verdict | None = None
    cohomology_koszul: Verdict | None = None
    gr_series: list[int] = field(default_factory=list)
    cohomology_series: list[int] = field(default_factory=list)
    extremal_match: bool | None = None
    series_identity: str | None = None
    conclusion: str | None = None
    warnings: list[str] = field(default_factory=list)


def analyze(
    G: GroupPresentation,
    order: MonomialOrder | None = None,
    Dmax: int | None = None,
    nmax: int = DEFAULT_NMAX,
    budget: int = DEFAULT_UW_BUDGET,
    seed: int = 0,
    search_orders: bool = False,
) -> GroupReport:
    """Run the full group-to-algebra pipeline and collect a report."""
    bad = minimality_check(G, Dmax)
    rep = GroupReport(G, bad is None)
    if bad is not None:
        rep.warnings.append(f"relator {bad} has weight 1: presentation is not minimal")
        return rep
    dims = cohomology_dims(G, Dmax)
    rep.h1, rep.h2, rep.independent = dims.h1, dims.h2, dims.independent
    rep.gr = gr_presentation(G, Dmax)
    rep.weights = rep.gr.weights
    if search_orders:
        rep.mildness, rep.order = mildness_search(G, Dmax, nmax, budget=budget, seed=seed)
    else:
        rep.order = order or MonomialOrder.default(G.d)
        rep.mildness = mildness_check(G, rep.order, Dmax, nmax, budget, seed)
    rep.warnings += [n for n in rep.mildness.notes if "p != 2" in n or "order" in n]
    if not rep.gr.is_quadratic():
        rep.condition_a = False
        rep.warnings.append("some initial form has weight > 2; quadratic machinery disabled")
        return rep
    quad = quadraticity_conditions(G, rep.order, Dmax, nmax, rep.mildness)
    rep.condition_a, rep.condition_b = quad.condition_a, quad.condition_b
    rep.gr_algebra = rep.gr.algebra()
    rep.cohomology = dual(rep.gr_algebra)
    rep.gr_koszul = koszul_verdict(rep.gr_algebra, nmax, budget, seed)
    rep.cohomology_koszul = koszul_verdict(rep.cohomology, nmax, budget, seed)
    rep.gr_series = algebra_hilbert(rep.gr_algebra, nmax)
    rep.cohomology_series = algebra_hilbert(rep.cohomology, nmax)
    rep.extremal_match = rep.gr_series == series_inverse([1, -G.d, rep.gr_algebra.r], nmax)
    rep.series_identity = series_identity_check(rep.gr_algebra, nmax).label()
    if rep.mildness.certified and quad.condition_a and quad.condition_b:
        rep.conclusion = (
            "G is mild with quadratic cohomology: H(G) and gr F_p[[G]] are quadratic dual and Koszul"
        )
        if not (rep.gr_koszul.certified and rep.cohomology_koszul.certified):
            rep.warnings.append("independent Koszul certificates were not all found")
    elif rep.mildness.certified:
        rep.conclusion = "G is mild; quadraticity of H(G) not established"
    return rep


def demushkin_group(p: int, d: int, kind: str | None = None) -> GroupPresentation:
    """One-relator presentation whose initial form is the Demushkin form."""
    kind = kind or ("a" if d % 2 == 0 else "c")
    demushkin_relator(p, d, kind)  # validates (p, d, kind)
    w = GroupWord()
    start = 2 if kind == "c" else 1
    if kind in ("b", "c"):
        w = w * GroupWord.gen(1, 2)
    for i in range(start, d, 2):
        w = w * commutator(GroupWord.gen(i), GroupWord.gen(i + 1))
    return GroupPresentation(p, d, (w,))
