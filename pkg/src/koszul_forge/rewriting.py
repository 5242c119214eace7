"""Bounded-degree noncommutative Groebner bases for homogeneous ideals.

Completion runs degree by degree.  In degree ``n`` the candidates are the
input relators of degree ``n`` together with the S-polynomials of all
overlaps of length ``n`` between existing rules.  Candidates are reduced by
the rules found so far and then row reduced against each other; the
resulting rows are the new rules of degree ``n``.  Since all data is
homogeneous, the system obtained after degree ``n`` is a Groebner basis of
the ideal up to degree ``n`` and is fully interreduced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CompletionBudgetExceeded, InternalInvariantError
from .free_algebra import MonomialOrder, NcPoly, Word, leading_monomial
from .gf import SparseEchelon, inv

DEFAULT_NMAX = 8
DEFAULT_MAX_RULES = 50_000


@dataclass(frozen=True)
class RewriteRule:
    """``lead -> tail``; every word of ``tail`` is smaller than ``lead``."""

    lead: Word
    tail: NcPoly

    @property
    def degree(self) -> int:
        return len(self.lead)

    def as_poly(self) -> NcPoly:
        return NcPoly.monomial(self.lead, self.tail.p, self.tail.d) - self.tail


@dataclass
class RewriteSystem:
    p: int
    d: int
    order: MonomialOrder
    rules: list[RewriteRule]
    complete_up_to: int
    # True when every overlap in every degree resolves: a finite Groebner basis.
    finite: bool = False
    # Smallest degree of an overlap that still produces a new rule.
    obstruction_degree: int | None = None
    _index: dict = field(default_factory=dict, repr=False)
    _lengths: tuple = field(default=(), repr=False)
    _nf_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._reindex()

    def _reindex(self):
        self._index = {r.lead: r.tail for r in self.rules}
        self._lengths = tuple(sorted({len(r.lead) for r in self.rules}))
        self._nf_cache = {}

    @property
    def leads(self) -> list[Word]:
        return [r.lead for r in self.rules]

    def find_lead(self, w: Word) -> tuple[int, Word] | None:
        index = self._index
        for i in range(len(w)):
            for L in self._lengths:
                if i + L > len(w):
                    break
                if w[i : i + L] in index:
                    return i, w[i : i + L]
        return None

    def is_normal(self, w: Word) -> bool:
        return self.find_lead(w) is None

    def reduce_word(self, w: Word) -> dict[Word, int]:
        """Normal form of a single word, memoised."""
        cache = self._nf_cache
        if w in cache:
            return cache[w]
        stack = [w]
        p = self.p
        while stack:
            u = stack[-1]
            if u in cache:
                stack.pop()
                continue
            hit = self.find_lead(u)
            if hit is None:
                cache[u] = {u: 1}
                stack.pop()
                continue
            i, lead = hit
            pre, post = u[:i], u[i + len(lead) :]
            children = [pre + t + post for t in self._index[lead].support()]
            missing = [c for c in children if c not in cache]
            if missing:
                stack.extend(missing)
                continue
            out: dict[Word, int] = {}
            for t, c in self._index[lead].items():
                for v, x in cache[pre + t + post].items():
                    y = (out.get(v, 0) + c * x) % p
                    if y:
                        out[v] = y
                    else:
                        out.pop(v, None)
            cache[u] = out
            stack.pop()
        return cache[w]

    def normal_form_terms(self, terms) -> dict[Word, int]:
        p = self.p
        out: dict[Word, int] = {}
        for w, c in terms:
            for v, x in self.reduce_word(w).items():
                y = (out.get(v, 0) + c * x) % p
                if y:
                    out[v] = y
                else:
                    out.pop(v, None)
        return out

    def normal_form(self, f: NcPoly) -> NcPoly:
        return NcPoly(self.p, self.d, self.normal_form_terms(f.items()))

    def overlaps(self, min_len: int = 0, max_len: int | None = None):
        """Yield ``(word, s_poly_terms)`` for every proper overlap of two leads."""
        yield from _overlaps(self.rules, self.rules, self.p, min_len, max_len)


def _overlaps(rules_a, rules_b, p, min_len=0, max_len=None):
    for ra in rules_a:
        la = ra.lead
        for rb in rules_b:
            lb = rb.lead
            for k in range(1, min(len(la), len(lb))):
                n = len(la) + len(lb) - k
                if n < min_len or (max_len is not None and n > max_len):
                    continue
                if la[-k:] != lb[:k]:
                    continue
                left, right = la[:-k], lb[k:]
                # W = la*right = left*lb ; S = tail_a*right - left*tail_b
                terms: dict[Word, int] = {}
                for w, c in ra.tail.items():
                    terms[w + right] = (terms.get(w + right, 0) + c) % p
                for w, c in rb.tail.items():
                    terms[left + w] = (terms.get(left + w, 0) - c) % p
                yield la + right, [(w, c) for w, c in terms.items() if c]


def _interreduce_degree(candidates: list[dict], order: MonomialOrder, p: int, d: int) -> list[RewriteRule]:
    """Row reduce same-degree candidate relations into monic rules."""
    ech = SparseEchelon(p, key=lambda w: tuple(-x for x in order.key(w)[1]))
    for c in candidates:
        ech.add(c)
    # back-substitute so that no lead appears in another row
    leads = sorted(ech.rows, key=order.key)
    rows = {lead: dict(ech.rows[lead]) for lead in leads}
    for lead in leads:  # ascending: smaller leads are final before use
        row = rows[lead]
        for other in leads:
            if other == lead or other not in row:
                continue
            if order.key(other) > order.key(lead):
                continue
            f = row[other]
            for w, x in rows[other].items():
                y = (row.get(w, 0) - f * x) % p
                if y:
                    row[w] = y
                else:
                    row.pop(w, None)
    out = []
    for lead in leads:
        row = rows[lead]
        s = inv(row[lead], p)
        tail = {w: (-x * s) % p for w, x in row.items() if w != lead}
        out.append(RewriteRule(lead, NcPoly(p, d, tail)))
    return out


def complete(
    relators,
    order: MonomialOrder | None = None,
    p: int | None = None,
    d: int | None = None,
    nmax: int = DEFAULT_NMAX,
    max_rules: int = DEFAULT_MAX_RULES,
    check_tail: bool = True,
) -> RewriteSystem:
    """Complete homogeneous ``relators`` to a Groebner basis up to degree ``nmax``.

    After the degree-bounded run, overlaps of length above ``nmax`` are also
    tested (there are finitely many); if they all resolve, the system is a
    genuine finite Groebner basis and ``finite`` is set.  Otherwise
    ``obstruction_degree`` records the first degree needing a new rule.
    Raises :class:`CompletionBudgetExceeded` (carrying the partial system)
    when more than ``max_rules`` rules would be needed.
    """
    relators = [f for f in relators if not f.is_zero()]
    if relators:
        p = relators[0].p if p is None else p
        d = relators[0].d if d is None else d
    if p is None or d is None:
        raise ValueError("p and d are required when there are no relators")
    order = order or MonomialOrder.default(d)
    if order.d != d:
        raise ValueError("monomial order arity does not match d")
    by_degree: dict[int, list[dict]] = {}
    for f in relators:
        if f.p != p or f.d != d:
            raise ValueError("relator modulus or arity mismatch")
        if not f.is_homogeneous():
            raise ValueError(f"relator {f} is not homogeneous")
        if f.degree() < 1:
            raise ValueError("relators must have positive degree")
        by_degree.setdefault(f.degree(), []).append(f.terms)

    system = RewriteSystem(p, d, order, [], 0)
    top = max(by_degree, default=0)
    for n in range(1, nmax + 1):
        cands = [dict(c) for c in by_degree.get(n, [])]
        cands += [dict(t) for _, t in system.overlaps(n, n)]
        if not cands:
            system.complete_up_to = n
            continue
        reduced = [system.normal_form_terms(c.items()) for c in cands]
        reduced = [r for r in reduced if r]
        new_rules = _interreduce_degree(reduced, order, p, d) if reduced else []
        if len(system.rules) + len(new_rules) > max_rules:
            system.complete_up_to = n - 1
            raise CompletionBudgetExceeded(
                f"completion needs more than {max_rules} rules by degree {n}", system
            )
        if new_rules:
            system.rules.extend(new_rules)
            system._reindex()
        system.complete_up_to = n

    # finiteness: overlaps beyond the stamp, and no unprocessed relators
    system.finite = top <= nmax
    if system.finite:
        maxlen = 2 * max((len(r.lead) for r in system.rules), default=0)
        for n in range(nmax + 1, maxlen):
            if any(system.normal_form_terms(t) for _, t in system.overlaps(n, n)):
                system.finite = False
                system.obstruction_degree = n
                break
    else:
        system.obstruction_degree = min(k for k in by_degree if k > nmax)
    if check_tail:
        _check_reduced(system)
    return system


def _check_reduced(system: RewriteSystem) -> None:
    leads = system.leads
    for r in system.rules:
        for t in r.tail.support():
            if system.order.key(t) >= system.order.key(r.lead):
                raise InternalInvariantError(f"tail word {t} not below lead {r.lead}")
            if system.find_lead(t) is not None and len(t) <= system.complete_up_to:
                raise InternalInvariantError(f"tail word {t} of rule {r.lead} is reducible")
    for a, b in itertools.permutations(leads, 2):
        if len(a) <= len(b) and _is_subword(a, b):
            raise InternalInvariantError(f"lead {a} divides lead {b}")


def _is_subword(a: Word, b: Word) -> bool:
    la = len(a)
    return any(b[i : i + la] == a for i in range(len(b) - la + 1))


def normal_form(f: NcPoly, R: RewriteSystem) -> NcPoly:
    return R.normal_form(f)


def pbw_certificate(R: RewriteSystem) -> bool:
    """Quadratic Groebner basis check: all rules quadratic, all cubic overlaps resolve."""
    if R.complete_up_to < 3:
        raise ValueError("system must be completed at least to degree 3")
    if any(len(r.lead) != 2 for r in R.rules):
        return False
    return not any(R.normal_form_terms(t) for _, t in R.overlaps(3, 3))


# ---------------------------------------------------------------------------
# counting normal words
# ---------------------------------------------------------------------------

class WordAutomaton:
    """Automaton accepting words that avoid every lead as a subword.

    States are the proper prefixes of leads; the state of a word is its
    longest suffix that is such a prefix.
    """

    def __init__(self, leads, d: int):
        self.d = d
        self.leads = set(map(tuple, leads))
        prefixes = {()}
        for w in self.leads:
            for k in range(len(w)):
                prefixes.add(w[:k])
        self.states = sorted(prefixes, key=lambda w: (len(w), w))
        self.index = {s: i for i, s in enumerate(self.states)}
        self.delta: list[list[int | None]] = []
        for s in self.states:
            row = []
            for x in range(1, d + 1):
                w = s + (x,)
                if any(w[len(w) - k :] in self.leads for k in range(1, len(w) + 1)):
                    row.append(None)
                    continue
                k = 0
                while w[k:] not in prefixes:
                    k += 1
                row.append(self.index[w[k:]])
            self.delta.append(row)

    def counts(self, nmax: int) -> list[int]:
        vec = [0] * len(self.states)
        vec[self.index[()]] = 1
        out = [1]
        for _ in range(nmax):
            nxt = [0] * len(self.states)
            for s, c in enumerate(vec):
                if c:
                    for t in self.delta[s]:
                        if t is not None:
                            nxt[t] += c
            vec = nxt
            out.append(sum(vec))
        return out


def transfer_matrix_counts(leads, d: int, nmax: int) -> list[int]:
    """Counts for degree-2 leads via the d x d matrix of allowed letter pairs."""
    allowed = [[0 if (i, j) in set(leads) else 1 for j in range(1, d + 1)] for i in range(1, d + 1)]
    out = [1]
    if nmax >= 1:
        vec = [1] * d
        out.append(d)
        for _ in range(2, nmax + 1):
            vec = [sum(vec[i] * allowed[i][j] for i in range(d)) for j in range(d)]
            out.append(sum(vec))
    return out[: nmax + 1]


def enumerate_normal_words(R: RewriteSystem, n: int) -> list[Word]:
    """Normal words of degree ``n``, built by one-letter extensions."""
    level = [()]
    for _ in range(n):
        nxt = []
        for w in level:
            for x in range(1, R.d + 1):
                u = w + (x,)
                # only suffixes can contain a new lead
                if not any(u[len(u) - L :] in R._index for L in R._lengths if L <= len(u)):
                    nxt.append(u)
        level = nxt
    return level


def counts_from_system(R: RewriteSystem, nmax: int, crosscheck_upto: int = 5) -> list[int]:
    leads = R.leads
    if leads and all(len(w) == 2 for w in leads):
        counts = transfer_matrix_counts(leads, R.d, nmax)
    else:
        counts = WordAutomaton(leads, R.d).counts(nmax)
    for n in range(min(nmax, crosscheck_upto) + 1):
        if R.d ** n > 20000:
            break
        if len(enumerate_normal_words(R, n)) != counts[n]:
            raise InternalInvariantError(f"normal word count mismatch in degree {n}")
    return counts


def hilbert_coeffs(relators, order=None, p=None, d=None, nmax: int = DEFAULT_NMAX) -> list[int]:
    """Dimensions a_0..a_nmax of the quotient by the ideal of ``relators``."""
    R = complete(relators, order, p, d, nmax)
    return counts_from_system(R, nmax)


def rational_series_equal(R: RewriteSystem, target_den: list[int]) -> bool:
    """Exact test that the normal-word series of a finite GB equals ``1/target_den``.

    The series of a finite system is ``P/Q`` with ``deg P, deg Q`` bounded by
    the automaton size ``m``; comparing coefficients through degree
    ``m + deg(target_den)`` therefore decides equality.
    """
    if not R.finite:
        raise ValueError("rational comparison needs a finite Groebner basis")
    auto = WordAutomaton(R.leads, R.d)
    N = len(auto.states) + len(target_den)
    return auto.counts(N) == series_inverse(target_den, N)


def series_inverse(den: list[int], nmax: int) -> list[int]:
    """Integer coefficients of ``1/den`` (``den[0]`` must be 1)."""
    if not den or den[0] != 1:
        raise ValueError("constant term must be 1")
    out = [1]
    for n in range(1, nmax + 1):
        out.append(-sum(den[k] * out[n - k] for k in range(1, min(n, len(den) - 1) + 1)))
    return out


def combinatorially_free(leads) -> tuple[bool, tuple | None]:
    """Anick's combinatorial freeness of a list of words.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is
    ``("subword", i, j)`` (word i occurs inside word j) or
    ``("overlap", i, j, k)`` (the last k letters of word i begin word j).
    """
    words = [tuple(w) for w in leads]
    if any(not w for w in words):
        raise ValueError("leading monomials must be nonempty")
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            if i != j and len(a) <= len(b) and _is_subword(a, b):
                return False, ("subword", i, j)
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            for k in range(1, min(len(a), len(b))):
                if a[-k:] == b[:k]:
                    return False, ("overlap", i, j, k)
    return True, None


def relator_leads(relators, order: MonomialOrder) -> list[Word]:
    return [leading_monomial(f, order)[0] for f in relators if not f.is_zero()]


@lru_cache(maxsize=512)
def _algebra_system(A, order: MonomialOrder, nmax: int) -> RewriteSystem:
    return complete(A.relators(), order, A.p, A.d, nmax)


def algebra_system(A, nmax: int, order: MonomialOrder | None = None) -> RewriteSystem:
    """Cached completion of a quadratic algebra's relations."""
    order = order or MonomialOrder.default(A.d)
    return _algebra_system(A, order, max(nmax, 3))


def algebra_hilbert(A, nmax: int, order: MonomialOrder | None = None) -> list[int]:
    return counts_from_system(algebra_system(A, nmax, order), nmax)
