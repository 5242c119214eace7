"""Noncommutative polynomials over F_p in generators X1..Xd.

Words are tuples of 1-based generator indices; the empty tuple is the unit
monomial.  :class:`NcPoly` is an immutable finite map from words to nonzero
residues.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .gf import check_prime

Word = tuple[int, ...]


class NcPoly:
    __slots__ = ("p", "d", "_terms", "_hash")

    def __init__(self, p: int, d: int, terms: Mapping[Word, int] | None = None):
        self.p = p
        self.d = d
        clean: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            for i in w:
                if not 1 <= i <= d:
                    raise ValueError(f"generator index {i} outside 1..{d}")
            c %= p
            if c:
                clean[w] = (clean.get(w, 0) + c) % p
                if not clean[w]:
                    del clean[w]
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, p: int, d: int) -> NcPoly:
        return cls(p, d)

    @classmethod
    def one(cls, p: int, d: int) -> NcPoly:
        return cls(p, d, {(): 1})

    @classmethod
    def var(cls, i: int, p: int, d: int) -> NcPoly:
        return cls(p, d, {(i,): 1})

    @classmethod
    def monomial(cls, word: Iterable[int], p: int, d: int, coeff: int = 1) -> NcPoly:
        return cls(p, d, {tuple(word): coeff})

    @classmethod
    def _raw(cls, p: int, d: int, terms: dict[Word, int]) -> NcPoly:
        # terms already reduced and nonzero
        obj = cls.__new__(cls)
        obj.p, obj.d, obj._terms, obj._hash = p, d, terms, None
        return obj

    @property
    def terms(self) -> dict[Word, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Word]:
        return list(self._terms)

    def coeff(self, w: Word) -> int:
        return self._terms.get(tuple(w), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Maximal word length; -1 for the zero polynomial."""
        return max((len(w) for w in self._terms), default=-1)

    def low_degree(self) -> int:
        return min((len(w) for w in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self._terms}) <= 1

    def homogeneous_component(self, n: int) -> NcPoly:
        return NcPoly._raw(self.p, self.d, {w: c for w, c in self._terms.items() if len(w) == n})

    def truncate(self, n: int) -> NcPoly:
        return NcPoly._raw(self.p, self.d, {w: c for w, c in self._terms.items() if len(w) <= n})

    def _check(self, other: NcPoly) -> None:
        if self.p != other.p or self.d != other.d:
            raise ValueError(
                f"incompatible polynomials: (p={self.p}, d={self.d}) vs (p={other.p}, d={other.d})"
            )

    def __add__(self, other: NcPoly) -> NcPoly:
        self._check(other)
        t = dict(self._terms)
        for w, c in other._terms.items():
            x = (t.get(w, 0) + c) % self.p
            if x:
                t[w] = x
            else:
                t.pop(w, None)
        return NcPoly._raw(self.p, self.d, t)

    def __neg__(self) -> NcPoly:
        return NcPoly._raw(self.p, self.d, {w: (-c) % self.p for w, c in self._terms.items()})

    def __sub__(self, other: NcPoly) -> NcPoly:
        return self + (-other)

    def scale(self, c: int) -> NcPoly:
        c %= self.p
        if not c:
            return NcPoly.zero(self.p, self.d)
        return NcPoly._raw(self.p, self.d, {w: (x * c) % self.p for w, x in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> NcPoly:
        out = NcPoly.one(self.p, self.d)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return (self.p, self.d, self._terms) == (other.p, other.d, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.d, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"NcPoly(p={self.p}, d={self.d}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def multiply(f: NcPoly, g: NcPoly, trunc: int | None = None) -> NcPoly:
    """Concatenation product; terms of degree above ``trunc`` are dropped."""
    f._check(g)
    p = f.p
    out: dict[Word, int] = {}
    for u, a in f._terms.items():
        if trunc is not None and len(u) > trunc:
            continue
        for v, b in g._terms.items():
            if trunc is not None and len(u) + len(v) > trunc:
                continue
            w = u + v
            x = (out.get(w, 0) + a * b) % p
            if x:
                out[w] = x
            else:
                out.pop(w, None)
    return NcPoly._raw(p, f.d, out)


def commutator_poly(i: int, j: int, p: int, d: int) -> NcPoly:
    """``X_i X_j - X_j X_i``; zero (a degenerate input) when ``i == j``."""
    return NcPoly(p, d, {(i, j): 1, (j, i): -1}) if i != j else NcPoly.zero(p, d)


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order.

    ``variables`` lists the generator indices from smallest to largest, so the
    default ``(1, ..., d)`` means ``X1 < X2 < ... < Xd``.
    """

    variables: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.variables) != list(range(1, len(self.variables) + 1)):
            raise ValueError(f"variable order must be a permutation of 1..d, got {self.variables}")
        object.__setattr__(self, "_rank", {v: r for r, v in enumerate(self.variables)})

    @classmethod
    def default(cls, d: int) -> MonomialOrder:
        return cls(tuple(range(1, d + 1)))

    @property
    def d(self) -> int:
        return len(self.variables)

    def key(self, w: Word) -> tuple:
        rank = self._rank
        return (len(w), tuple(rank[i] for i in w))

    def less(self, u: Word, v: Word) -> bool:
        return self.key(u) < self.key(v)


def leading_monomial(f: NcPoly, order: MonomialOrder) -> tuple[Word, int]:
    if f.is_zero():
        raise ValueError("the zero polynomial has no leading monomial")
    w = max(f.support(), key=order.key)
    return w, f.coeff(w)


# ---------------------------------------------------------------------------
# text form:  2*X1*X2 + X3^2 - [X1,X2]
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([Xx])(\d+)|(\^)|([-+*\[\](),]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        num, _, idx, caret, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif idx is not None:
            out.append(("var", idx))
        elif caret:
            out.append(("^", "^"))
        else:
            out.append((sym, sym))
        pos = m.end()
    return out


def parse_poly(text: str, p: int, d: int) -> NcPoly:
    """Parse the textual form of a polynomial.

    Grammar: sums and differences of products of integers, ``Xi``, ``Xi^k``,
    parenthesised expressions and commutators ``[f,g] = fg - gf``.
    """
    check_prime(p)
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def take(kind):
        nonlocal pos
        if peek() != kind:
            raise ValueError(f"expected {kind!r} in {text!r}")
        pos += 1
        return toks[pos - 1][1]

    def expr() -> NcPoly:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take(peek()) == "-" else 1
        acc = term().scale(sign)
        while peek() in ("+", "-"):
            op = take(peek())
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> NcPoly:
        acc = factor()
        while peek() == "*":
            take("*")
            acc = acc * factor()
        return acc

    def power(base: NcPoly) -> NcPoly:
        if peek() == "^":
            take("^")
            return base ** int(take("num"))
        return base

    def factor() -> NcPoly:
        k = peek()
        if k == "num":
            return NcPoly(p, d, {(): int(take("num"))})
        if k == "var":
            i = int(take("var"))
            if not 1 <= i <= d:
                raise ValueError(f"generator X{i} outside X1..X{d}")
            return power(NcPoly.var(i, p, d))
        if k == "(":
            take("(")
            e = expr()
            take(")")
            return power(e)
        if k == "[":
            take("[")
            a = expr()
            take(",")
            b = expr()
            take("]")
            return power(a * b - b * a)
        if k == "-":
            take("-")
            return -factor()
        raise ValueError(f"unexpected token {k!r} in {text!r}")

    if not toks:
        raise ValueError("empty polynomial text")
    result = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return result


def format_word(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(f"X{w[i]}" + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "*".join(parts)


def format_poly(f: NcPoly) -> str:
    if f.is_zero():
        return "0"
    out = []
    for w in sorted(f.support(), key=lambda w: (len(w), w)):
        c = f.coeff(w)
        if not w:
            out.append(str(c))
        elif c == 1:
            out.append(format_word(w))
        else:
            out.append(f"{c}*{format_word(w)}")
    return " + ".join(out)
