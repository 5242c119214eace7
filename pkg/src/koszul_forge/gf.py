"""Exact linear algebra over prime fields F_p.

Dense matrices are plain ``numpy`` integer arrays whose entries live in
``[0, p)``; the modulus travels alongside as an explicit argument.  Relation
spaces have ambient dimension ``d**2`` with small ``d``, so dense row
reduction is plenty.  :class:`SparseEchelon` covers the larger, very sparse
systems that show up when building resolutions.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"modulus must be a prime, got {p!r}")
    return int(p)


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def as_matrix(rows: Iterable[Sequence[int]] | np.ndarray, p: int, cols: int | None = None) -> np.ndarray:
    """Coerce ``rows`` into a reduced ``int64`` array of shape ``(m, cols)``."""
    arr = np.array(list(rows) if not isinstance(rows, np.ndarray) else rows, dtype=np.int64)
    if arr.size == 0:
        if cols is None:
            cols = arr.shape[1] if arr.ndim == 2 else 0
        return np.zeros((0, cols), dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("expected a two-dimensional array of row vectors")
    if cols is not None and arr.shape[1] != cols:
        raise ValueError(f"vectors have length {arr.shape[1]}, expected {cols}")
    return arr % p


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over F_p.

    Returns the nonzero rows of the rref and the list of pivot columns.
    """
    A = as_matrix(M, p).copy()
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * inv(int(A[r, c]), p)) % p
        col = A[:, c].copy()
        col[r] = 0
        if col.any():
            A = (A - np.outer(col, A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: np.ndarray, p: int) -> int:
    return len(rref(M, p)[1])


def kernel_from_rref(R: np.ndarray, pivots: list[int], ncols: int, p: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in set(pivots)]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for i, pc in enumerate(pivots):
            K[t, pc] = (-R[i, f]) % p
    return K


def rref_with_kernel(M: np.ndarray, p: int) -> tuple[np.ndarray, int, np.ndarray]:
    """Return ``(rref, rank, kernel_basis)`` with the kernel as rows."""
    A = as_matrix(M, p)
    R, pivots = rref(A, p)
    return R, len(pivots), kernel_from_rref(R, pivots, A.shape[1], p)


def canonical_basis(vectors, dim: int, p: int) -> np.ndarray:
    """Canonical basis (nonzero rref rows) of the span of ``vectors``."""
    return rref(as_matrix(vectors, p, dim), p)[0]


def annihilator(basis, ambient_dim: int, p: int) -> np.ndarray:
    """Basis of ``{a : a . v = 0 for all v in basis}``, in canonical form."""
    B = as_matrix(basis, p, ambient_dim)
    R, pivots = rref(B, p)
    K = kernel_from_rref(R, pivots, ambient_dim, p)
    return rref(K, p)[0]


def same_span(a, b, dim: int, p: int) -> bool:
    ca, cb = canonical_basis(a, dim, p), canonical_basis(b, dim, p)
    return ca.shape == cb.shape and bool(np.array_equal(ca, cb))


def in_span(v, basis, dim: int, p: int) -> bool:
    B = as_matrix(basis, p, dim)
    return rank(np.vstack([B, as_matrix([v], p, dim)]), p) == rank(B, p)


class SparseEchelon:
    """Incremental sparse row echelon basis over F_p.

    Vectors are dicts from column keys to residues.  Columns are compared
    with ``key`` (default: natural order); every stored row has a pivot
    coefficient of 1 at its minimal column.  ``track=True`` keeps, for each
    stored row, the combination of inserted vectors it came from, so that
    dependent insertions yield kernel relations.
    """

    def __init__(self, p: int, key=None, track: bool = False):
        self.p = p
        self.key = key
        self.track = track
        self.rows: dict[Hashable, dict] = {}
        self.history: dict[Hashable, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def _lead(self, v: dict):
        return min(v, key=self.key) if self.key is not None else min(v)

    def reduce(self, vec: dict, hist: dict | None = None) -> tuple[dict, dict | None]:
        p = self.p
        v = {c: x % p for c, x in vec.items() if x % p}
        h = dict(hist) if hist is not None else None
        while v:
            c = self._lead(v)
            row = self.rows.get(c)
            if row is None:
                break
            f = v[c]
            for col, x in row.items():
                y = (v.get(col, 0) - f * x) % p
                if y:
                    v[col] = y
                else:
                    v.pop(col, None)
            if h is not None:
                for col, x in self.history[c].items():
                    y = (h.get(col, 0) - f * x) % p
                    if y:
                        h[col] = y
                    else:
                        h.pop(col, None)
        return v, h

    def add(self, vec: dict, label: Hashable = None) -> dict | None:
        """Insert ``vec``.

        Returns ``None`` if it was independent.  If it was dependent, returns
        the kernel relation among inserted labels (when tracking) or ``{}``.
        """
        hist = {label: 1} if self.track else None
        v, h = self.reduce(vec, hist)
        if not v:
            return h if self.track else {}
        c = self._lead(v)
        s = inv(v[c], self.p)
        self.rows[c] = {col: (x * s) % self.p for col, x in v.items()}
        if self.track:
            self.history[c] = {col: (x * s) % self.p for col, x in h.items()}
        return None

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]
