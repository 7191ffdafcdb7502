"""Exact dense linear algebra over a prime field F_p or over the rationals.

All matrices are numpy arrays: int64 entries reduced mod p when p > 0,
Fraction entries in object arrays when p == 0.  Every routine is exact;
there is no floating point anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Ground field context: F_p for prime p, or the rationals when p == 0."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime (use 0 for the rationals)")

    @property
    def rational(self) -> bool:
        return self.p == 0

    def el(self, v) -> "FieldElem":
        return FieldElem(self.normalize_scalar(v), self.p)

    def normalize_scalar(self, v):
        if self.p == 0:
            return Fraction(v)
        return int(v) % self.p

    def inv_scalar(self, v):
        if self.p == 0:
            if v == 0:
                raise ZeroDivisionError("inverse of 0")
            return Fraction(1, 1) / Fraction(v)
        v = int(v) % self.p
        if v == 0:
            raise ZeroDivisionError("inverse of 0 mod p")
        return pow(v, self.p - 2, self.p)

    # -- array constructors -------------------------------------------------

    def zeros(self, r, c):
        if self.p == 0:
            m = np.empty((r, c), dtype=object)
            m[...] = Fraction(0)
            return m
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n):
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self.one_scalar()
        return m

    def one_scalar(self):
        return Fraction(1) if self.p == 0 else 1

    def array(self, data):
        if self.p == 0:
            a = np.array([[Fraction(x) for x in row] for row in data], dtype=object)
            if a.ndim == 1:
                a = a.reshape(0, 0)
            return a
        return np.asarray(data, dtype=np.int64) % self.p

    def reduce(self, a):
        if self.p == 0:
            return a
        return a % self.p

    def matmul(self, a, b):
        # int64 products accumulate safely: p^2 * inner_dim < 2^63 for desk sizes
        if self.p == 0:
            if a.shape[1] == 0 or b.shape[1] == 0:
                return self.zeros(a.shape[0], b.shape[1])
            return np.dot(a, b)
        return (a @ b) % self.p

    def random(self, rng, r, c):
        if self.p == 0:
            raise ValueError("random sampling needs a finite field")
        return rng.integers(0, self.p, size=(r, c), dtype=np.int64)


@dataclass(frozen=True)
class FieldElem:
    """A single field element: residue mod p, or an exact rational when p == 0."""

    value: object
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        f = Field(self.p)
        object.__setattr__(self, "value", f.normalize_scalar(self.value))

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.value + other.value, self.p)

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.value * other.value, self.p)

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inv(self):
        return FieldElem(Field(self.p).inv_scalar(self.value), self.p)

    def _check(self, other):
        if self.p != other.p:
            raise ValueError("field mismatch")


class Matrix:
    """Dense matrix over a Field.  Thin wrapper used at module boundaries;
    internal hot loops work on the raw arrays."""

    def __init__(self, field: Field, data):
        self.field = field
        a = data if isinstance(data, np.ndarray) else field.array(data)
        if a.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        self.a = field.reduce(a)

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return Matrix(self.field, self.field.matmul(self.a, other.a))

    def __eq__(self, other):
        return self.field == other.field and self.a.shape == other.a.shape and bool(
            np.all(self.a == other.a)
        )

    def __repr__(self):
        return f"Matrix(F_{self.field.p}, {self.a.tolist()})"


# ---------------------------------------------------------------------------
# elimination kernels
# ---------------------------------------------------------------------------


def rref(a, p):
    """Reduced row echelon form.

    Returns (R, pivots) where R is the RREF of `a` and pivots is the strictly
    increasing list of pivot column indices.  Gauss-Jordan, vectorized row
    updates; exact over F_p (p prime) or the rationals (p == 0).
    """
    f = Field(p)
    m = f.reduce(np.array(a, copy=True))
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = f.inv_scalar(m[r, c])
        m[r] = f.reduce(m[r] * inv)
        col = m[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            m[mask] = f.reduce(m[mask] - np.outer(col[mask], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p):
    return len(rref(a, p)[1])


def kernel_basis(a, p):
    """Basis of the right kernel {x : a @ x = 0}, returned as columns of a
    matrix of shape (cols, nullity)."""
    f = Field(p)
    m = np.asarray(a)
    rows, cols = m.shape
    if cols == 0:
        return f.zeros(0, 0)
    r, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    out = f.zeros(cols, len(free))
    for j, fc in enumerate(free):
        out[fc, j] = f.one_scalar()
        for i, pc in enumerate(pivots):
            out[pc, j] = f.normalize_scalar(-r[i, fc])
    return out


def solve(a, b, p):
    """Solve a @ x = b exactly.  Returns one solution, or None if the system
    is inconsistent.  b may be a vector or a matrix of stacked columns."""
    f = Field(p)
    a = np.asarray(a)
    vec = np.asarray(b).ndim == 1
    bm = np.asarray(b).reshape(-1, 1) if vec else np.asarray(b)
    if a.shape[0] != bm.shape[0]:
        raise ValueError("dimension mismatch")
    aug = np.concatenate([f.reduce(a), f.reduce(bm)], axis=1)
    r, pivots = rref(aug, p)
    n = a.shape[1]
    if any(c >= n for c in pivots):
        return None
    x = f.zeros(n, bm.shape[1])
    for i, c in enumerate(pivots):
        x[c] = r[i, n:]
    return x[:, 0] if vec else x


def row_space_basis(a, p):
    r, pivots = rref(a, p)
    return r[: len(pivots)]


def column_space_basis(a, p):
    """Subset of columns of `a` forming a basis of its column space
    (indices returned alongside)."""
    _, pivots = rref(a, p)
    return np.asarray(a)[:, pivots], pivots


def in_span(vectors, v, p):
    """Is v in the column span of `vectors`?"""
    return solve(vectors, v, p) is not None


def complete_to_basis(sub, p, n=None):
    """Given independent columns `sub` in F^n, return indices of standard
    basis vectors completing them to a basis."""
    f = Field(p)
    sub = np.asarray(sub)
    n = sub.shape[0] if n is None else n
    aug = np.concatenate([sub, f.eye(n)], axis=1)
    _, pivots = rref(aug, p)
    k = sub.shape[1]
    return [c - k for c in pivots if c >= k]


def invert(a, p):
    """Exact inverse; raises if singular."""
    f = Field(p)
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("not square")
    aug = np.concatenate([f.reduce(a), f.eye(n)], axis=1)
    r, pivots = rref(aug, p)
    if pivots != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:]


def is_invertible(a, p):
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


class SpanTracker:
    """Incremental membership / insertion into a growing subspace of F^n.

    Holds row-reduced vectors; offer(v) reduces v against them and inserts the
    residue when nonzero.  O(rank * n) per offer."""

    def __init__(self, n, p):
        self.field = Field(p)
        self.n = n
        self.rows = []  # (pivot_col, normalized row)

    @property
    def rank(self):
        return len(self.rows)

    def residue(self, v):
        f = self.field
        w = f.reduce(np.array(v, copy=True))
        for (pc, row) in self.rows:
            c = w[pc]
            if c != 0:
                w = f.reduce(w - c * row)
        return w

    def offer(self, v):
        """Returns True if v was independent (and is now in the span)."""
        w = self.residue(v)
        nz = np.nonzero(w)[0]
        if len(nz) == 0:
            return False
        pc = int(nz[0])
        w = self.field.reduce(w * self.field.inv_scalar(w[pc]))
        self.rows.append((pc, w))
        return True

    def contains(self, v):
        return not self.residue(v).any()
