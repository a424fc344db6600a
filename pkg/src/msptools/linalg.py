"""Exact, deterministic linear algebra over prime fields.

Entries are held as ``int64`` residues in a numpy array. Since the modulus is
below 2^31, every product of two residues fits in 63 bits, so elimination
steps are a single vectorised multiply-subtract followed by ``% q``.

Pivoting is always "first nonzero entry in column order" and free variables
are assigned unit vectors in ascending index order, which makes every
returned vector reproducible byte for byte.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, ModulusMismatch
from .gf import GF, FieldElement, inverse_mod


def _as_array(entries, rows=None, cols=None) -> np.ndarray:
    arr = np.array(
        [[int(x) for x in row] for row in entries] if not isinstance(entries, np.ndarray) else entries,
        dtype=np.int64,
    )
    if arr.size == 0:
        arr = arr.reshape(rows or 0, cols or 0)
    if arr.ndim != 2:
        raise DimensionMismatch("matrix entries must form a 2-d grid")
    return arr


class Matrix:
    """Immutable d x l matrix over F_q."""

    __slots__ = ("_a", "q")

    def __init__(self, entries, q: int, *, rows: int | None = None, cols: int | None = None):
        GF(q)  # validates the modulus
        a = _as_array(entries, rows, cols) % q
        a.setflags(write=False)
        self._a = a
        self.q = q

    @classmethod
    def _wrap(cls, a: np.ndarray, q: int) -> "Matrix":
        m = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        m._a = a
        m.q = q
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int) -> "Matrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), q)

    @classmethod
    def identity(cls, n: int, q: int) -> "Matrix":
        return cls._wrap(np.eye(n, dtype=np.int64), q)

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the residues."""
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def field(self) -> GF:
        return GF(self.q)

    def entry(self, i: int, j: int) -> FieldElement:
        return self.field(int(self._a[i, j]))

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._wrap(self._a[list(idx), :].reshape(len(idx), self.cols), self.q)

    def transpose(self) -> "Matrix":
        return Matrix._wrap(self._a.T, self.q)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            _check_same_field(self, other)
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            return Matrix._wrap(matmul_mod(self._a, other._a, self.q), self.q)
        v = np.asarray(other, dtype=np.int64)
        if v.shape[0] != self.cols:
            raise DimensionMismatch(f"{self.shape} @ vector of length {v.shape[0]}")
        return matmul_mod(self._a, v % self.q, self.q)

    def left_mul(self, z) -> np.ndarray:
        """Row vector times matrix, ``z @ self``."""
        z = np.asarray(z, dtype=np.int64) % self.q
        if z.shape != (self.rows,):
            raise DimensionMismatch(f"vector of length {z.shape} @ {self.shape}")
        return matmul_mod(z, self._a, self.q)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.q == other.q and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.q, self._a.shape, self._a.tobytes()))

    def __repr__(self):
        return f"Matrix({self.tolist()}, q={self.q})"


def _check_same_field(a: Matrix, b: Matrix):
    if a.q != b.q:
        raise ModulusMismatch(f"F_{a.q} vs F_{b.q}")


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Exact ``a @ b mod q`` without int64 overflow."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1] if a.ndim else 1
    # Each product is < q^2; chunk the inner dimension so sums stay below 2^63.
    bound = (q - 1) ** 2
    chunk = max(1, (2**63 - 1) // bound) if bound else inner
    if chunk >= inner:
        return (a @ b) % q
    out = None
    for start in range(0, inner, chunk):
        part = (a[..., start:start + chunk] @ b[start:start + chunk, ...]) % q
        out = part if out is None else (out + part) % q
    return out


class Rref(NamedTuple):
    matrix: Matrix
    pivots: list[int]
    rank: int


def _rref_array(a: np.ndarray, q: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """In-place style RREF on a copy; pivots searched only in the first ``ncols`` columns."""
    a = np.array(a, dtype=np.int64, copy=True) % q
    nrows, total = a.shape
    ncols = total if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv = inverse_mod(int(a[r, c]), q)
        if inv != 1:
            a[r] = (a[r] * inv) % q
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % q
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> Rref:
    a, pivots = _rref_array(m.array, m.q)
    return Rref(Matrix._wrap(a, m.q), pivots, len(pivots))


def rank(m: Matrix) -> int:
    return len(_rref_array(m.array, m.q)[1])


def solve(a: Matrix, b) -> np.ndarray | None:
    """Particular solution x of ``a @ x = b`` with free variables set to zero, or None."""
    b = np.asarray(b, dtype=np.int64).reshape(-1) % a.q
    if b.shape[0] != a.rows:
        raise DimensionMismatch(f"right-hand side of length {b.shape[0]} for {a.rows} equations")
    aug = np.concatenate([a.array, b[:, None]], axis=1)
    red, pivots = _rref_array(aug, a.q, ncols=a.cols)
    r = len(pivots)
    if np.any(red[r:, -1]):
        return None
    x = np.zeros(a.cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, -1]
    if not np.array_equal(matmul_mod(a.array, x, a.q), b):
        raise AssertionError("solver produced a non-solution")  # pragma: no cover
    return x


def row_combination(m: Matrix, target) -> np.ndarray | None:
    """Coefficients z with ``z @ m == target``, or None if target is outside the row span."""
    target = np.asarray(target, dtype=np.int64).reshape(-1)
    if target.shape[0] != m.cols:
        raise DimensionMismatch(f"target of length {target.shape[0]} for {m.cols} columns")
    z = solve(m.transpose(), target)
    if z is not None and not np.array_equal(m.left_mul(z), target % m.q):
        raise AssertionError("row combination failed re-verification")  # pragma: no cover
    return z


def in_row_span(m: Matrix, target) -> bool:
    target = np.asarray(target, dtype=np.int64).reshape(1, -1) % m.q
    if target.shape[1] != m.cols:
        raise DimensionMismatch(f"target of length {target.shape[1]} for {m.cols} columns")
    if m.rows == 0:
        return not np.any(target)
    base = len(_rref_array(m.array, m.q)[1])
    return base == len(_rref_array(np.concatenate([m.array, target]), m.q)[1])


def kernel_basis(m: Matrix) -> list[np.ndarray]:
    """Basis of {v : m @ v = 0}, one vector per free column in ascending order."""
    red, pivots = _rref_array(m.array, m.q)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i, f]) % m.q
        basis.append(v)
    return basis


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    q = blocks[0].q
    for b in blocks:
        if b.q != q:
            raise ModulusMismatch("cannot stack matrices over different fields")
    return Matrix._wrap(np.concatenate([b.array for b in blocks], axis=1), q)


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    q = blocks[0].q
    for b in blocks:
        if b.q != q:
            raise ModulusMismatch("cannot stack matrices over different fields")
    return Matrix._wrap(np.concatenate([b.array for b in blocks], axis=0), q)
