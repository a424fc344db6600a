"""Diamond products and (strong) lambda-multiplicativity.

Entry layout. For a scheme whose player ``p`` holds local rows ``1..d_p``,
the lambda-fold diamond product of share vectors has one entry per
descriptor ``(p, (j_1, ..., j_lambda))``; descriptors are sorted by player
and then lexicographically by the row tuple. The columns of the diamond
matrix are indexed by ``(i_1, ..., i_lambda)`` in lexicographic order, so the
all-first-coordinates column is column 0 and the target is again e1, now of
length ``l ** lambda``. Note that "e1" therefore means three different
vectors depending on context (lengths l, l^2, l^3 for the base, 2-fold and
3-fold products); every :class:`RecombinationVector` carries its index so it
cannot be applied to the wrong layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, EnumerationTooLarge, InvalidWitness, SizeCapExceeded
from .linalg import Matrix, matmul_mod, row_combination
from .msp import Msp, blinding_vector, mask_of, maximal_adversary_structure, players_of

SIZE_CAP = 10**7


@dataclass(frozen=True)
class DiamondIndex:
    lam: int
    entries: tuple[tuple[int, tuple[int, ...]], ...]
    _pos: dict = field(default=None, compare=False, repr=False, hash=False)

    @classmethod
    def from_row_counts(cls, counts: dict[int, int], lam: int) -> "DiamondIndex":
        entries = tuple(
            (p, js)
            for p in sorted(counts)
            for js in product(range(1, counts[p] + 1), repeat=lam)
        )
        return cls(lam, entries)

    @classmethod
    def for_scheme(cls, scheme: Msp, lam: int) -> "DiamondIndex":
        return cls.from_row_counts({p: scheme.d_i(p) for p in scheme.players}, lam)

    def position(self, player: int, js: tuple[int, ...]) -> int:
        if self._pos is None:
            object.__setattr__(self, "_pos", {e: i for i, e in enumerate(self.entries)})
        return self._pos[(player, tuple(js))]

    def players(self) -> tuple[int, ...]:
        return tuple(sorted({p for p, _ in self.entries}))

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class RecombinationVector:
    coefficients: np.ndarray
    index: DiamondIndex
    q: int

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.int64) % self.q
        if c.shape != (len(self.index),):
            raise DimensionMismatch(f"{c.shape[0]} coefficients for an index of length {len(self.index)}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def lam(self) -> int:
        return self.index.lam

    def __len__(self):
        return len(self.index)

    def nonzero(self):
        for i in np.flatnonzero(self.coefficients):
            yield self.index.entries[i], int(self.coefficients[i])


def _kron_power(vecs: Sequence[np.ndarray], q: int) -> np.ndarray:
    out = vecs[0] % q
    for v in vecs[1:]:
        out = np.kron(out, v) % q
    return out


def _rows_by_player(labels: Sequence[int]) -> dict[int, list[int]]:
    rows: dict[int, list[int]] = {}
    for r, p in enumerate(labels):
        rows.setdefault(int(p), []).append(r)
    return rows


def diamond_vectors(labels: Sequence[int], vectors: Sequence[Sequence[int]], q: int | None = None):
    """Lambda-fold diamond product of share vectors labelled by ``labels``.

    Returns ``(values, index)``. ``q`` is inferred from field elements when
    omitted; with plain integers and no ``q`` the products are left unreduced.
    """
    if len(vectors) < 2:
        raise DimensionMismatch("a diamond product needs at least two vectors")
    d = len(labels)
    for v in vectors:
        if len(v) != d:
            raise DimensionMismatch(f"vector of length {len(v)} for {d} labels")
    if q is None:
        for v in vectors:
            for x in v:
                if hasattr(x, "modulus"):
                    q = x.modulus
                    break
            if q is not None:
                break
    arrs = [np.array([int(x) for x in v], dtype=object if q is None else np.int64) for v in vectors]
    rows = _rows_by_player(labels)
    parts = []
    for p in sorted(rows):
        sub = [a[rows[p]] for a in arrs]
        acc = sub[0]
        for s in sub[1:]:
            acc = np.kron(acc, s)
            if q is not None:
                acc %= q
        parts.append(acc)
    values = np.concatenate(parts)
    index = DiamondIndex.from_row_counts({p: len(r) for p, r in rows.items()}, len(vectors))
    return values, index


def diamond_size(scheme: Msp, lam: int) -> tuple[int, int]:
    return sum(scheme.d_i(p) ** lam for p in scheme.players), scheme.l ** lam


def diamond_matrix(scheme: Msp, lam: int) -> tuple[Matrix, tuple[int, ...]]:
    """The matrix whose rows are lambda-fold diamond products of M's rows, with row labels."""
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    rows, cols = diamond_size(scheme, lam)
    if rows * cols > SIZE_CAP:
        raise SizeCapExceeded(f"diamond matrix would be {rows} x {cols}, above the {SIZE_CAP} entry cap")
    a = scheme.matrix.array
    q = scheme.q
    blocks = []
    labels: list[int] = []
    for p in scheme.players:
        block = a[list(scheme.player_rows(p)), :]
        acc = block
        for _ in range(lam - 1):
            acc = np.kron(acc, block) % q
        blocks.append(acc)
        labels.extend([p] * acc.shape[0])
    return Matrix._wrap(np.concatenate(blocks, axis=0), q), tuple(labels)


def _e1(length: int) -> np.ndarray:
    e = np.zeros(length, dtype=np.int64)
    e[0] = 1
    return e


def witness_image(scheme: Msp, rv: RecombinationVector) -> np.ndarray:
    """``z @ M_diamond`` computed from the non-zero coefficients only.

    Avoids materialising the diamond matrix, so witnesses of schemes far above
    the size cap can still be checked exactly.
    """
    if rv.q != scheme.q:
        raise InvalidWitness("witness and scheme live in different fields")
    length = scheme.l ** rv.lam
    if length > SIZE_CAP:
        raise SizeCapExceeded(f"witness image of length {length} exceeds the cap")
    a = scheme.matrix.array
    q = scheme.q
    out = np.zeros(length, dtype=np.int64)
    for (p, js), c in rv.nonzero():
        try:
            rows = scheme.player_rows(p)
            vecs = [a[rows[j - 1]] for j in js]
        except (KeyError, IndexError):
            raise InvalidWitness(f"descriptor {(p, js)} does not fit the scheme") from None
        out = (out + c * _kron_power(vecs, q)) % q
    return out


def _index_matches(scheme: Msp, rv: RecombinationVector) -> bool:
    players = rv.index.players()
    if not set(players) <= set(scheme.players):
        return False
    counts = {p: scheme.d_i(p) for p in players}
    return rv.index == DiamondIndex.from_row_counts(counts, rv.lam)


def is_witness(scheme: Msp, rv: RecombinationVector) -> bool:
    """Exact check that ``z @ M_diamond == e1`` for the scheme the index describes."""
    if not _index_matches(scheme, rv):
        return False
    return bool(np.array_equal(witness_image(scheme, rv), _e1(scheme.l ** rv.lam)))


def apply_witness(scheme: Msp, rv: RecombinationVector, share_vectors: Sequence[Sequence[int]]) -> int:
    """``z`` applied to the diamond product of the given full share vectors."""
    a = [np.asarray([int(x) for x in v], dtype=np.int64) for v in share_vectors]
    if len(a) != rv.lam:
        raise DimensionMismatch(f"{len(a)} share vectors for a {rv.lam}-fold witness")
    q = scheme.q
    total = 0
    for (p, js), c in rv.nonzero():
        rows = scheme.player_rows(p)
        term = c
        for v, j in zip(a, js):
            term = term * int(v[rows[j - 1]]) % q
        total += term
    return total % q


def sample_identity(scheme: Msp, rv: RecombinationVector, samples: int, rng: np.random.Generator) -> int:
    """Number of random (s_k, rho_k) draws on which the product identity fails."""
    q = scheme.q
    M = scheme.matrix
    failures = 0
    for _ in range(samples):
        us = rng.integers(0, q, size=(rv.lam, scheme.l))
        shares = [M @ u for u in us]
        expected = 1
        for u in us:
            expected = expected * int(u[0]) % q
        if apply_witness(scheme, rv, shares) != expected:
            failures += 1
    return failures


def exhaustive_identity(scheme: Msp, rv: RecombinationVector, limit: int = 10**6) -> int:
    """Check the identity on every (s_k, rho_k) tuple; returns the failure count."""
    q, l, lam = scheme.q, scheme.l, rv.lam
    total = q ** (l * lam)
    if total > limit:
        raise EnumerationTooLarge(f"{total} tuples exceed the enumeration limit {limit}")
    vecs = np.array(list(product(range(q), repeat=l)), dtype=np.int64)  # (N, l)
    shares = matmul_mod(scheme.matrix.array, vecs.T, q)  # (d, N)
    N = vecs.shape[0]
    # Per-player tensor contraction of the witness with the share table.
    acc = np.zeros((N,) * lam, dtype=np.int64)
    for (p, js), c in rv.nonzero():
        rows = scheme.player_rows(p)
        term = shares[rows[js[0] - 1]] * c % q
        for j in js[1:]:
            term = np.multiply.outer(term, shares[rows[j - 1]]) % q
        acc = (acc + term) % q
    secrets = vecs[:, 0]
    expected = secrets
    for _ in range(lam - 1):
        expected = np.multiply.outer(expected, secrets) % q
    return int(np.count_nonzero(acc != expected))


def basis_identity(scheme: Msp, rv: RecombinationVector) -> int:
    """Failures of the product identity on all tuples of unit input vectors.

    Both sides are multilinear in the lambda input vectors (s_k, rho_k), so
    agreement on every tuple of unit vectors implies agreement on all q^(l*lambda)
    inputs. Shares are formed from the columns of M and fed through
    :func:`apply_witness`, independently of :func:`witness_image`.
    """
    cols = scheme.matrix.array.T
    failures = 0
    for idx in product(range(scheme.l), repeat=rv.lam):
        expected = int(all(i == 0 for i in idx))
        if apply_witness(scheme, rv, [cols[i] for i in idx]) != expected:
            failures += 1
    return failures


def multiplicativity_witness(scheme: Msp, lam: int, *, check_samples: int = 16,
                             seed: int = 0) -> RecombinationVector | None:
    """A recombination vector for lambda-fold products, or None if the scheme is not lambda-multiplicative."""
    mat, _ = diamond_matrix(scheme, lam)
    z = row_combination(mat, _e1(mat.cols))
    if z is None:
        return None
    rv = RecombinationVector(z, DiamondIndex.for_scheme(scheme, lam), scheme.q)
    _certify(scheme, rv, check_samples, seed)
    return rv


def _certify(scheme: Msp, rv: RecombinationVector, samples: int, seed: int):
    if not is_witness(scheme, rv):
        raise InvalidWitness("recombination vector failed exact verification")
    if samples and sample_identity(scheme, rv, samples, np.random.default_rng(seed)):
        raise InvalidWitness("recombination vector failed sampled verification")


@dataclass(frozen=True)
class StrongCheck:
    lam: int
    verdict: bool
    results: dict  # adversary mask -> RecombinationVector | None, sorted by player tuple

    def failing_sets(self) -> list[tuple[int, ...]]:
        return [players_of(m) for m, rv in self.results.items() if rv is None]


def strong_multiplicativity_check(scheme: Msp, lam: int) -> StrongCheck:
    """Test lambda-multiplicativity of every constriction to the complement of a maximal adversary set.

    Maximal sets suffice: dropping more players only removes rows.
    """
    adversaries = maximal_adversary_structure(scheme)
    mat, labels = diamond_matrix(scheme, lam)
    e1 = _e1(mat.cols)
    results = {}
    for a_mask in adversaries:
        keep = scheme.full_mask & ~a_mask
        rows = [r for r, p in enumerate(labels) if keep >> (p - 1) & 1]
        z = row_combination(mat.select_rows(rows), e1) if rows else None
        if z is None:
            results[a_mask] = None
            continue
        sub = scheme.restrict(keep)
        rv = RecombinationVector(z, DiamondIndex.for_scheme(sub, lam), scheme.q)
        _certify(sub, rv, 4, a_mask)
        results[a_mask] = rv
    return StrongCheck(lam, all(v is not None for v in results.values()), results)


def strong_witness_from_higher(scheme: Msp, z: RecombinationVector, adversary) -> RecombinationVector:
    """Fold a (lambda+1)-witness into a lambda-witness for the constriction to P - A.

    The last factor is fixed to the blinding sharing ``w = M (1, rho)^T`` with
    ``M_A (1, rho)^T = 0``; its entries become constant weights.
    """
    lam = z.lam - 1
    if lam < 2:
        raise InvalidWitness("need a witness for at least 3-fold products")
    if not is_witness(scheme, z):
        raise InvalidWitness(f"input is not a valid {z.lam}-fold witness for this scheme")
    a_mask = mask_of(adversary) & scheme.full_mask
    rho = blinding_vector(scheme, a_mask)
    w = scheme.matrix @ np.concatenate([[1], rho]).astype(np.int64)
    keep = scheme.full_mask & ~a_mask
    sub = scheme.restrict(keep)
    index = DiamondIndex.for_scheme(sub, lam)
    q = scheme.q
    coeffs = np.zeros(len(index), dtype=np.int64)
    for (p, js), c in z.nonzero():
        if not keep >> (p - 1) & 1:
            continue
        weight = int(w[scheme.player_rows(p)[js[-1] - 1]])
        if weight:
            k = index.position(p, js[:-1])
            coeffs[k] = (coeffs[k] + c * weight) % q
    out = RecombinationVector(coeffs, index, q)
    if not is_witness(sub, out):
        raise InvalidWitness("folded witness failed verification on the constriction")
    return out


def vanishing_certificate(scheme: Msp, cover: Iterable[int]) -> np.ndarray:
    """Diamond product of blinding sharings ``M (1, rho_k)^T`` for unqualified sets covering P.

    When the sets cover every player the result is identically zero, which is
    why a lambda-witness cannot exist unless the adversary structure is Q^lambda.
    """
    vecs = []
    for m in cover:
        rho = blinding_vector(scheme, m)
        vecs.append(scheme.matrix @ np.concatenate([[1], rho]).astype(np.int64))
    values, _ = diamond_vectors(scheme.labels, vecs, scheme.q)
    return values
