"""Monotone span programs used as linear secret sharing schemes.

An :class:`Msp` is a d x l matrix over F_q whose rows are labelled with
player ids; the target vector is always e1. Player subsets are passed around
as bitmasks (bit ``p - 1`` set for player ``p``) or as iterables of ids.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    MspToolsError,
    NonSurjectiveLabels,
    QualifiedSet,
    TooManyPlayers,
    UnqualifiedSet,
)
from .gf import GF, FieldElement, as_residue
from .linalg import Matrix, in_row_span, row_combination, solve

MAX_ENUM_PLAYERS = 24

MINIMAL_ACCESS = "minimal-access"
MAXIMAL_ADVERSARY = "maximal-adversary"


def mask_of(players: Iterable[int] | int) -> int:
    if isinstance(players, (int, np.integer)):
        return int(players)
    m = 0
    for p in players:
        if p < 1:
            raise ValueError(f"player ids start at 1, got {p}")
        m |= 1 << (p - 1)
    return m


def players_of(mask: int) -> tuple[int, ...]:
    out = []
    p = 1
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return tuple(out)


def format_subset(players: Iterable[int] | int) -> str:
    return ",".join(str(p) for p in players_of(mask_of(players)))


class Msp:
    """A monotone span program ``(F_q, M, psi, e1)``.

    ``labels[r]`` is the player owning row ``r``. The scheme's player set is
    ``1..n`` unless ``players`` is given explicitly, which is how constricted
    schemes keep their original ids. Rows of one player keep their relative
    order from ``matrix``; that order defines local row numbers 1..d_i.
    """

    def __init__(self, matrix: Matrix, labels: Sequence[int], n: int | None = None,
                 players: Sequence[int] | None = None):
        labels = tuple(int(x) for x in labels)
        if len(labels) != matrix.rows:
            raise DimensionMismatch(f"{len(labels)} labels for {matrix.rows} rows")
        if matrix.cols < 1:
            raise DimensionMismatch("an MSP needs at least one column")
        if players is None:
            n = n if n is not None else (max(labels) if labels else 0)
            players = tuple(range(1, n + 1))
        else:
            players = tuple(sorted(set(int(p) for p in players)))
        if set(labels) != set(players):
            missing = sorted(set(players) - set(labels))
            extra = sorted(set(labels) - set(players))
            raise NonSurjectiveLabels(
                f"labelling is not surjective onto the player set (missing {missing}, unknown {extra})"
            )
        self.matrix = matrix
        self.labels = labels
        self.players = players
        rows: dict[int, list[int]] = {p: [] for p in players}
        for r, p in enumerate(labels):
            rows[p].append(r)
        self._rows = {p: tuple(v) for p, v in rows.items()}
        self._coeffs: dict[int, np.ndarray | None] = {}
        self._lock = threading.Lock()
        self._structures = None

    @property
    def q(self) -> int:
        return self.matrix.q

    @property
    def field(self) -> GF:
        return GF(self.q)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def d(self) -> int:
        return self.matrix.rows

    @property
    def l(self) -> int:  # noqa: E743
        return self.matrix.cols

    @property
    def full_mask(self) -> int:
        return mask_of(self.players)

    def player_rows(self, p: int) -> tuple[int, ...]:
        return self._rows[p]

    def d_i(self, p: int) -> int:
        return len(self._rows[p])

    def rows_of(self, subset) -> list[int]:
        """Global row indices owned by the subset, in matrix order."""
        m = mask_of(subset)
        return [r for r, p in enumerate(self.labels) if m >> (p - 1) & 1]

    def restrict(self, subset) -> "Msp":
        """The constriction of the scheme to the given players."""
        m = mask_of(subset) & self.full_mask
        rows = self.rows_of(m)
        return Msp(self.matrix.select_rows(rows), [self.labels[r] for r in rows], players=players_of(m))

    def __eq__(self, other):
        return (isinstance(other, Msp) and self.matrix == other.matrix
                and self.labels == other.labels and self.players == other.players)

    def __hash__(self):
        return hash((self.matrix, self.labels, self.players))

    def __repr__(self):
        return f"Msp(q={self.q}, n={self.n}, d={self.d}, l={self.l})"


@dataclass(frozen=True)
class ShareBundle:
    """Full share vector of one sharing; ``values[r]`` belongs to ``labels[r]``."""

    values: tuple[int, ...]
    labels: tuple[int, ...]
    q: int

    @property
    def field(self) -> GF:
        return GF(self.q)

    def vector(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def player(self, p: int) -> list[FieldElement]:
        f = self.field
        return [f(v) for v, lab in zip(self.values, self.labels) if lab == p]

    def per_player(self) -> dict[int, list[FieldElement]]:
        return {p: self.player(p) for p in sorted(set(self.labels))}

    def part(self, subset) -> tuple[int, ...]:
        """Entries held by a subset of players, in row order."""
        m = mask_of(subset)
        return tuple(v for v, lab in zip(self.values, self.labels) if m >> (lab - 1) & 1)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SubsetFamily:
    """An antichain of player subsets stored as sorted bitmasks."""

    members: tuple[int, ...]
    kind: str
    players: tuple[int, ...] = field(default=())

    def __post_init__(self):
        ms = tuple(sorted(set(self.members), key=lambda m: (players_of(m))))
        object.__setattr__(self, "members", ms)
        for a in ms:
            for b in ms:
                if a != b and a & b == a:
                    raise ValueError("subset family is not an antichain")

    @property
    def full_mask(self) -> int:
        return mask_of(self.players)

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [players_of(m) for m in self.members]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, subset):
        return mask_of(subset) in self.members


def _check_secret(scheme: Msp, value) -> int:
    if isinstance(value, FieldElement) and value.modulus != scheme.q:
        raise FieldMismatch(f"element of F_{value.modulus} shared with a scheme over F_{scheme.q}")
    return as_residue(value, scheme.q)


def share(scheme: Msp, secret, randomness: Sequence) -> ShareBundle:
    """Share ``secret`` as ``M (secret, randomness)^T``."""
    rho = [_check_secret(scheme, x) for x in randomness]
    if len(rho) != scheme.l - 1:
        raise DimensionMismatch(f"expected {scheme.l - 1} random elements, got {len(rho)}")
    vec = np.array([_check_secret(scheme, secret)] + rho, dtype=np.int64)
    values = scheme.matrix @ vec
    return ShareBundle(tuple(int(v) for v in values), scheme.labels, scheme.q)


def random_share(scheme: Msp, secret, rng: np.random.Generator) -> ShareBundle:
    rho = rng.integers(0, scheme.q, size=scheme.l - 1)
    return share(scheme, secret, rho.tolist())


def reconstruction_coefficients(scheme: Msp, subset) -> np.ndarray | None:
    """Coefficients on the rows of ``M_A`` recombining to e1, or None if unqualified.

    Results are memoised per subset; the memo is guarded by a lock.
    """
    m = mask_of(subset) & scheme.full_mask
    with scheme._lock:
        if m in scheme._coeffs:
            return scheme._coeffs[m]
    rows = scheme.rows_of(m)
    e1 = np.zeros(scheme.l, dtype=np.int64)
    e1[0] = 1
    z = row_combination(scheme.matrix.select_rows(rows), e1) if rows else None
    with scheme._lock:
        scheme._coeffs.setdefault(m, z)
    return z


def is_qualified(scheme: Msp, subset) -> bool:
    return reconstruction_coefficients(scheme, subset) is not None


def reconstruct(scheme: Msp, subset, shares) -> FieldElement:
    """Recover the secret from the shares of a qualified subset.

    ``shares`` may be a full :class:`ShareBundle`, a mapping from player id to
    that player's share list, or a flat sequence in row order of ``M_A``.
    """
    m = mask_of(subset) & scheme.full_mask
    z = reconstruction_coefficients(scheme, m)
    if z is None:
        raise UnqualifiedSet(f"players {{{format_subset(m)}}} cannot reconstruct")
    if isinstance(shares, ShareBundle):
        flat = list(shares.part(m))
    elif isinstance(shares, Mapping):
        by_player = {p: list(v) for p, v in shares.items()}
        flat = []
        counters = {p: 0 for p in by_player}
        for r in scheme.rows_of(m):
            p = scheme.labels[r]
            flat.append(by_player[p][counters[p]])
            counters[p] += 1
    else:
        flat = list(shares)
    if len(flat) != len(z):
        raise DimensionMismatch(f"expected {len(z)} share entries, got {len(flat)}")
    vals = np.array([_check_secret(scheme, x) for x in flat], dtype=np.int64)
    return scheme.field(int((z * vals % scheme.q).sum() % scheme.q))


def _structures(scheme: Msp) -> tuple[list[int], list[int]]:
    if scheme._structures is not None:
        return scheme._structures
    if scheme.n > MAX_ENUM_PLAYERS:
        raise TooManyPlayers(f"{scheme.n} players exceeds the enumeration cap of {MAX_ENUM_PLAYERS}")
    n = scheme.n
    ids = scheme.players
    e1 = np.zeros(scheme.l, dtype=np.int64)
    e1[0] = 1
    # Masks here are over positions 0..n-1 of scheme.players, translated at the end.
    qual = bytearray(1 << n)
    minimal = []
    for mask in range(1, 1 << n):
        bits = mask
        inherited = False
        while bits:
            low = bits & -bits
            if qual[mask ^ low]:
                inherited = True
                break
            bits ^= low
        if inherited:
            qual[mask] = 1
            continue
        subset = [ids[i] for i in range(n) if mask >> i & 1]
        rows = scheme.rows_of(subset)
        if in_row_span(scheme.matrix.select_rows(rows), e1):
            qual[mask] = 1
            minimal.append(mask_of(subset))
    full = (1 << n) - 1
    maximal = []
    for mask in range(1 << n):
        if qual[mask]:
            continue
        if all(qual[mask | (1 << i)] for i in range(n) if not mask >> i & 1):
            maximal.append(mask_of(ids[i] for i in range(n) if mask >> i & 1))
    if not qual[full]:
        raise MspToolsError("the full player set is not qualified; the MSP computes the zero function")
    scheme._structures = (minimal, maximal)
    return scheme._structures


def minimal_access_structure(scheme: Msp) -> SubsetFamily:
    minimal, _ = _structures(scheme)
    return SubsetFamily(tuple(minimal), MINIMAL_ACCESS, scheme.players)


def maximal_adversary_structure(scheme: Msp) -> SubsetFamily:
    """Maximal unqualified sets (the adversary structure is the complement of AS)."""
    _, maximal = _structures(scheme)
    return SubsetFamily(tuple(maximal), MAXIMAL_ADVERSARY, scheme.players)


def is_q_lambda(family: SubsetFamily, lam: int) -> bool:
    """True iff no ``lam`` members of the adversary family (repetition allowed) cover all players."""
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    full = family.full_mask
    for combo in combinations_with_replacement(family.members, lam):
        acc = 0
        for m in combo:
            acc |= m
        if acc == full:
            return False
    return True


def covering_tuple(family: SubsetFamily, lam: int) -> tuple[int, ...] | None:
    """First ``lam`` members covering the player set, if any."""
    full = family.full_mask
    for combo in combinations_with_replacement(family.members, lam):
        acc = 0
        for m in combo:
            acc |= m
        if acc == full:
            return combo
    return None


def blinding_vector(scheme: Msp, subset) -> np.ndarray:
    """Randomness rho with ``M_A (1, rho)^T = 0`` for an unqualified subset A."""
    rows = scheme.rows_of(subset)
    sub = scheme.matrix.array[rows, :].reshape(len(rows), scheme.l)
    rho = solve(Matrix._wrap(sub[:, 1:], scheme.q), (-sub[:, 0]) % scheme.q)
    if rho is None:
        raise QualifiedSet(f"players {{{format_subset(subset)}}} are qualified; no blinding vector exists")
    return rho
