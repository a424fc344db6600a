"""Concrete schemes: Shamir/Vandermonde, binary Reed-Muller, and two fixed F_2 examples."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .errors import DegenerateParameters, FieldTooSmall
from .gf import GF
from .linalg import Matrix
from .msp import Msp

RM_MAX_VARIABLES = 12


def shamir_msp(t: int, n: int, q: int, points: Sequence[int] | None = None) -> Msp:
    """Degree-t Shamir sharing among n players; row i is (1, x_i, ..., x_i^t)."""
    GF(q)
    if t < 0 or n < 1 or t >= n:
        raise DegenerateParameters(f"need 0 <= t < n, got t={t}, n={n}")
    if q <= n:
        raise FieldTooSmall(f"F_{q} has fewer than n + 1 = {n + 1} elements")
    if points is None:
        points = list(range(1, n + 1))
    pts = [int(x) % q for x in points]
    if len(pts) != n:
        raise DegenerateParameters(f"{len(pts)} evaluation points for {n} players")
    if len(set(pts)) != n or 0 in pts:
        raise DegenerateParameters("evaluation points must be distinct and nonzero")
    rows = [[pow(x, k, q) for k in range(t + 1)] for x in pts]
    return Msp(Matrix(rows, q), range(1, n + 1))


def rm_monomials(r: int, m: int) -> list[tuple[int, ...]]:
    """Monomials of degree <= r in x_1..x_m: constant first, then by degree, then lexicographic."""
    out: list[tuple[int, ...]] = [()]
    for k in range(1, r + 1):
        out.extend(combinations(range(1, m + 1), k))
    return out


def reed_muller_lsss(r: int, m: int) -> Msp:
    """The LSSS from R(r, m) over F_2.

    Player i (1 <= i < 2^m) evaluates at the point whose coordinate x_k is
    bit k-1 of i; the secret is the value at the origin, i.e. the constant
    coefficient.
    """
    if not 0 <= r < m:
        raise DegenerateParameters(f"need 0 <= r < m, got r={r}, m={m}")
    if m > RM_MAX_VARIABLES:
        raise DegenerateParameters(f"m={m} exceeds the supported maximum of {RM_MAX_VARIABLES}")
    monos = rm_monomials(r, m)
    rows = []
    for i in range(1, 2**m):
        bits = [(i >> (k - 1)) & 1 for k in range(1, m + 1)]
        rows.append([int(all(bits[v - 1] for v in mono)) for mono in monos])
    return Msp(Matrix(rows, 2), range(1, 2**m))


# Row blocks of the six-player example over F_2, in player order.
_M_BLOCKS = {
    1: ["10100", "00010", "00001"],
    2: ["00100", "00010", "00001"],
    3: ["11000", "00001"],
    4: ["01000", "00010"],
    5: ["11100", "10010"],
    6: ["01100", "10001"],
}

# The strongly multiplicative expansion: four extra columns; players 1 and 3 pad with zeros.
_M_PRIME_BLOCKS = {
    1: ["101000000", "000100000", "000010000"],
    2: ["001000000", "000100000", "000010000", "000000111", "000001100", "000000001"],
    3: ["110000000", "000010000"],
    4: ["010000000", "000100000", "000000111", "000001000"],
    5: ["111000000", "100100000", "100000101", "000000100"],
    6: ["011000000", "100010000", "100000010", "000000001"],
}


def _from_blocks(blocks: dict[int, list[str]]) -> Msp:
    rows, labels = [], []
    for p in sorted(blocks):
        for bits in blocks[p]:
            rows.append([int(b) for b in bits])
            labels.append(p)
    return Msp(Matrix(rows, 2), labels)


def paper_example(which: str) -> Msp:
    """``"M"``: Q^3 but not strongly multiplicative; ``"M_prime"``: strongly multiplicative, not 3-multiplicative."""
    key = which.replace("'", "_prime").replace("-", "_").lower()
    if key in ("m",):
        return _from_blocks(_M_BLOCKS)
    if key in ("m_prime", "mprime"):
        return _from_blocks(_M_PRIME_BLOCKS)
    raise ValueError(f"unknown fixture {which!r}; expected 'M' or 'M_prime'")
