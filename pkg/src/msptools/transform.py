"""Lifting a strongly lambda-multiplicative scheme to a (lambda+1)-multiplicative one.

The lifted matrix is

    [ M    | 0              ]
    [ v0 0 | v1 ... vk      ]

where the bottom block has one row per lambda-fold diamond entry, ``v0``
solves ``M_diamond^T v = e1`` and ``v1..vk`` span ``ker M_diamond^T``. Top rows
keep their labels; a bottom row is owned by the player of its diamond entry.
Each player's local rows are therefore its d_i original rows followed by its
d_i^lambda new rows in diamond order.
"""

from __future__ import annotations

import numpy as np

from .diamond import (
    DiamondIndex,
    RecombinationVector,
    diamond_matrix,
    is_witness,
    sample_identity,
    strong_multiplicativity_check,
    SIZE_CAP,
)
from .errors import InvalidWitness, NotStronglyMultiplicative, SizeCapExceeded
from .linalg import Matrix, kernel_basis, row_combination
from .msp import Msp, format_subset, minimal_access_structure


def _lifted_witness(scheme: Msp, lifted: Msp, lam: int) -> RecombinationVector:
    """The explicit (lambda+1)-witness: weight 1 on (top_j1, ..., top_jlam, bottom row of (j1..jlam))."""
    index = DiamondIndex.for_scheme(lifted, lam + 1)
    base = DiamondIndex.for_scheme(scheme, lam)
    coeffs = np.zeros(len(index), dtype=np.int64)
    offset = {}
    k = 0
    for p in scheme.players:
        offset[p] = k
        k += scheme.d_i(p) ** lam
    for pos, (p, js) in enumerate(base.entries):
        bottom_local = scheme.d_i(p) + (pos - offset[p]) + 1
        coeffs[index.position(p, js + (bottom_local,))] = 1
    return RecombinationVector(coeffs, index, scheme.q)


def lift_with_witness(scheme: Msp, lam: int = 2, *, check: bool = True):
    """Return ``(lifted_scheme, witness)`` with the witness certifying (lambda+1)-multiplicativity."""
    if check:
        report = strong_multiplicativity_check(scheme, lam)
        if not report.verdict:
            bad = "; ".join(format_subset(m) for m, rv in report.results.items() if rv is None)
            raise NotStronglyMultiplicative(
                f"scheme is not strongly {lam}-multiplicative (fails for adversary sets {bad})"
            )
    mat, labels = diamond_matrix(scheme, lam)
    rows = mat.rows
    e1 = np.zeros(mat.cols, dtype=np.int64)
    e1[0] = 1
    v0 = row_combination(mat, e1)
    if v0 is None:
        raise NotStronglyMultiplicative(f"e1 is not in the row span of the {lam}-fold diamond matrix")
    kernel = kernel_basis(mat.transpose())
    k = len(kernel)
    d, l = scheme.d, scheme.l
    if (d + rows) * (l + k) > SIZE_CAP:
        raise SizeCapExceeded(f"lifted matrix would be {d + rows} x {l + k}")
    out = np.zeros((d + rows, l + k), dtype=np.int64)
    out[:d, :l] = scheme.matrix.array
    out[d:, 0] = v0
    for c, v in enumerate(kernel):
        out[d:, l + c] = v
    lifted = Msp(Matrix._wrap(out, scheme.q), list(scheme.labels) + list(labels), players=scheme.players)

    witness = _lifted_witness(scheme, lifted, lam)
    if not is_witness(lifted, witness):
        raise InvalidWitness("lifted witness failed exact verification")
    if sample_identity(lifted, witness, 8, np.random.default_rng(lam)):
        raise InvalidWitness("lifted witness failed sampled verification")
    if check and lifted.n <= 24:
        if minimal_access_structure(lifted).members != minimal_access_structure(scheme).members:
            raise AssertionError("lifting changed the access structure")  # pragma: no cover
    return lifted, witness


def lift_multiplicativity(scheme: Msp, lam: int = 2) -> Msp:
    """A (lambda+1)-multiplicative scheme of size d + sum d_i^lambda for the same access structure."""
    return lift_with_witness(scheme, lam)[0]
