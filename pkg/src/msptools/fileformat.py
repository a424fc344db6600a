"""Text formats: the canonical MSP file and witness serialization.

MSP grammar, one item per line, ``#`` starts a comment::

    MSP v1
    field <q>
    players <n>
    dims <d> <l>
    labels <p_1> ... <p_d>
    row <a_1> ... <a_l>        (d times)
"""

from __future__ import annotations

import numpy as np

from .diamond import DiamondIndex, RecombinationVector
from .errors import BadModulus, EntryOutOfRange, MspSyntaxError, NonSurjectiveLabels
from .gf import GF
from .linalg import Matrix
from .msp import Msp


def serialize_msp(scheme: Msp) -> str:
    if scheme.players != tuple(range(1, scheme.n + 1)):
        raise ValueError("only schemes on players 1..n can be written; relabel constrictions first")
    lines = [
        "MSP v1",
        f"field {scheme.q}",
        f"players {scheme.n}",
        f"dims {scheme.d} {scheme.l}",
        "labels " + " ".join(str(p) for p in scheme.labels),
    ]
    for row in scheme.matrix.tolist():
        lines.append("row " + " ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno, what):
    try:
        return [int(t, 10) for t in tokens]
    except ValueError:
        raise MspSyntaxError(f"non-integer token in {what}", lineno) from None


def parse_msp(text: str) -> Msp:
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            items.append((lineno, line.split()))
    if not items:
        raise MspSyntaxError("empty input", 1)

    def expect(pos, keyword, count=None):
        if pos >= len(items):
            raise MspSyntaxError(f"missing '{keyword}' line", items[-1][0] + 1)
        lineno, toks = items[pos]
        if toks[0] != keyword:
            raise MspSyntaxError(f"expected '{keyword}', found '{toks[0]}'", lineno)
        if count is not None and len(toks) - 1 != count:
            raise MspSyntaxError(f"'{keyword}' takes {count} value(s), got {len(toks) - 1}", lineno)
        return lineno, toks[1:]

    lineno, toks = items[0]
    if toks != ["MSP", "v1"]:
        raise MspSyntaxError("header must be 'MSP v1'", lineno)
    ln, vals = expect(1, "field", 1)
    (q,) = _ints(vals, ln, "field")
    try:
        GF(q)
    except BadModulus as exc:
        raise BadModulus(f"line {ln}: {exc}") from None
    ln, vals = expect(2, "players", 1)
    (n,) = _ints(vals, ln, "players")
    if n < 1:
        raise MspSyntaxError("player count must be positive", ln)
    ln, vals = expect(3, "dims", 2)
    d, l = _ints(vals, ln, "dims")
    if d < 1 or l < 1:
        raise MspSyntaxError("dimensions must be positive", ln)
    ln, vals = expect(4, "labels", d)
    labels = _ints(vals, ln, "labels")
    for p in labels:
        if not 1 <= p <= n:
            raise MspSyntaxError(f"label {p} outside 1..{n}", ln)
    if set(labels) != set(range(1, n + 1)):
        missing = sorted(set(range(1, n + 1)) - set(labels))
        raise NonSurjectiveLabels(f"players {missing} own no rows", ln)
    rows = []
    for k in range(d):
        ln, vals = expect(5 + k, "row", l)
        row = _ints(vals, ln, "row")
        for v in row:
            if not 0 <= v < q:
                raise EntryOutOfRange(f"entry {v} outside [0, {q})", ln)
        rows.append(row)
    if len(items) > 5 + d:
        raise MspSyntaxError("unexpected content after the last row", items[5 + d][0])
    return Msp(Matrix(rows, q), labels, n=n)


def serialize_witness(rv: RecombinationVector) -> str:
    body = " ".join(str(int(v)) for v in rv.coefficients)
    return f"witness lambda={rv.lam} len={len(rv)}\n{body}\n"


def parse_witness(text: str, scheme: Msp, players=None) -> RecombinationVector:
    """Read a witness for ``scheme`` (or its constriction to ``players``)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MspSyntaxError("empty witness", 1)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "witness" or not head[1].startswith("lambda=") or not head[2].startswith("len="):
        raise MspSyntaxError("header must be 'witness lambda=<L> len=<N>'", 1)
    try:
        lam = int(head[1][len("lambda="):])
        length = int(head[2][len("len="):])
    except ValueError:
        raise MspSyntaxError("bad witness header values", 1) from None
    coeffs = _ints(" ".join(lines[1:]).split(), 2, "witness")
    if len(coeffs) != length:
        raise MspSyntaxError(f"expected {length} coefficients, got {len(coeffs)}", 2)
    sub = scheme if players is None else scheme.restrict(players)
    index = DiamondIndex.for_scheme(sub, lam)
    if len(index) != length:
        raise MspSyntaxError(f"witness length {length} does not match the scheme's index ({len(index)})", 1)
    return RecombinationVector(np.array(coeffs, dtype=np.int64), index, scheme.q)
