"""Synchronous-round simulator for constant-round unbounded fan-in multiplication.

Passive adversary, trusted dealer for the blinding pairs. Every exchange of
messages between parties is one round; local computation is free. The fan-in
protocol is

1. the dealer shares random nonzero ``b_0..b_l`` and their inverses;
2. players compute ``[b_{i-1} x_i b_i^-1]`` (one 3-fold multiplication, or two
   sequential 2-fold ones);
3. all ``d_i = b_{i-1} x_i b_i^-1`` are opened in one batch, ``d = prod d_i``;
4. players compute ``[b_0^-1 b_l]`` and scale it locally by ``d``.

Input sharings are assumed to be in place already and are not counted.
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .diamond import RecombinationVector, multiplicativity_witness
from .errors import EnumerationTooLarge, FieldTooSmall, NoWitness, QualifiedSet, UnknownName
from .gf import FieldElement, inverse_mod
from .msp import (
    Msp,
    ShareBundle,
    blinding_vector,
    format_subset,
    is_qualified,
    mask_of,
    random_share,
    reconstruct,
    reconstruction_coefficients,
)

DEALER = 0
LAMBDA2 = "lambda2"
LAMBDA3 = "lambda3"


@dataclass
class RoundRecord:
    number: int
    label: str
    messages: dict = field(default_factory=dict)  # (sender, receiver) -> entry count
    opened: list = field(default_factory=list)  # (name, value)


@dataclass
class RoundLog:
    rounds: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.rounds)

    def labels(self) -> list[str]:
        return [r.label for r in self.rounds]

    def serialize(self) -> str:
        lines = []
        for r in self.rounds:
            lines.append(f"round {r.number} {r.label}")
            for (src, dst), count in sorted(r.messages.items()):
                lines.append(f"msg {src} {dst} {count}")
            for name, value in r.opened:
                lines.append(f"open {name} {value}")
        return "\n".join(lines) + ("\n" if lines else "")


class ProtocolState:
    """Shared values, mailboxes and the round counter of one simulated run."""

    def __init__(self, scheme: Msp, seed: int = 0):
        self.scheme = scheme
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.values: dict[str, ShareBundle] = {}
        self.round = 0
        self.log = RoundLog()
        self.mailboxes: dict[int, list] = {p: [] for p in scheme.players}
        self.dealer_secrets: dict[str, int] = {}
        self._witnesses: dict[int, RecombinationVector | None] = {}
        self._current: RoundRecord | None = None

    @property
    def n(self) -> int:
        return self.scheme.n

    @property
    def q(self) -> int:
        return self.scheme.q

    def witness(self, lam: int) -> RecombinationVector:
        if lam not in self._witnesses:
            self._witnesses[lam] = multiplicativity_witness(self.scheme, lam)
        z = self._witnesses[lam]
        if z is None:
            raise NoWitness(f"scheme is not {lam}-multiplicative")
        return z

    def bundle(self, name: str) -> ShareBundle:
        try:
            return self.values[name]
        except KeyError:
            raise UnknownName(f"no shared value named {name!r}") from None

    def share_input(self, name: str, value) -> None:
        """Register an input sharing that exists before the protocol starts (uncounted)."""
        self.values[name] = random_share(self.scheme, value, self.rng)

    # -- round mechanics -------------------------------------------------

    @contextmanager
    def _round(self, label: str):
        if self._current is not None:
            raise RuntimeError("rounds cannot be nested")
        self.round += 1
        rec = RoundRecord(self.round, label)
        self._current = rec
        try:
            yield rec
        finally:
            self._current = None
        self.log.rounds.append(rec)
        if any(self.mailboxes.values()):
            raise RuntimeError("undelivered messages left after the round barrier")

    def _send(self, src: int, dst: int, tag, entries: Sequence[int]):
        rec = self._current
        if rec is None:
            raise RuntimeError("messages can only be sent inside a round")
        self.mailboxes[dst].append((src, tag, tuple(entries)))
        if src != dst:
            rec.messages[(src, dst)] = rec.messages.get((src, dst), 0) + len(entries)

    def _drain(self, player: int) -> list:
        box = self.mailboxes[player]
        self.mailboxes[player] = []
        return sorted(box, key=lambda m: m[0])

    def _assemble(self, per_player: dict[int, list[int]]) -> ShareBundle:
        labels = self.scheme.labels
        counters = {p: 0 for p in per_player}
        values = []
        for p in labels:
            values.append(per_player[p][counters[p]])
            counters[p] += 1
        return ShareBundle(tuple(values), labels, self.q)

    def local_shares(self, player: int, name: str) -> list[int]:
        b = self.bundle(name)
        return [v for v, lab in zip(b.values, b.labels) if lab == player]

    def scale(self, name: str, factor, out: str) -> str:
        """Local multiplication by a public constant (no communication)."""
        c = int(factor) % self.q
        b = self.bundle(name)
        self.values[out] = ShareBundle(tuple(v * c % self.q for v in b.values), b.labels, self.q)
        return out


def dealer_preprocess(state: ProtocolState, l: int) -> tuple[list[str], list[str]]:
    """Deal ``[b_0..b_l]`` and ``[b_0^-1..b_l^-1]`` with fresh randomness each; one round."""
    q = state.q
    if q < 3:
        raise FieldTooSmall("blinding needs at least two nonzero field elements (q >= 3)")
    if l < 1:
        raise ValueError("fan-in must be at least 1")
    bs = [int(v) for v in state.rng.integers(1, q, size=l + 1)]
    names = [f"b{i}" for i in range(l + 1)]
    inv_names = [f"binv{i}" for i in range(l + 1)]
    with state._round("dealer"):
        for name, value in list(zip(names, bs)) + list(zip(inv_names, (inverse_mod(b, q) for b in bs))):
            state.dealer_secrets[name] = value
            bundle = random_share(state.scheme, value, state.rng)
            for p in state.scheme.players:
                state._send(DEALER, p, name, bundle.part([p]))
        received: dict[str, dict[int, list[int]]] = {}
        for p in state.scheme.players:
            for _, tag, entries in state._drain(p):
                received.setdefault(tag, {})[p] = list(entries)
        for tag, parts in received.items():
            state.values[tag] = state._assemble(parts)
    return names, inv_names


def _local_product(state: ProtocolState, player: int, names: Sequence[str], z: RecombinationVector) -> int:
    q = state.q
    shares = [state.local_shares(player, nm) for nm in names]
    total = 0
    for (p, js), c in z.nonzero():
        if p != player:
            continue
        term = c
        for sh, j in zip(shares, js):
            term = term * sh[j - 1] % q
        total += term
    return total % q


def multiply_batch(state: ProtocolState, jobs: Sequence[tuple[Sequence[str], str]], label: str = "multiply") -> list[str]:
    """Several independent multiplications in one round; each job is ``(factor names, output name)``."""
    plans = []
    for names, out in jobs:
        for nm in names:
            state.bundle(nm)
        plans.append((list(names), out, state.witness(len(names))))
    players = state.scheme.players
    with state._round(label):
        for names, out, z in plans:
            for i in players:
                t_i = _local_product(state, i, names, z)
                reshare = random_share(state.scheme, t_i, state.rng)
                for j in players:
                    state._send(i, j, out, reshare.part([j]))
        sums: dict[str, dict[int, list[int]]] = {}
        for j in players:
            for _, out, entries in state._drain(j):
                acc = sums.setdefault(out, {}).get(j)
                if acc is None:
                    sums[out][j] = list(entries)
                else:
                    sums[out][j] = [(a + b) % state.q for a, b in zip(acc, entries)]
        for out, parts in sums.items():
            state.values[out] = state._assemble(parts)
    return [out for _, out in jobs]


def multiply_shared(state: ProtocolState, names: Sequence[str], out: str | None = None) -> str:
    """Multiply ``len(names)`` shared values with the matching recombination vector; one round."""
    out = out or "*".join(names)
    return multiply_batch(state, [(names, out)])[0]


def open_shared(state: ProtocolState, names: Iterable[str]) -> list[FieldElement]:
    """Broadcast all shares of the named values and reconstruct them; one round for the batch."""
    names = list(names)
    for nm in names:
        state.bundle(nm)
    scheme = state.scheme
    players = scheme.players
    coeffs = reconstruction_coefficients(scheme, scheme.full_mask)
    with state._round("open") as rec:
        for i in players:
            for nm in names:
                part = state.local_shares(i, nm)
                for j in players:
                    state._send(i, j, nm, part)
        results = {}
        for j in players:
            received: dict[str, dict[int, tuple]] = {}
            for src, nm, entries in state._drain(j):
                received.setdefault(nm, {})[src] = entries
            for nm in names:
                flat = []
                counters = {p: 0 for p in players}
                for r in scheme.rows_of(scheme.full_mask):
                    p = scheme.labels[r]
                    flat.append(received[nm][p][counters[p]])
                    counters[p] += 1
                value = int(np.dot(coeffs, flat) % state.q)
                if results.setdefault(nm, value) != value:
                    raise RuntimeError(f"players disagree on the opening of {nm}")  # pragma: no cover
        for nm in names:
            rec.opened.append((nm, results[nm]))
    f = scheme.field
    return [f(results[nm]) for nm in names]


def fanin_protocol(state: ProtocolState, inputs: Sequence[str], mode: str = LAMBDA3) -> str:
    """Run steps 1-4 on already shared inputs; returns the name of ``[prod x_i]``."""
    if mode not in (LAMBDA2, LAMBDA3):
        raise ValueError(f"mode must be {LAMBDA2!r} or {LAMBDA3!r}")
    l = len(inputs)
    state.witness(2)
    if mode == LAMBDA3:
        state.witness(3)
    b, binv = dealer_preprocess(state, l)
    if mode == LAMBDA3:
        blinded = multiply_batch(
            state, [((b[i - 1], inputs[i - 1], binv[i]), f"c{i}") for i in range(1, l + 1)], "multiply3"
        )
    else:
        left = multiply_batch(state, [((b[i - 1], inputs[i - 1]), f"a{i}") for i in range(1, l + 1)], "multiply2")
        blinded = multiply_batch(state, [((left[i - 1], binv[i]), f"c{i}") for i in range(1, l + 1)], "multiply2")
    opened = open_shared(state, blinded)
    d = 1
    for v in opened:
        d = d * v.value % state.q
    corr = multiply_batch(state, [((binv[0], b[l]), "e")], "multiply2")[0]
    return state.scale(corr, d, "result")


def simulate_fanin_product(scheme: Msp, inputs: Sequence, mode: str = LAMBDA3, seed: int = 0):
    """Share the inputs, run the protocol and return ``(product, RoundLog)``.

    The final value is reconstructed directly from the output sharing; that
    output delivery is not part of the counted protocol.
    """
    if scheme.q < 3:
        raise FieldTooSmall("blinding needs q >= 3")
    state = ProtocolState(scheme, seed)
    names = []
    for i, x in enumerate(inputs, start=1):
        state.share_input(f"x{i}", x)
        names.append(f"x{i}")
    out = fanin_protocol(state, names, mode)
    return reconstruct(scheme, scheme.full_mask, state.bundle(out)), state.log


# -- privacy audit --------------------------------------------------------

SHARE_ONLY = "share-only"
FULL_FANIN = "full-fanin"


@dataclass
class AuditReport:
    private: bool
    protocol: str
    method: str
    detail: str = ""

    def __str__(self):
        verdict = "private" if self.private else "LEAKS"
        return f"{verdict} ({self.protocol}, {self.method}): {self.detail}"


def _view_counter(base: np.ndarray, rand: np.ndarray, s: int, q: int) -> Counter:
    # base: (|rows_A|,) first column; rand: (N, |rows_A|) randomness contribution
    views = (rand + s * base) % q
    return Counter(map(bytes, views.astype(np.int64)))


def _share_only(scheme: Msp, a_mask: int, limit: int, seed, samples: int) -> AuditReport:
    q, l = scheme.q, scheme.l
    rows = scheme.rows_of(a_mask)
    sub = scheme.matrix.array[rows, :].reshape(len(rows), l)
    size = q ** max(l - 1, 0) * q
    if size <= limit:
        rhos = np.array(list(product(range(q), repeat=l - 1)), dtype=np.int64).reshape(-1, l - 1)
        rand = (rhos @ sub[:, 1:].T) % q if l > 1 else np.zeros((1, len(rows)), dtype=np.int64)
        reference = None
        for s in range(q):
            c = _view_counter(sub[:, 0], rand, s, q)
            if reference is None:
                reference = c
            elif c != reference:
                return AuditReport(False, SHARE_ONLY, "exhaustive", f"view distribution changes at secret {s}")
        return AuditReport(True, SHARE_ONLY, "exhaustive",
                           f"{q} secrets x {q ** (l - 1)} randomness values give identical view multisets")
    if seed is None:
        raise EnumerationTooLarge(f"{size} sharings exceed the limit {limit}; pass a seed to sample")
    rng = np.random.default_rng(seed)
    rho_b = blinding_vector(scheme, a_mask)
    for _ in range(samples):
        s, s2 = (int(v) for v in rng.integers(0, q, size=2))
        rho = rng.integers(0, q, size=l - 1)
        shifted = (rho + (s2 - s) * rho_b) % q
        v1 = sub @ np.concatenate([[s], rho]) % q
        v2 = sub @ np.concatenate([[s2], shifted]) % q
        if not np.array_equal(v1, v2):
            return AuditReport(False, SHARE_ONLY, "sampled", "blinding coupling failed")
    return AuditReport(True, SHARE_ONLY, "sampled",
                       f"{samples} sampled couplings rho -> rho + (s'-s) rho_blind preserve the view")


def opened_values(inputs: Sequence[int], blinds: Sequence[int], q: int) -> tuple[int, ...]:
    """The values ``d_i = b_{i-1} x_i b_i^-1`` revealed in step 3."""
    return tuple(blinds[i - 1] * x * inverse_mod(blinds[i], q) % q for i, x in enumerate(inputs, start=1))


def opened_distribution(inputs: Sequence[int], q: int) -> Counter:
    """Multiset of opened vectors over all dealer blinds in (F_q^*)^(l+1)."""
    l = len(inputs)
    return Counter(opened_values(inputs, b, q) for b in product(range(1, q), repeat=l + 1))


def _encoded_openings(xs: Sequence[int], blinds: np.ndarray, inv: np.ndarray, q: int) -> np.ndarray:
    """Sorted base-q codes of the opened vectors for every blind tuple (rows of ``blinds``)."""
    d = blinds[:, :-1] * np.asarray(xs, dtype=np.int64) % q * inv[blinds[:, 1:]] % q
    weights = q ** np.arange(d.shape[1], dtype=np.int64)
    return np.sort(d @ weights)


def _fanin_openings(q: int, fan_in: int, limit: int, seed, samples: int) -> tuple[bool, str, str]:
    size = (q - 1) ** (2 * fan_in + 1)
    if size <= limit:
        inv = np.array([0] + [inverse_mod(v, q) for v in range(1, q)], dtype=np.int64)
        blinds = np.array(list(product(range(1, q), repeat=fan_in + 1)), dtype=np.int64)
        groups: dict[int, np.ndarray] = {}
        for xs in product(range(1, q), repeat=fan_in):
            prodx = 1
            for x in xs:
                prodx = prodx * x % q
            codes = _encoded_openings(xs, blinds, inv, q)
            ref = groups.setdefault(prodx, codes)
            if not np.array_equal(ref, codes):
                return False, "exhaustive", f"opened values distinguish inputs {xs}"
        return True, "exhaustive", (
            f"opened values identical across all {(q - 1) ** fan_in} nonzero input tuples of equal product"
        )
    if seed is None:
        raise EnumerationTooLarge(f"{size} blinding configurations exceed the limit {limit}; pass a seed to sample")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        xs = [int(v) for v in rng.integers(1, q, size=fan_in)]
        ys = [int(v) for v in rng.integers(1, q, size=fan_in - 1)]
        # last factor forces an equal product
        px = 1
        for x in xs:
            px = px * x % q
        py = 1
        for y in ys:
            py = py * y % q
        ys.append(px * inverse_mod(py, q) % q)
        b = [int(v) for v in rng.integers(1, q, size=fan_in + 1)]
        b2 = [b[0]]
        rx = ry = 1
        for i in range(1, fan_in + 1):
            rx, ry = rx * xs[i - 1] % q, ry * ys[i - 1] % q
            b2.append(b[i] * ry * inverse_mod(rx, q) % q)
        if opened_values(xs, b, q) != opened_values(ys, b2, q) or b2[-1] != b[-1]:
            return False, "sampled", "blind coupling failed"
    return True, "sampled", f"{samples} sampled blind couplings preserve the opened values"


def privacy_audit(scheme: Msp, adversary, protocol: str = SHARE_ONLY, *, fan_in: int = 2,
                  seed: int | None = None, limit: int = 10**7, samples: int = 2000) -> AuditReport:
    """Check that an unqualified coalition's view does not depend on the honest secrets.

    ``share-only`` compares the coalition's share multisets for every secret.
    ``full-fanin`` additionally enumerates the dealer blinds and checks that
    the opened ``d_i`` have the same distribution for all nonzero honest input
    tuples with the same product, then replays one seeded run to confirm the
    simulator opens exactly those values.
    """
    a_mask = mask_of(adversary) & scheme.full_mask
    if is_qualified(scheme, a_mask):
        raise QualifiedSet(f"players {{{format_subset(a_mask)}}} are qualified; their view determines the secret")
    shares = _share_only(scheme, a_mask, limit, seed, samples)
    if protocol == SHARE_ONLY:
        return shares
    if protocol != FULL_FANIN:
        raise ValueError(f"unknown protocol {protocol!r}")
    if scheme.q < 3:
        raise FieldTooSmall("the fan-in protocol needs q >= 3")
    ok, method, detail = _fanin_openings(scheme.q, fan_in, limit, seed, samples)
    rng = np.random.default_rng(0 if seed is None else seed)
    xs = [int(v) for v in rng.integers(1, scheme.q, size=fan_in)]
    state = ProtocolState(scheme, 0 if seed is None else seed)
    names = []
    for i, x in enumerate(xs, start=1):
        state.share_input(f"x{i}", x)
        names.append(f"x{i}")
    mode = LAMBDA3 if _has_witness(state, 3) else LAMBDA2
    fanin_protocol(state, names, mode)
    blinds = [state.dealer_secrets[f"b{i}"] for i in range(fan_in + 1)]
    logged = tuple(v for r in state.log.rounds for _, v in r.opened)
    replay = logged == opened_values(xs, blinds, scheme.q)
    private = shares.private and ok and replay
    detail = f"shares: {shares.detail}; openings: {detail}; replay {'matches' if replay else 'differs'}"
    return AuditReport(private, FULL_FANIN, f"{shares.method}+{method}", detail)


def _has_witness(state: ProtocolState, lam: int) -> bool:
    try:
        state.witness(lam)
        return True
    except NoWitness:
        return False
