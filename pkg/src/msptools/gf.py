"""Prime field arithmetic.

A :class:`GF` instance is the shared context for one modulus; its elements
are immutable :class:`FieldElement` values that are always fully reduced.
Matrices elsewhere in the package store plain integers in ``[0, q)`` and use
the helpers at the bottom of this module.
"""

from __future__ import annotations

import operator
from functools import lru_cache

from .errors import BadModulus, DivisionByZero, FieldMismatch, ModulusMismatch

MAX_MODULUS = 2**31


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def inverse_mod(a: int, q: int) -> int:
    """Inverse of ``a`` modulo ``q`` by the extended Euclidean algorithm."""
    a %= q
    if a == 0:
        raise DivisionByZero(f"0 has no inverse modulo {q}")
    r0, r1 = q, a
    t0, t1 = 0, 1
    while r1:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        t0, t1 = t1, t0 - quo * t1
    if r0 != 1:
        raise DivisionByZero(f"{a} is not invertible modulo {q}")
    return t0 % q


class GF:
    """The prime field F_q."""

    __slots__ = ("q",)

    def __new__(cls, q: int):
        return _field(int(q))

    @classmethod
    def _create(cls, q: int) -> "GF":
        if not 2 <= q < MAX_MODULUS:
            raise BadModulus(f"modulus {q} outside supported range [2, 2^31)")
        if not is_prime(q):
            raise BadModulus(f"modulus {q} is not prime")
        obj = object.__new__(cls)
        obj.q = q
        return obj

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ModulusMismatch(f"element of F_{value.field.q} used in F_{self.q}")
            return value
        return FieldElement(int(value) % self.q, self)

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1 % self.q, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.q)]

    def nonzero(self):
        return [FieldElement(v, self) for v in range(1, self.q)]


@lru_cache(maxsize=None)
def _field(q: int) -> GF:
    return GF._create(q)


class FieldElement:
    __slots__ = ("value", "field")

    def __init__(self, value: int, field: GF):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def modulus(self) -> int:
        return self.field.q

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ModulusMismatch(f"F_{self.modulus} vs F_{other.modulus}")
            return other.value
        try:
            return operator.index(other) % self.field.q
        except TypeError:
            return NotImplemented

    def _new(self, v: int) -> "FieldElement":
        return FieldElement(v % self.field.q, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.value * inverse_mod(o, self.field.q))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o * inverse_mod(self.value, self.field.q))

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._new(pow(self.value, e, self.field.q))

    def inverse(self) -> "FieldElement":
        return self._new(inverse_mod(self.value, self.field.q))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        try:
            return self.value == operator.index(other) % self.field.q
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.q))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"F{self.field.q}({self.value})"

    def __str__(self):
        return str(self.value)


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "neg": lambda a, b: -a,
    "inv": lambda a, b: a.inverse(),
}


def fe_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Apply ``op`` (add, sub, mul, div, neg, inv); unary ops ignore ``b``."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    if b is not None and op not in ("neg", "inv"):
        if not isinstance(b, FieldElement) or b.field is not a.field:
            raise ModulusMismatch("operands belong to different fields")
    return fn(a, b)


def as_residue(value, q: int) -> int:
    """Integer representative of ``value`` in [0, q), checking field membership."""
    if isinstance(value, FieldElement):
        if value.field.q != q:
            raise FieldMismatch(f"element of F_{value.field.q} used in F_{q}")
        return value.value
    return int(value) % q
