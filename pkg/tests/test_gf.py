import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from msptools.errors import BadModulus, DivisionByZero, FieldMismatch, ModulusMismatch
from msptools.gf import GF, as_residue, fe_arith, inverse_mod, is_prime


def test_basic_arithmetic_mod_7():
    F = GF(7)
    assert F(3) + F(5) == 1
    assert F(3) - F(5) == 5
    assert F(3) * F(5) == 1
    assert F(3) / F(5) == 2
    assert -F(3) == 4
    assert F(3) ** 6 == 1
    assert F(3) ** -1 == 5


def test_int_coercion_and_numpy_ints():
    F = GF(11)
    assert F(4) + 9 == 2
    assert 9 - F(4) == 5
    assert F(4) * np.int64(3) == 1
    assert 1 / F(2) == 6


def test_elements_are_reduced_and_hashable():
    F = GF(5)
    assert F(-1).value == 4
    assert len({F(1), F(6), F(11)}) == 1
    assert int(F(13)) == 3 and str(F(13)) == "3"


def test_field_is_cached():
    assert GF(13) is GF(13)


@pytest.mark.parametrize("q", [0, 1, 4, 9, 2**31, 2**31 + 11, -7])
def test_bad_modulus(q):
    with pytest.raises(BadModulus):
        GF(q)


def test_largest_supported_prime():
    F = GF(2147483647)
    x = F(2147483646)
    assert x * x == 1


def test_division_by_zero():
    F = GF(7)
    with pytest.raises(DivisionByZero):
        F(3) / F(0)
    with pytest.raises(DivisionByZero):
        F(0).inverse()
    with pytest.raises(ZeroDivisionError):
        inverse_mod(14, 7)


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        GF(5)(1) + GF(7)(1)
    with pytest.raises(FieldMismatch):
        as_residue(GF(5)(1), 7)


def test_fe_arith_dispatch():
    F = GF(13)
    a, b = F(5), F(8)
    assert fe_arith(a, b, "add") == 0
    assert fe_arith(a, b, "sub") == 10
    assert fe_arith(a, b, "mul") == 1
    assert fe_arith(a, b, "div") == 5 * 5 % 13
    assert fe_arith(a, None, "neg") == 8
    assert fe_arith(a, None, "inv") == 8
    with pytest.raises(ValueError):
        fe_arith(a, b, "pow")


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_field_axioms_exhaustive(q):
    F = GF(q)
    els = F.elements()
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a and a * b == b * a
    for a in els:
        assert a + F.zero == a and a * F.one == a and a + (-a) == 0
    for a in F.nonzero():
        assert a * a.inverse() == 1


def test_inverses_for_all_small_primes():
    for q in range(2, 258):
        if not is_prime(q):
            continue
        for a in range(1, q):
            assert a * inverse_mod(a, q) % q == 1


@given(st.integers(min_value=1, max_value=2**31 - 2))
def test_inverse_large_prime(a):
    q = 2147483647
    assert a * inverse_mod(a, q) % q == 1
