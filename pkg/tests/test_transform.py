import numpy as np
import pytest

from msptools import reed_muller_lsss, shamir_msp
from msptools.diamond import (
    is_witness, multiplicativity_witness, sample_identity, strong_multiplicativity_check,
)
from msptools.errors import NotStronglyMultiplicative
from msptools.msp import minimal_access_structure, random_share, reconstruct
from msptools.transform import lift_multiplicativity, lift_with_witness


def test_shamir_lift_sizes():
    s = shamir_msp(1, 4, 11)  # already 3-multiplicative, still liftable
    lifted, z = lift_with_witness(s, 2)
    assert lifted.d == s.d + sum(s.d_i(p) ** 2 for p in s.players)
    assert minimal_access_structure(lifted).members == minimal_access_structure(s).members
    assert is_witness(lifted, z)
    assert sample_identity(lifted, z, 100, np.random.default_rng(3)) == 0


def test_lift_layout_keeps_original_block():
    s = shamir_msp(1, 4, 7)
    lifted = lift_multiplicativity(s, 2)
    top = lifted.matrix.array[: s.d, : s.l]
    assert np.array_equal(top, s.matrix.array)
    assert not lifted.matrix.array[: s.d, s.l:].any()
    assert lifted.labels[: s.d] == s.labels


def test_lift_fixture_mprime(fixture_mprime):
    lifted, z = lift_with_witness(fixture_mprime, 2)
    assert lifted.d == 120
    assert multiplicativity_witness(fixture_mprime, 3) is None
    assert is_witness(lifted, z)
    assert strong_multiplicativity_check(lifted, 2).verdict


def test_lift_rejects_fixture_m(fixture_m):
    with pytest.raises(NotStronglyMultiplicative) as info:
        lift_multiplicativity(fixture_m, 2)
    assert "1,3" in str(info.value) and "1,4" in str(info.value)


def test_lifted_scheme_shares_same_secret(fixture_mprime, rng):
    lifted = lift_multiplicativity(fixture_mprime, 2)
    for secret in (0, 1):
        b = random_share(lifted, secret, rng)
        for m in minimal_access_structure(lifted):
            assert reconstruct(lifted, m, b) == secret


@pytest.mark.parametrize("scheme", [reed_muller_lsss(1, 3), shamir_msp(1, 3, 5)])
def test_lift_rejects_multiplicative_but_not_strong(scheme):
    assert multiplicativity_witness(scheme, 2) is not None
    with pytest.raises(NotStronglyMultiplicative):
        lift_multiplicativity(scheme, 2)
