import hashlib

import numpy as np
import pytest

from msptools import paper_example, reed_muller_lsss, shamir_msp
from msptools.constructions import rm_monomials
from msptools.diamond import (
    DiamondIndex, RecombinationVector, is_witness, multiplicativity_witness, sample_identity,
)
from msptools.errors import BadModulus, DegenerateParameters, FieldTooSmall
from msptools.fileformat import serialize_msp
from msptools.msp import minimal_access_structure

# sha256 of the canonical files, frozen after checking the blocks by hand
FIXTURE_DIGESTS = {
    "M": "8f87be514c439a21d12bc21edd6dc23bae3926498942d938bbbf30debffce939",
    "M_prime": "d2711cf15d27872373c76addf1c7e4bfff1723ff653451992af46f68c3f74dac",
}


def test_shamir_rows():
    s = shamir_msp(2, 4, 7, points=[1, 2, 3, 5])
    assert s.matrix.tolist() == [[1, 1, 1], [1, 2, 4], [1, 3, 2], [1, 5, 4]]


@pytest.mark.parametrize("args, exc", [
    ((3, 3, 7), DegenerateParameters),
    ((1, 7, 7), FieldTooSmall),
    ((1, 3, 8), BadModulus),
    ((1, 3, 7, [1, 1, 2]), DegenerateParameters),
    ((1, 3, 7, [0, 1, 2]), DegenerateParameters),
])
def test_shamir_errors(args, exc):
    with pytest.raises(exc):
        shamir_msp(*args)


@pytest.mark.parametrize("t, n", [(1, 3), (1, 4), (2, 4), (2, 5), (2, 6), (3, 6)])
@pytest.mark.parametrize("lam", [2, 3])
def test_shamir_threshold_grid(t, n, lam):
    assert (multiplicativity_witness(shamir_msp(t, n, 11), lam) is not None) == (n >= lam * t + 1)


def test_rm_monomials_order():
    assert rm_monomials(2, 3) == [(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]


def test_rm_shape_and_points():
    s = reed_muller_lsss(1, 3)
    assert (s.d, s.l, s.n) == (7, 4, 7)
    # player 5 = 0b101 evaluates x1 = 1, x2 = 0, x3 = 1
    assert s.matrix.tolist()[4] == [1, 1, 0, 1]


def test_rm_errors():
    with pytest.raises(DegenerateParameters):
        reed_muller_lsss(3, 3)
    with pytest.raises(DegenerateParameters):
        reed_muller_lsss(1, 13)


@pytest.mark.parametrize("r, m, lam", [(1, 3, 2), (1, 4, 3), (1, 5, 3), (2, 5, 2)])
def test_rm_all_ones_witness(r, m, lam):
    s = reed_muller_lsss(r, m)
    rv = RecombinationVector(np.ones(s.d, dtype=np.int64),
                             DiamondIndex.for_scheme(s, lam), 2)
    assert is_witness(s, rv)


def test_rm_1_3_not_3_multiplicative_but_identity_sampled():
    s = reed_muller_lsss(1, 3)
    assert multiplicativity_witness(s, 3) is None
    rv = multiplicativity_witness(s, 2)
    assert sample_identity(s, rv, 200, np.random.default_rng(1)) == 0


def test_rm_1_3_minimal_sets():
    # no pair can recover f(0) for affine f; the lines {x, y, x ^ y} can
    s = reed_muller_lsss(1, 3)
    minimal = minimal_access_structure(s).as_tuples()
    lines = {tuple(sorted((x, y, x ^ y))) for x in range(1, 8) for y in range(1, 8) if x != y}
    assert len(lines) == 7
    assert lines <= set(minimal)
    assert all(len(m) >= 3 for m in minimal)


@pytest.mark.parametrize("name, blocks", [("M", (3, 3, 2, 2, 2, 2)), ("M_prime", (3, 6, 2, 4, 4, 4))])
def test_fixture_block_sizes(name, blocks):
    s = paper_example(name)
    assert tuple(s.d_i(p) for p in s.players) == blocks
    assert s.q == 2


def test_fixture_aliases():
    assert paper_example("M'") == paper_example("Mprime") == paper_example("M_prime")
    with pytest.raises(ValueError):
        paper_example("N")


@pytest.mark.parametrize("name", ["M", "M_prime"])
def test_fixture_checksum(name):
    digest = hashlib.sha256(serialize_msp(paper_example(name)).encode()).hexdigest()
    assert digest == FIXTURE_DIGESTS[name]
