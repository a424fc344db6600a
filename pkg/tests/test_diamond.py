import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from msptools import Matrix, Msp, paper_example, reed_muller_lsss, shamir_msp
from msptools.diamond import (
    DiamondIndex, RecombinationVector, SIZE_CAP, apply_witness, basis_identity, diamond_matrix, diamond_size,
    diamond_vectors, exhaustive_identity, is_witness, multiplicativity_witness, sample_identity,
    strong_multiplicativity_check, strong_witness_from_higher, vanishing_certificate, witness_image,
)
from msptools.errors import DimensionMismatch, EnumerationTooLarge, InvalidWitness, SizeCapExceeded
from msptools.msp import covering_tuple, is_q_lambda, maximal_adversary_structure, random_share


def test_diamond_vectors_layout():
    # x = (a, b | c), y = (d, e | f) with players (1, 1, 2)
    a, b, c, d, e, f = 2, 3, 5, 7, 11, 13
    values, index = diamond_vectors([1, 1, 2], [[a, b, c], [d, e, f]])
    assert values.tolist() == [a * d, a * e, b * d, b * e, c * f]
    assert index.entries == ((1, (1, 1)), (1, (1, 2)), (1, (2, 1)), (1, (2, 2)), (2, (1, 1)))


def test_diamond_vectors_errors():
    with pytest.raises(DimensionMismatch):
        diamond_vectors([1, 2], [[1, 2]])
    with pytest.raises(DimensionMismatch):
        diamond_vectors([1, 2], [[1, 2], [1]])


def test_shamir_diamond_rows():
    mat, labels = diamond_matrix(shamir_msp(1, 3, 7), 2)
    assert mat.tolist() == [[1, x, x, x * x % 7] for x in (1, 2, 3)]
    assert labels == (1, 2, 3)


def test_shamir_lagrange_witness():
    # Lagrange weights at 0 for points 1, 2, 3 over F_7: 3, -3, 1
    rv = multiplicativity_witness(shamir_msp(1, 3, 7), 2)
    assert rv.coefficients.tolist() == [3, 4, 1]


def test_fixture_diamond_sizes(fixture_m, fixture_mprime):
    assert diamond_size(fixture_m, 2) == (9 + 9 + 4 + 4 + 4 + 4, 25)
    assert diamond_size(fixture_mprime, 3) == (443, 729)


def test_size_cap():
    s = reed_muller_lsss(3, 7)  # 127 rows, 64 columns
    assert diamond_size(s, 3)[0] * diamond_size(s, 3)[1] > SIZE_CAP
    with pytest.raises(SizeCapExceeded):
        diamond_matrix(s, 3)


def test_witness_image_matches_dense(fixture_mprime):
    rv = multiplicativity_witness(fixture_mprime, 2)
    mat, _ = diamond_matrix(fixture_mprime, 2)
    assert np.array_equal(witness_image(fixture_mprime, rv), mat.left_mul(rv.coefficients))


def test_witness_rejects_wrong_index(fixture_m):
    rv = multiplicativity_witness(shamir_msp(1, 3, 7), 2)
    assert not is_witness(fixture_m, rv)
    bad = RecombinationVector([1, 1, 1], rv.index, 7)
    assert not is_witness(shamir_msp(1, 3, 7), bad)


@given(st.integers(2, 3), st.integers(0, 10**6))
def test_product_identity(lam, seed):
    s = shamir_msp(1, 4, 11) if lam == 3 else shamir_msp(2, 6, 13)
    rv = multiplicativity_witness(s, lam)
    rng = np.random.default_rng(seed)
    secrets = [int(v) for v in rng.integers(0, s.q, size=lam)]
    shares = [random_share(s, x, rng).values for x in secrets]
    assert apply_witness(s, rv, shares) == int(np.prod(secrets)) % s.q


@pytest.mark.parametrize("name", ["M", "M_prime"])
def test_exhaustive_identity_binary_fixtures(name):
    s = paper_example(name)
    rv = multiplicativity_witness(s, 2)
    assert exhaustive_identity(s, rv) == 0


def _replicated_f3():
    # secret = r1 + r2 + r3 with r1 = a, r2 = b; player i holds every r_j with j != i
    rows = [[0, 0, 1], [1, 2, 2], [0, 1, 0], [1, 2, 2], [0, 1, 0], [0, 0, 1]]
    return Msp(Matrix(rows, 3), [1, 1, 2, 2, 3, 3])


def test_exhaustive_identity_ternary():
    s = _replicated_f3()
    rv = multiplicativity_witness(s, 2)
    assert exhaustive_identity(s, rv) == 0
    corrupt = RecombinationVector((rv.coefficients + 1) % 3, rv.index, 3)
    assert exhaustive_identity(s, corrupt) > 0
    with pytest.raises(EnumerationTooLarge):
        exhaustive_identity(shamir_msp(1, 4, 11), multiplicativity_witness(shamir_msp(1, 4, 11), 3), limit=100)


@pytest.mark.parametrize("scheme, lam", [
    (shamir_msp(1, 5, 7), 2), (shamir_msp(1, 5, 7), 3), (shamir_msp(1, 5, 7), 4),
    (reed_muller_lsss(1, 4), 2), (reed_muller_lsss(1, 4), 3),
])
def test_downward_closure(scheme, lam):
    assert multiplicativity_witness(scheme, lam) is not None
    for lower in range(2, lam):
        assert multiplicativity_witness(scheme, lower) is not None


def _brute_force_multiplicative(scheme, lam):
    """Independent oracle over F_2: try every coefficient vector against every share tuple."""
    q = scheme.q
    a = scheme.matrix.tolist()
    rows = {p: [r for r, lab in enumerate(scheme.labels) if lab == p] for p in scheme.players}
    descs = [(p, js) for p in scheme.players for js in itertools.product(rows[p], repeat=lam)]
    inputs = list(itertools.product(range(q), repeat=scheme.l))
    shares = [[sum(x * y for x, y in zip(row, u)) % q for row in a] for u in inputs]
    tuples = list(itertools.product(range(len(inputs)), repeat=lam))
    table = []
    for t in tuples:
        target = 1
        for k in t:
            target = target * inputs[k][0] % q
        terms = []
        for p, js in descs:
            v = 1
            for k, r in zip(t, js):
                v = v * shares[k][r] % q
            terms.append(v)
        table.append((terms, target))
    for z in itertools.product(range(q), repeat=len(descs)):
        if all(sum(c * v for c, v in zip(z, terms)) % q == target for terms, target in table):
            return True
    return False


tiny_binary = st.tuples(
    st.lists(st.integers(1, 2), min_size=2, max_size=3),
    st.integers(1, 2),
    st.data(),
)


@given(tiny_binary)
def test_witness_existence_matches_brute_force(params):
    counts, extra, data = params
    l = 1 + extra
    labels = [p for p, c in enumerate(counts, start=1) for _ in range(c)]
    rows = [data.draw(st.lists(st.integers(0, 1), min_size=l, max_size=l)) for _ in labels]
    s = Msp(Matrix(rows, 2), labels)
    assert (multiplicativity_witness(s, 2) is not None) == _brute_force_multiplicative(s, 2)


def test_strong_check_fixture_m(fixture_m):
    report = strong_multiplicativity_check(fixture_m, 2)
    assert not report.verdict
    assert report.failing_sets() == [(1, 3), (1, 4)]


def test_strong_check_fixture_mprime(fixture_mprime):
    report = strong_multiplicativity_check(fixture_mprime, 2)
    assert report.verdict and len(report.results) == 6
    for mask, rv in report.results.items():
        sub = fixture_mprime.restrict(fixture_mprime.full_mask & ~mask)
        assert is_witness(sub, rv)


@pytest.mark.parametrize("scheme", [shamir_msp(1, 4, 11), shamir_msp(1, 5, 7), reed_muller_lsss(1, 4)])
def test_higher_multiplicativity_gives_strong(scheme):
    z = multiplicativity_witness(scheme, 3)
    rng = np.random.default_rng(7)
    for a in maximal_adversary_structure(scheme):
        rv = strong_witness_from_higher(scheme, z, a)
        sub = scheme.restrict(scheme.full_mask & ~a)
        assert is_witness(sub, rv)
        assert sample_identity(sub, rv, 50, rng) == 0
    assert strong_multiplicativity_check(scheme, 2).verdict


def test_strong_from_higher_rejects_bad_input():
    s = shamir_msp(1, 4, 11)
    z2 = multiplicativity_witness(s, 2)
    with pytest.raises(InvalidWitness):
        strong_witness_from_higher(s, z2, [1])
    z3 = multiplicativity_witness(s, 3)
    broken = RecombinationVector((z3.coefficients + 1) % 11, z3.index, 11)
    with pytest.raises(InvalidWitness):
        strong_witness_from_higher(s, broken, [1])


@pytest.mark.parametrize("scheme, lam", [
    (paper_example("M"), 4), (shamir_msp(1, 3, 7), 3), (shamir_msp(2, 6, 7), 3), (reed_muller_lsss(1, 3), 3),
])
def test_vanishing_certificate(scheme, lam):
    adv = maximal_adversary_structure(scheme)
    assert not is_q_lambda(adv, lam)
    cover = covering_tuple(adv, lam)
    assert not vanishing_certificate(scheme, cover).any()
    assert multiplicativity_witness(scheme, lam) is None


def test_diamond_index_positions():
    idx = DiamondIndex.from_row_counts({2: 2, 5: 1}, 2)
    assert len(idx) == 5
    assert idx.position(5, (1, 1)) == 4
    assert idx.players() == (2, 5)


def test_basis_identity_agrees_with_exact_check(fixture_mprime):
    rv = multiplicativity_witness(fixture_mprime, 2)
    assert basis_identity(fixture_mprime, rv) == 0
    shifted = RecombinationVector((rv.coefficients + 1) % 2, rv.index, 2)
    assert (basis_identity(fixture_mprime, shifted) == 0) == is_witness(fixture_mprime, shifted)
    assert basis_identity(fixture_mprime, shifted) > 0
