from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import col, full_space, sampler, seeds
from galorb.classifier import (
    EquivalenceWitness,
    SpecialTuple,
    TypePair,
    affine_invariants,
    apply_equivalence,
    associated_pair,
    classify,
    classify_nonaffine,
    decompose_type,
    equivalent,
    isotropy,
    parameter,
    standardize_affine,
    standardize_case1,
)
from galorb.galilean import last_basis_vector, stabilizer_isometry
from galorb.linalg import InnerProductSpace, Mat, SpaceKind, ViolationError, is_orthogonal, lift
from galorb.summands import AffineScope, Decomposition, Kind, Summand, UnsupportedType

K = Kind


def S(kind, dim, index, **moduli):
    return Summand.make(kind, dim, index, moduli)


def D(*summands):
    return Decomposition.of(summands)


PLUS, MINUS = S(K.TYPE_DELTA0_SIGN0, 1, 0), S(K.TYPE_DELTA0_SIGN0, 1, 1)
AFFINE2 = S(K.COTYPE_AFFINE_NABLA2, 2, 1)


def tup(space, Y=None, y=None):
    d = space.dim
    return SpecialTuple(space, Y if Y is not None else Mat.zeros(d, d), y if y is not None else Mat.zeros(d, 1))


def middle(space, block):
    return Mat.zeros(space.dim, space.dim).with_block(1, 1, block)


ROTATION = Mat([[0, -1, 0], [1, 0, 0], [0, 0, 0]])


# tuples and witnesses


def test_tuple_rejects_non_skew(space1):
    with pytest.raises(ViolationError):
        SpecialTuple(space1, Mat.identity(3), Mat.zeros(3, 1))


def test_witness_checks(space1):
    bad = EquivalenceWitness(Mat.identity(3), Mat.unit(3, 0), Mat.zeros(3, 1), Fraction(0))
    with pytest.raises(ViolationError):
        apply_equivalence(tup(space1), bad)
    swap = Mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    moving = EquivalenceWitness(swap, Mat.zeros(3, 1), Mat.zeros(3, 1), Fraction(0))
    with pytest.raises(ViolationError):
        apply_equivalence(tup(space1), moving)


def test_identity_witness(space3):
    t = sampler(1).special_tuple(space3, "case1")
    assert apply_equivalence(t, EquivalenceWitness.identity(space3)) == t


def test_shift_only_witness(space3):
    t = sampler(2).special_tuple(space3, "nonaffine")
    w = EquivalenceWitness(Mat.identity(5), Mat.zeros(5, 1), Mat.zeros(5, 1), Fraction(7, 2))
    out = apply_equivalence(t, w)
    assert out.Y == t.Y and out.y == t.y + last_basis_vector(space3) * Fraction(7, 2)


@given(seeds, st.sampled_from(["case1", "affine", "nonaffine"]))
def test_composed_witnesses_stay_equivalent(seed, case):
    space = full_space(3)
    s = sampler(seed)
    t = s.special_tuple(space, case)
    twice = apply_equivalence(apply_equivalence(t, s.witness(space)), s.witness(space))
    assert equivalent(t, twice)


# invariants


def test_parameter_examples(space1):
    assert parameter(tup(space1, y=col(2, 1, 0))) == 2
    assert parameter(tup(space1)) == 0


@given(seeds, st.sampled_from([1, 3]), st.sampled_from(["case1", "zero", "affine", "nonaffine"]))
def test_parameter_and_isotropy_are_invariant(seed, n, case):
    space = full_space(n)
    s = sampler(seed)
    t = s.special_tuple(space, case)
    t2 = apply_equivalence(t, s.witness(space))
    assert parameter(t2) == parameter(t)
    if parameter(t) == 0:
        assert isotropy(t2) == isotropy(t)


# case 1


def test_standardize_case1_example(space1):
    t = tup(space1, y=col(1, 1, 0))
    out, w = standardize_case1(t)
    assert out.y == Mat.unit(3, 0) and out.Y.is_zero()
    assert w.P.block(1, 2, 0, 1) == col(-1)
    assert apply_equivalence(t, w) == out


def test_standardize_case1_shift_value(space3):
    # boost -y~/y1, then the shift cancels the last coordinate.
    t = tup(space3, y=col(2, 1, 0, -2, 3))
    out, w = standardize_case1(t)
    boost_sq = Fraction(1, 4) + 1
    assert w.v0 == -boost_sq * 2 / 2 - 3
    assert out.y == Mat.unit(5, 0) * 2


def test_standardize_case1_already_standard(space3):
    t = tup(space3, middle(space3, ROTATION), col(3, 0, 0, 0, 0))
    out, w = standardize_case1(t)
    assert out == t and w.P == Mat.identity(5) and w.v0 == 0


def test_standardize_case1_needs_parameter(space1):
    with pytest.raises(ViolationError):
        standardize_case1(tup(space1, y=col(0, 1, 0)))


@given(seeds)
def test_standardize_case1_round_trip(seed):
    space = full_space(3)
    t = sampler(seed).special_tuple(space, "case1")
    out, w = standardize_case1(t)
    assert out.y == Mat.unit(5, 0) * parameter(t)
    assert apply_equivalence(t, w) == out


def test_associated_pair(space3):
    assert associated_pair(tup(space3, y=col(1, 0, 0, 0, 0))).Z.is_zero()
    pair = associated_pair(tup(space3, middle(space3, ROTATION), col(2, 0, 0, 0, 0)))
    assert pair.Z == ROTATION
    with pytest.raises(ViolationError):
        associated_pair(tup(space3, y=col(1, 1, 0, 0, 0)))


# nonaffine


def test_classify_nonaffine_example(space1):
    split = classify_nonaffine(tup(space1, y=col(0, 1, 0)))
    assert (split.epsilon, split.alpha_sq) == (1, 1)
    assert split.complement.space.gram == Mat([[0, 1], [1, 0]])
    assert split.complement.Z.is_zero()
    assert classify_nonaffine(tup(space1, y=col(0, 3, 0))).alpha_sq == 9


def test_classify_nonaffine_negative():
    space = full_space("diag(1,-1)")
    split = classify_nonaffine(tup(space, y=col(0, 0, 2, 5)))
    assert (split.epsilon, split.alpha_sq) == (-1, 4)


def test_classify_nonaffine_precondition(space1):
    with pytest.raises(ViolationError):
        classify_nonaffine(tup(space1, y=col(0, 0, 1)))


# affine


def test_standardize_affine_examples(space1):
    e3 = Mat.unit(3, 2)
    assert standardize_affine(tup(space1, y=e3)) == tup(space1, y=e3)
    assert standardize_affine(tup(space1, y=Mat.unit(3, 0) * 0 + col(0, 0, 1))) == tup(space1, y=e3)
    with pytest.raises(ViolationError):
        standardize_affine(tup(space1, y=col(0, 1, 0)))


def test_affine_invariants_examples(space1):
    assert affine_invariants(tup(space1, y=Mat.unit(3, 2))).canonical_rank == 0
    boost = lift(space1, col(0, 1, 0), Mat.unit(3, 0))
    inv = affine_invariants(tup(space1, boost, Mat.unit(3, 2)))
    assert inv.canonical_rank == 2 and inv.boost_norm == 1


@given(seeds, st.sampled_from([1, 3]))
def test_affine_invariants_are_gauge_invariant(seed, n):
    space = full_space(n)
    s = sampler(seed)
    t = s.special_tuple(space, "affine")
    t = SpecialTuple(space, t.Y, last_basis_vector(space))
    w = s.witness(space)
    w = EquivalenceWitness(w.P, w.p, w.v, Fraction(0))
    assert affine_invariants(apply_equivalence(t, w)) == affine_invariants(t)


# type decomposition


def pair(gram, Z):
    return TypePair.of(Mat(gram) if not isinstance(gram, Mat) else gram, Mat(Z) if not isinstance(Z, Mat) else Z)


def test_decompose_zero_operator():
    assert decompose_type(pair(Mat.identity(3), Mat.zeros(3, 3))) == [PLUS] * 3


def test_decompose_rotation():
    assert decompose_type(pair(Mat.identity(2), [[0, -1], [1, 0]])) == [S(K.TYPE_DELTA0_IP, 2, 0, beta_sq=1)]


def test_decompose_hyperbolic_rotation():
    got = decompose_type(pair([[0, 1], [1, 0]], [[1, 0], [0, -1]]))
    assert got == [S(K.TYPE_DELTA0_RP, 2, 1, zeta_sq=1)]


def test_decompose_nilpotent_block():
    gram = Mat.diag([1, 1, -1])
    space = InnerProductSpace(3, gram, SpaceKind.TILDE)
    Z = lift(space, col(1, 0, 1), col(0, 1, 0))
    assert decompose_type(TypePair(space, Z)) == [S(K.TYPE_DELTA2_MINUS_0, 3, 1)]


def test_decompose_mixed_block_sum():
    gram = Mat.block_diag([Mat.identity(2), Mat([[0, 1], [1, 0]]), Mat.diag([-1])])
    Z = Mat.block_diag([Mat([[0, -2], [2, 0]]), Mat([[3, 0], [0, -3]]), Mat.zeros(1, 1)])
    got = decompose_type(pair(gram, Z))
    assert sorted(got, key=Summand.sort_key) == sorted(
        [S(K.TYPE_DELTA0_IP, 2, 0, beta_sq=4), S(K.TYPE_DELTA0_RP, 2, 1, zeta_sq=9), MINUS], key=Summand.sort_key
    )


@given(seeds)
def test_decompose_is_conjugation_invariant(seed):
    s = sampler(seed)
    gram = Mat.block_diag([Mat.identity(2), Mat([[0, 1], [1, 0]]), Mat.identity(1)])
    Z = Mat.block_diag([Mat([[0, -1], [1, 0]]), Mat([[2, 0], [0, -2]]), Mat.zeros(1, 1)])
    Q = s.isometry_for(gram)
    assert decompose_type(pair(gram, Q @ Z @ Q.inverse())) == decompose_type(pair(gram, Z))


@pytest.mark.parametrize("gram,Z", [
    # eigenvalue squares are roots of t^2 + 3t + 1
    (Mat.identity(4), Mat([[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]])),
    # a rotation plane on a negative definite form
    (Mat.diag([-1, -1]), Mat([[0, -1], [1, 0]])),
    # square-zero operator on a split form: paired height-2 blocks
    (Mat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]),
     Mat([[0, 0, 0, 1], [0, 0, -1, 0], [0, 0, 0, 0], [0, 0, 0, 0]])),
])
def test_decompose_outside_catalog(gram, Z):
    with pytest.raises(UnsupportedType):
        decompose_type(pair(gram, Z))


# classification


def test_classify_nonaffine_tuple(space1):
    want = D(S(K.COTYPE_NONAFFINE_EPS, 1, 0, epsilon=1, alpha_sq=1), PLUS, MINUS)
    assert classify(tup(space1, y=col(0, 1, 0))) == want


def test_classify_affine_tuple(space1):
    assert classify(tup(space1, y=col(0, 0, 1))) == D(AFFINE2, PLUS)


def test_zero_y_is_affine(space1):
    # A shift along the last basis vector turns y = 0 into y = e.
    t0, t1 = tup(space1), tup(space1, y=col(0, 0, 1))
    w = EquivalenceWitness(Mat.identity(3), Mat.zeros(3, 1), Mat.zeros(3, 1), Fraction(1))
    assert apply_equivalence(t0, w) == t1
    assert classify(t0) == classify(t1) == D(AFFINE2, PLUS)


def test_classify_case1(space3):
    t = tup(space3, middle(space3, ROTATION), col(2, 0, 0, 0, 0))
    want = D(S(K.COTYPE_NABLA2_Y1, 2, 0, y1=2), S(K.TYPE_DELTA0_IP, 2, 0, beta_sq=1), PLUS)
    assert classify(t) == want


def test_classify_sums_dimensions(space3):
    for seed in range(10):
        for case in ("case1", "zero", "affine", "nonaffine"):
            t = sampler(seed).special_tuple(space3, case)
            try:
                assert classify(t).total_dim == 5
            except (UnsupportedType, AffineScope):
                pass


def test_classify_scope_errors():
    space = full_space("diag(1,-1)")
    negative_boost = lift(space, col(0, 0, 1, 0), Mat.unit(4, 0))
    with pytest.raises(AffineScope):
        classify(tup(space, negative_boost, Mat.unit(4, 3)))
    with pytest.raises(AffineScope):
        classify(tup(space, y=col(0, 1, 1, 0)))


def test_equivalent_examples(space3):
    a = tup(space3, y=col(1, 0, 0, 0, 0))
    b = tup(space3, y=col(2, 0, 0, 0, 0))
    assert not equivalent(a, b)
    assert not equivalent(tup(space3, y=Mat.unit(5, 4)), tup(space3, y=Mat.unit(5, 1)))


CASES = ["case1", "zero", "affine", "nonaffine"]


@given(seeds, st.sampled_from(["I1", "I3", "diag(1,-1)"]), st.sampled_from(CASES))
def test_classify_is_invariant(seed, name, case):
    space = full_space(name)
    s = sampler(seed)
    try:
        t = s.special_tuple(space, case)
    except ViolationError:
        return
    t2 = apply_equivalence(t, s.witness(space))
    try:
        before = classify(t)
    except (UnsupportedType, AffineScope) as exc:
        with pytest.raises(type(exc)):
            classify(t2)
        return
    assert classify(t2) == before


# decompositions


def test_decomposition_order_is_canonical():
    parts = [PLUS, S(K.TYPE_DELTA0_IP, 2, 0, beta_sq=4), MINUS, S(K.COTYPE_NABLA2_Y1, 2, 0, y1=-1)]
    assert D(*parts) == D(*reversed(parts))
    assert D(*parts).cotype.kind is K.COTYPE_NABLA2_Y1
    assert [s.kind for s in D(*parts).types] == [K.TYPE_DELTA0_IP, K.TYPE_DELTA0_SIGN0, K.TYPE_DELTA0_SIGN0]


@pytest.mark.parametrize("build", [
    lambda: D(PLUS, MINUS),
    lambda: D(AFFINE2, S(K.COTYPE_NABLA2_Y1, 2, 0, y1=1)),
    lambda: S(K.COTYPE_NABLA2_Y1, 2, 0, y1=0),
    lambda: S(K.COTYPE_NONAFFINE_EPS, 1, 0, epsilon=-1, alpha_sq=1),
    lambda: S(K.TYPE_DELTA0_IP, 2, 0, beta_sq=-1),
    lambda: S(K.TYPE_DELTA0_IP, 2, 1, beta_sq=1),
    lambda: S(K.TYPE_DELTA0_RP, 2, 1),
])
def test_invalid_summands(build):
    with pytest.raises(ValueError):
        build()


def test_isometry_sanity_for_witnesses(space3):
    s = sampler(9)
    w = s.witness(space3)
    assert is_orthogonal(space3, w.P)
    assert w.P == stabilizer_isometry(space3, w.P.block(1, 4, 1, 4), w.P.block(1, 4, 0, 1))
