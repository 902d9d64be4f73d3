"""Special tuples, their equivalence, and canonical decompositions.

A special tuple ``(V, Y, y; K)`` is reduced modulo its equivalence gauges to
the data ``(y_1, y~, e~, Y~)``: the first coordinate of ``y``, its middle
block, the middle block of ``Y``'s last column, and the middle block of
``Y``.  The gauge ``L_{v,e}`` and the shift of ``y`` along ``e`` never touch
this data, and the remaining moves act on it by

* rotation ``P~``: all of it is rotated;
* boost ``d~``: ``y~ += y_1 d~`` and ``Y~ += L_{e~, d~}``;
* translation ``p~``: ``e~ += y_1 p~`` and ``Y~ += L_{p~, y~}``.

Every label the classifier emits is an invariant of this action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .galilean import last_basis_vector, stabilizer_isometry
from .linalg import (
    InnerProductSpace,
    Mat,
    SpaceKind,
    ViolationError,
    congruence_diagonalize,
    is_orthogonal,
    is_skew_adjoint,
    lift,
    orthogonal_complement,
    restrict,
    signature_of,
    span_basis,
    witt_map,
)
from .summands import AffineScope, Decomposition, Kind, Summand, UnsupportedType


@dataclass(frozen=True)
class SpecialTuple:
    space: InnerProductSpace
    Y: Mat
    y: Mat

    def __post_init__(self) -> None:
        if self.space.kind is not SpaceKind.FULL:
            raise ViolationError("special tuples live on the full space")
        if self.y.shape != (self.space.dim, 1):
            raise ViolationError(f"y has shape {self.y.shape}, expected ({self.space.dim}, 1)")
        if not is_skew_adjoint(self.space, self.Y):
            raise ViolationError("Y is not skew-adjoint")

    @property
    def n(self) -> int:
        return self.space.n


@dataclass(frozen=True)
class EquivalenceWitness:
    P: Mat
    p: Mat
    v: Mat
    v0: Fraction

    @classmethod
    def identity(cls, space: InnerProductSpace) -> EquivalenceWitness:
        zero = Mat.zeros(space.dim, 1)
        return cls(Mat.identity(space.dim), zero, zero, Fraction(0))

    def check(self, space: InnerProductSpace) -> None:
        e = last_basis_vector(space)
        for name, vec in (("p", self.p), ("v", self.v)):
            if vec.shape != (space.dim, 1):
                raise ViolationError(f"witness {name} has shape {vec.shape}")
        if not is_orthogonal(space, self.P) or self.P @ e != e:
            raise ViolationError("witness P must be an isometry fixing the last basis vector")
        if self.p[0, 0] != 0:
            raise ViolationError("witness p must have zero first coordinate")


@dataclass(frozen=True)
class TypePair:
    """An operator ``Z`` skew-adjoint for a nondegenerate Gram matrix."""

    space: InnerProductSpace
    Z: Mat

    def __post_init__(self) -> None:
        if not is_skew_adjoint(self.space, self.Z):
            raise ViolationError("Z is not skew-adjoint for the pair's Gram matrix")

    @classmethod
    def of(cls, gram: Mat, Z: Mat) -> TypePair:
        return cls(InnerProductSpace(gram.rows, gram, SpaceKind.TILDE), Z)


@dataclass(frozen=True)
class NonaffineSplit:
    """Invariants of a nonaffine tuple and the canonical complement pair."""

    epsilon: int
    alpha_sq: Fraction
    coupling: Fraction
    drift_sq: Fraction
    complement: TypePair

    def cotype(self) -> Summand:
        moduli: dict[str, Fraction | int] = {"epsilon": self.epsilon, "alpha_sq": self.alpha_sq}
        if self.coupling:
            moduli["coupling"] = self.coupling
        if self.drift_sq:
            moduli["drift_sq"] = self.drift_sq
        return Summand.make(Kind.COTYPE_NONAFFINE_EPS, 1, int(self.epsilon < 0), moduli)


@dataclass(frozen=True)
class AffineInvariants:
    boost_norm: Fraction
    boost_vanishes: bool
    canonical_rank: int
    charpoly: tuple[Fraction, ...]


# equivalence


def apply_equivalence(t: SpecialTuple, w: EquivalenceWitness) -> SpecialTuple:
    space = t.space
    w.check(space)
    e = last_basis_vector(space)
    P = w.P
    Y = P @ (t.Y + lift(space, w.p, t.y)) @ space.gram @ P.T @ space.gram - lift(space, w.v, e)
    return SpecialTuple(space, Y, P @ t.y + e * w.v0)


def parameter(t: SpecialTuple) -> Fraction:
    """The first coordinate of y, an invariant of equivalence."""
    return t.y[0, 0]


def isotropy(t: SpecialTuple) -> Fraction:
    """``y^T K y``; invariant once the parameter vanishes."""
    return t.space.inner(t.y, t.y)


def _middle(t: SpecialTuple) -> tuple[Mat, Mat, Mat]:
    n = t.n
    y_tilde = t.y.block(1, n + 1, 0, 1)
    e_tilde = t.Y.block(1, n + 1, n + 1, n + 2)
    Y_tilde = t.Y.block(1, n + 1, 1, n + 1)
    return y_tilde, e_tilde, Y_tilde


def standardize_case1(t: SpecialTuple) -> tuple[SpecialTuple, EquivalenceWitness]:
    """Move y to ``y_1 e_1`` with a boost and a shift along the last basis vector."""
    y1 = parameter(t)
    if y1 == 0:
        raise ViolationError("standardize_case1 needs a nonzero parameter")
    space = t.space
    n = t.n
    gt = space.gram_tilde
    y_tilde = t.y.block(1, n + 1, 0, 1)
    boost = y_tilde * (-1 / y1)
    P = stabilizer_isometry(space, Mat.identity(n), boost)
    # After the boost the last coordinate is y_last + |y~|^2 / (2 y_1); shift it away.
    v0 = -(boost.T @ gt @ boost).scalar() * y1 / 2 - t.y[n + 1, 0]
    zero = Mat.zeros(space.dim, 1)
    witness = EquivalenceWitness(P, zero, zero, v0)
    return apply_equivalence(t, witness), witness


def associated_pair(t: SpecialTuple) -> TypePair:
    y1 = parameter(t)
    if y1 == 0 or t.y != Mat.unit(t.space.dim, 0) * y1:
        raise ViolationError("associated_pair needs a standardized tuple with y = y_1 e_1, y_1 != 0")
    n = t.n
    return TypePair(InnerProductSpace(n, t.space.gram_tilde, SpaceKind.TILDE), t.Y.block(1, n + 1, 1, n + 1))


def standardize_affine(t: SpecialTuple) -> SpecialTuple:
    """Conjugate by an isometry that sends the isotropic y to the last basis vector.

    The isometry comes from :func:`witt_map` and need not fix the last basis
    vector, so the result is a change of coordinates rather than an
    equivalence unless y already lies on the last axis.
    """
    if parameter(t) != 0 or t.y.is_zero() or isotropy(t) != 0:
        raise ViolationError("standardize_affine needs y != 0 isotropic with zero parameter")
    P = witt_map(t.space, t.y)
    K = t.space.gram
    return SpecialTuple(t.space, P @ t.Y @ K @ P.T @ K, last_basis_vector(t.space))


# helpers on subspaces of the tilde space


def _projector(gram: Mat, basis: Sequence[Mat]) -> Mat:
    """Orthogonal projection onto a nondegenerate subspace."""
    dim = gram.rows
    if not basis:
        return Mat.zeros(dim, dim)
    b = Mat.from_columns(list(basis))
    return b @ (b.T @ gram @ b).inverse() @ b.T @ gram


def _compress(gram: Mat, op: Mat, basis: Sequence[Mat]) -> TypePair:
    """The pair (basis Gram, compression of op) on a nondegenerate subspace."""
    proj = _projector(gram, basis)
    g, m = restrict(gram, proj @ op @ proj, basis)
    return TypePair.of(g, m)


def classify_nonaffine(t: SpecialTuple) -> NonaffineSplit:
    if parameter(t) != 0 or t.y.is_zero() or isotropy(t) == 0:
        raise ViolationError("classify_nonaffine needs a non-isotropic y with zero parameter")
    n = t.n
    gt = t.space.gram_tilde
    y_tilde, e_tilde, Y_tilde = _middle(t)
    norm = (y_tilde.T @ gt @ y_tilde).scalar()
    if norm == 0:
        raise AffineScope("isotropic nonzero middle part of y: affine cotype outside the catalog")
    coupling = (e_tilde.T @ gt @ y_tilde).scalar()
    drift = e_tilde - y_tilde * (coupling / norm)
    drift_sq = (drift.T @ gt @ drift).scalar()
    if not drift.is_zero() and drift_sq == 0:
        raise UnsupportedType("isotropic drift vector: nonaffine cotype outside the catalog")
    within = orthogonal_complement(gt, [y_tilde])
    core = [drift] if not drift.is_zero() else []
    rest = orthogonal_complement(gt, core, within=within) if core else within
    rest = span_basis(rest, n)
    w_basis = core + rest
    # Complement coordinates: e_1, then w_basis, then e.
    k = len(w_basis)
    proj = _projector(gt, rest)
    if w_basis:
        gw, mw = restrict(gt, proj @ Y_tilde @ proj, w_basis)
    else:
        gw, mw = Mat.zeros(0, 0), Mat.zeros(0, 0)
    gram = Mat.zeros(k + 2, k + 2).with_entry(0, k + 1, 1).with_entry(k + 1, 0, 1).with_block(1, 1, gw)
    Z = Mat.zeros(k + 2, k + 2).with_block(1, 1, mw)
    if core:
        comp = InnerProductSpace(k + 2, gram, SpaceKind.TILDE)
        drift_coords = Mat.unit(k + 2, 1)
        Z = Z + lift(comp, drift_coords, Mat.unit(k + 2, 0))
    epsilon = 1 if norm > 0 else -1
    return NonaffineSplit(epsilon, abs(norm), coupling, drift_sq, TypePair.of(gram, Z))


def _affine_core(t: SpecialTuple) -> tuple[Summand, TypePair]:
    gt = t.space.gram_tilde
    n = t.n
    _, e_tilde, Y_tilde = _middle(t)
    if e_tilde.is_zero():
        return Summand.make(Kind.COTYPE_AFFINE_NABLA2, 2, 1), TypePair.of(gt, Y_tilde)
    mu = (e_tilde.T @ gt @ e_tilde).scalar()
    if mu == 0:
        raise AffineScope("isotropic nonzero boost vector: affine cotype outside the catalog")
    if mu < 0:
        raise AffineScope("negative boost norm: affine cotype of index 2, outside the catalog")
    rest = span_basis(orthogonal_complement(gt, [e_tilde]), n)
    if rest:
        pair = _compress(gt, Y_tilde, rest)
    else:
        pair = TypePair.of(Mat.zeros(0, 0), Mat.zeros(0, 0))
    return Summand.make(Kind.COTYPE_AFFINE_NABLA3, 3, 1, {"mu": mu}), pair


def affine_invariants(t: SpecialTuple) -> AffineInvariants:
    """Invariants of a standardized affine tuple under the affine gauge."""
    e = last_basis_vector(t.space)
    if t.y != e:
        raise ViolationError("affine_invariants needs y equal to the last basis vector")
    gt = t.space.gram_tilde
    _, e_tilde, _ = _middle(t)
    mu = (e_tilde.T @ gt @ e_tilde).scalar()
    cotype, pair = _affine_core(t)
    core_rank = 0 if cotype.kind is Kind.COTYPE_AFFINE_NABLA2 else 2
    return AffineInvariants(
        boost_norm=mu,
        boost_vanishes=e_tilde.is_zero(),
        canonical_rank=core_rank + pair.Z.rank(),
        charpoly=tuple(pair.Z.charpoly()),
    )


# type decomposition


def _rational_roots(coeffs: Sequence[Fraction]) -> list[tuple[Fraction, int]]:
    """Roots with multiplicity of a rational polynomial that splits over the rationals."""
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], t, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        if f.degree() != 1:
            raise UnsupportedType(f"eigenvalue squares are not rational (irreducible factor {f.as_expr()})")
        a, b = f.all_coeffs()
        root = -sympy.Rational(b) / sympy.Rational(a)
        out.append((Fraction(int(root.p), int(root.q)), int(mult)))
    return sorted(out)


def _anisotropic_vector(form, basis: Sequence[Mat]) -> Mat | None:
    """A vector of the span with ``form(x, x) != 0``, or None if the form vanishes there."""
    for b in basis:
        if form(b, b) != 0:
            return b
    for a, b in combinations(basis, 2):
        if form(a + b, a + b) != 0:
            return a + b
    return None


@dataclass(frozen=True)
class _Block:
    summand: Summand
    basis: tuple[Mat, ...]


def decompose_type(tp: TypePair) -> list[Summand]:
    """Split a pair into catalog indecomposables; raise UnsupportedType otherwise."""
    gram, Z = tp.space.gram, tp.Z
    dim = gram.rows
    if dim == 0:
        return []
    if gram.det() == 0:
        raise ViolationError("type pairs need a nondegenerate Gram matrix")

    def g(u: Mat, v: Mat) -> Fraction:
        return (u.T @ gram @ v).scalar()

    blocks: list[_Block] = []
    S = Z @ Z
    ident = Mat.identity(dim)
    for s, mult in _rational_roots(S.charpoly()):
        if s == 0:
            continue
        space = span_basis((S - ident * s).nullspace(), dim)
        if len(space) != mult:
            raise UnsupportedType(f"eigenvalue square {s} is not semisimple (a Jordan block outside the catalog)")
        while space:
            x = _anisotropic_vector(g, space)
            assert x is not None  # the eigenspace is nondegenerate
            zx = Z @ x
            if s < 0:
                if g(x, x) < 0:
                    raise UnsupportedType(f"negative definite elliptic plane with beta^2 = {-s} (index 2)")
                summand = Summand.make(Kind.TYPE_DELTA0_IP, 2, 0, {"beta_sq": -s})
            else:
                summand = Summand.make(Kind.TYPE_DELTA0_RP, 2, 1, {"zeta_sq": s})
            blocks.append(_Block(summand, (x, zx)))
            space = orthogonal_complement(gram, [x, zx], within=space)

    nil = span_basis(Z.power(dim).nullspace(), dim)
    while nil and any(not (S @ b).is_zero() for b in nil):
        if any(not (Z @ S @ b).is_zero() for b in nil):
            raise UnsupportedType("nilpotent part has height above 3 (Jordan block outside the catalog)")
        x = _anisotropic_vector(lambda u, v: g(u, S @ v), nil)
        if x is None:
            raise UnsupportedType("paired height-3 nilpotent blocks (outside the catalog)")
        if g(x, S @ x) > 0:
            raise UnsupportedType("height-3 nilpotent block of index 2 (outside the catalog)")
        basis = (x, Z @ x, S @ x)
        blocks.append(_Block(Summand.make(Kind.TYPE_DELTA2_MINUS_0, 3, 1), basis))
        nil = orthogonal_complement(gram, list(basis), within=nil)
    if any(not (Z @ b).is_zero() for b in nil):
        raise UnsupportedType("nilpotent block of height 2 (outside the catalog)")
    if nil:
        b = Mat.from_columns(nil)
        diag, change = congruence_diagonalize(b.T @ gram @ b)
        for j, d in enumerate(diag):
            blocks.append(_Block(Summand.make(Kind.TYPE_DELTA0_SIGN0, 1, int(d < 0)), (b @ change.col(j),)))

    _verify_blocks(gram, Z, blocks)
    return sorted((blk.summand for blk in blocks), key=Summand.sort_key)


def _verify_blocks(gram: Mat, Z: Mat, blocks: Sequence[_Block]) -> None:
    if sum(len(b.basis) for b in blocks) != gram.rows:
        raise AssertionError("blocks do not fill the space")
    for blk in blocks:
        sub_gram, _ = restrict(gram, Z, blk.basis)  # raises unless the block is invariant
        sig = signature_of(sub_gram)
        if sig.zeros or sig.negatives != blk.summand.index:
            raise AssertionError(f"block {blk.summand.describe()} has signature {sig}")
    for a, b in combinations(blocks, 2):
        cross = Mat.from_columns(list(a.basis)).T @ gram @ Mat.from_columns(list(b.basis))
        if not cross.is_zero():
            raise AssertionError("blocks are not mutually orthogonal")


# classification


def classify(t: SpecialTuple) -> Decomposition:
    y1 = parameter(t)
    if y1 != 0:
        standard, _ = standardize_case1(t)
        cotype = Summand.make(Kind.COTYPE_NABLA2_Y1, 2, 0, {"y1": y1})
        return Decomposition.of([cotype, *decompose_type(associated_pair(standard))])
    y_tilde, _, _ = _middle(t)
    if y_tilde.is_zero():
        cotype, pair = _affine_core(t)
        return Decomposition.of([cotype, *decompose_type(pair)])
    gt = t.space.gram_tilde
    if (y_tilde.T @ gt @ y_tilde).scalar() == 0:
        raise AffineScope("isotropic nonzero middle part of y: affine cotype outside the catalog")
    split = classify_nonaffine(t)
    return Decomposition.of([split.cotype(), *decompose_type(split.complement)])


def equivalent(t1: SpecialTuple, t2: SpecialTuple) -> bool:
    if t1.space != t2.space:
        raise ViolationError("tuples live on different spaces")
    return classify(t1) == classify(t2)
