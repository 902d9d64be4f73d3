"""Semidirect-pair coordinates for the orthogonal group of the extended space.

A group element is a pair ``(P, p)`` with ``P`` an isometry of the full space
``(V, K)`` and ``p`` a vector of V; it acts on the extended space through the
block matrix ``[[1, p*], [0, P]]``.  Algebra elements ``(X, x)`` embed as
``[[0, x*], [0, X]]``.  Covectors are never stored: ``p*`` is always
recovered as ``p^T K``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (
    InnerProductSpace,
    Mat,
    SpaceKind,
    ViolationError,
    build_chain,
    is_orthogonal,
    is_skew_adjoint,
    lift,
    star,
)


def _require_full(space: InnerProductSpace) -> None:
    if space.kind is not SpaceKind.FULL:
        raise ViolationError("expected a full space (the middle space of the chain)")


def extended_space(space: InnerProductSpace) -> InnerProductSpace:
    _require_full(space)
    return build_chain(space.n, space.gram_tilde)[2]


def last_basis_vector(space: InnerProductSpace) -> Mat:
    return Mat.unit(space.dim, space.dim - 1)


@dataclass(frozen=True)
class GroupElement:
    space: InnerProductSpace
    P: Mat
    p: Mat

    def __post_init__(self) -> None:
        _require_full(self.space)
        if self.p.shape != (self.space.dim, 1):
            raise ViolationError(f"p has shape {self.p.shape}, expected ({self.space.dim}, 1)")
        if not is_orthogonal(self.space, self.P):
            raise ViolationError("P is not an isometry of the full space")

    @classmethod
    def identity(cls, space: InnerProductSpace) -> GroupElement:
        return cls(space, Mat.identity(space.dim), Mat.zeros(space.dim, 1))


@dataclass(frozen=True)
class AlgebraElement:
    space: InnerProductSpace
    X: Mat
    x: Mat

    def __post_init__(self) -> None:
        _require_full(self.space)
        if self.x.shape != (self.space.dim, 1):
            raise ViolationError(f"x has shape {self.x.shape}, expected ({self.space.dim}, 1)")
        if not is_skew_adjoint(self.space, self.X):
            raise ViolationError("X is not skew-adjoint")

    @classmethod
    def zero(cls, space: InnerProductSpace) -> AlgebraElement:
        return cls(space, Mat.zeros(space.dim, space.dim), Mat.zeros(space.dim, 1))

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        _same_space(self.space, other.space)
        return AlgebraElement(self.space, self.X + other.X, self.x + other.x)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        _same_space(self.space, other.space)
        return AlgebraElement(self.space, self.X - other.X, self.x - other.x)

    def scaled(self, c: Fraction | int) -> AlgebraElement:
        return AlgebraElement(self.space, self.X * c, self.x * c)


@dataclass(frozen=True)
class StabilizerFlag:
    in_group_stabilizer: bool
    in_algebra_stabilizer: bool


def _same_space(a: InnerProductSpace, b: InnerProductSpace) -> None:
    if a != b:
        raise ViolationError("elements live on different spaces")


def _covector_to_vector(space: InnerProductSpace, row: Mat) -> Mat:
    # K is involutive, so K row^T inverts the star map.
    return space.gram @ row.T


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    _same_space(g.space, h.space)
    row = star(g.space, g.p) @ h.P + star(h.space, h.p)
    return GroupElement(g.space, g.P @ h.P, _covector_to_vector(g.space, row))


def _isometry_inverse(space: InnerProductSpace, P: Mat) -> Mat:
    # P^T K P = K with K involutive gives P^-1 = K P^T K.
    return space.gram @ P.T @ space.gram


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.space, _isometry_inverse(g.space, g.P), -(g.P @ g.p))


def embed_group(g: GroupElement) -> Mat:
    d = g.space.dim
    out = Mat.zeros(d + 1, d + 1).with_entry(0, 0, 1).with_block(0, 1, star(g.space, g.p))
    return out.with_block(1, 1, g.P)


def embed_algebra(a: AlgebraElement) -> Mat:
    d = a.space.dim
    return Mat.zeros(d + 1, d + 1).with_block(0, 1, star(a.space, a.x)).with_block(1, 1, a.X)


def algebra_from_matrix(space: InnerProductSpace, m: Mat) -> AlgebraElement:
    """Inverse of :func:`embed_algebra`."""
    d = space.dim
    if m.shape != (d + 1, d + 1) or not m.col(0).is_zero():
        raise ViolationError("matrix is not an embedded algebra element")
    return AlgebraElement(space, m.block(1, d + 1, 1, d + 1), _covector_to_vector(space, m.block(0, 1, 1, d + 1)))


def group_from_matrix(space: InnerProductSpace, m: Mat) -> GroupElement:
    """Inverse of :func:`embed_group`."""
    d = space.dim
    if m.shape != (d + 1, d + 1) or m.col(0) != Mat.unit(d + 1, 0):
        raise ViolationError("matrix is not an embedded group element")
    return GroupElement(space, m.block(1, d + 1, 1, d + 1), _covector_to_vector(space, m.block(0, 1, 1, d + 1)))


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _same_space(a.space, b.space)
    ma, mb = embed_algebra(a), embed_algebra(b)
    return algebra_from_matrix(a.space, ma @ mb - mb @ ma)


def stabilizer_flags(element: GroupElement | AlgebraElement) -> StabilizerFlag:
    e = last_basis_vector(element.space)
    if isinstance(element, GroupElement):
        in_group = element.P @ e == e and element.p[0, 0] == 0
        return StabilizerFlag(in_group_stabilizer=in_group, in_algebra_stabilizer=False)
    in_alg = (element.X @ e).is_zero() and element.x[0, 0] == 0
    return StabilizerFlag(in_group_stabilizer=False, in_algebra_stabilizer=in_alg)


def stabilizer_isometry(space: InnerProductSpace, rotation: Mat, boost: Mat) -> Mat:
    """The isometry fixing the last basis vector with tilde block ``rotation`` and boost ``boost``.

    ``rotation`` must preserve the tilde form; every isometry fixing the last
    basis vector has this shape.
    """
    _require_full(space)
    n = space.n
    gt = space.gram_tilde
    if rotation.shape != (n, n) or boost.shape != (n, 1):
        raise ViolationError("rotation must be n x n and boost an n-vector")
    if rotation.T @ gt @ rotation != gt:
        raise ViolationError("rotation does not preserve the tilde form")
    boost_row = boost.T @ gt
    m = Mat.identity(n + 2).with_block(1, 0, boost).with_block(1, 1, rotation)
    m = m.with_entry(n + 1, 0, -(boost_row @ boost).scalar() / 2)
    return m.with_block(n + 1, 1, -(boost_row @ rotation))


def gal_matrix(g: GroupElement) -> Mat:
    """The affine-form matrix ``[[1, p~*, p_last], [0, P~, d~], [0, 0, 1]]`` of a stabilizer element."""
    if not stabilizer_flags(g).in_group_stabilizer:
        raise ViolationError("element does not fix the last basis vector (or has p_1 != 0)")
    n = g.space.n
    gt = g.space.gram_tilde
    p_tilde = g.p.block(1, n + 1, 0, 1)
    out = Mat.identity(n + 2)
    out = out.with_block(0, 1, p_tilde.T @ gt).with_entry(0, n + 1, g.p[n + 1, 0])
    out = out.with_block(1, 1, g.P.block(1, n + 1, 1, n + 1))
    return out.with_block(1, n + 1, g.P.block(1, n + 1, 0, 1))


def gal_algebra_matrix(a: AlgebraElement) -> Mat:
    """The algebra analogue ``[[0, x~*, x_last], [0, X~, d~], [0, 0, 0]]``."""
    if not stabilizer_flags(a).in_algebra_stabilizer:
        raise ViolationError("element is not in the stabilizer subalgebra")
    n = a.space.n
    gt = a.space.gram_tilde
    x_tilde = a.x.block(1, n + 1, 0, 1)
    out = Mat.zeros(n + 2, n + 2)
    out = out.with_block(0, 1, x_tilde.T @ gt).with_entry(0, n + 1, a.x[n + 1, 0])
    out = out.with_block(1, 1, a.X.block(1, n + 1, 1, n + 1))
    return out.with_block(1, n + 1, a.X.block(1, n + 1, 0, 1))


def ad(g: GroupElement, a: AlgebraElement) -> AlgebraElement:
    _same_space(g.space, a.space)
    P = g.P
    return AlgebraElement(a.space, P @ a.X @ _isometry_inverse(a.space, P), P @ a.x - P @ a.X @ g.p)


def twisted_ad(g: GroupElement, a: AlgebraElement) -> AlgebraElement:
    """The pairing-transpose of ``ad`` by the inverse element."""
    _same_space(g.space, a.space)
    P = g.P
    px = P @ a.x
    return AlgebraElement(a.space, P @ a.X @ _isometry_inverse(a.space, P) + lift(a.space, P @ g.p, px), px)


def pairing(a: AlgebraElement, b: AlgebraElement) -> Fraction:
    _same_space(a.space, b.space)
    return (a.X @ b.X).trace() / 2 + (b.x.T @ a.space.gram @ a.x).scalar()


def _matrix_units_kernel(space: InnerProductSpace, stabilizer: bool) -> list[AlgebraElement]:
    ext = extended_space(space)
    d = ext.dim
    g = ext.gram
    # Unknowns are the d*d entries of M, row-major; each constraint is one linear row.
    constraints = []
    for i in range(d):
        for j in range(d):
            # (M^T G + G M)[i][j] = sum_k M[k][i] G[k][j] + G[i][k] M[k][j]
            row = [Fraction(0)] * (d * d)
            for k in range(d):
                row[k * d + i] += g[k, j]
                row[k * d + j] += g[i, k]
            constraints.append(row)
    for i in range(d):
        row = [Fraction(0)] * (d * d)
        row[i * d] = Fraction(1)
        constraints.append(row)
        if stabilizer:
            row = [Fraction(0)] * (d * d)
            row[i * d + d - 1] = Fraction(1)
            constraints.append(row)
    kernel = Mat(constraints).nullspace()
    out = []
    for vec in kernel:
        flat = vec.flat()
        m = Mat([flat[r * d:(r + 1) * d] for r in range(d)])
        out.append(algebra_from_matrix(space, m))
    return out


def algebra_basis(space: InnerProductSpace) -> list[AlgebraElement]:
    """A basis of the full algebra, found as the kernel of its membership constraints."""
    _require_full(space)
    return _matrix_units_kernel(space, stabilizer=False)


def stabilizer_basis(space: InnerProductSpace) -> list[AlgebraElement]:
    """A basis of the subalgebra annihilating the last basis vector."""
    _require_full(space)
    return _matrix_units_kernel(space, stabilizer=True)


def combine(space: InnerProductSpace, basis: Sequence[AlgebraElement], coeffs: Sequence[Fraction]) -> AlgebraElement:
    out = AlgebraElement.zero(space)
    for b, c in zip(basis, coeffs):
        if c:
            out = out + b.scaled(c)
    return out


def stabilizer_annihilator(space: InnerProductSpace) -> list[AlgebraElement]:
    """Algebra elements pairing to zero with the whole stabilizer subalgebra."""
    full = algebra_basis(space)
    stab = stabilizer_basis(space)
    gram = Mat([[pairing(a, b) for a in full] for b in stab])
    return [combine(space, full, c.flat()) for c in gram.nullspace()]


def gauge_element(space: InnerProductSpace, v: Mat, v0: Fraction | int) -> AlgebraElement:
    """The element ``(L_{v,e}, v0 e)`` with e the last basis vector."""
    e = last_basis_vector(space)
    return AlgebraElement(space, lift(space, v, e), e * v0)


def match_gauge_form(a: AlgebraElement) -> tuple[Mat, Fraction] | None:
    """Recover ``(v, v0)`` with ``a = gauge_element(v, v0)`` and ``v`` free of the last coordinate."""
    space = a.space
    d = space.dim
    e = last_basis_vector(space)
    v0 = a.x[d - 1, 0]
    if a.x != e * v0:
        return None
    v = (a.X @ Mat.unit(d, 0)).with_entry(d - 1, 0, 0)
    if a.X != lift(space, v, e):
        return None
    return v, v0
