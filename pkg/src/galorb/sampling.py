"""Seeded random generators for exact test data.

Isometries come from Cayley transforms ``(I - X)(I + X)^-1`` of random
skew-adjoint ``X``, optionally followed by a reflection so that both
components of the orthogonal group get exercised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .classifier import EquivalenceWitness, SpecialTuple
from .galilean import AlgebraElement, GroupElement, stabilizer_isometry
from .linalg import InnerProductSpace, Mat, ViolationError, reflection


@dataclass(frozen=True)
class Sampler:
    """Draws small rationals; ``bound`` caps numerators and ``denominator`` caps denominators."""

    rng: random.Random
    bound: int = 3
    denominator: int = 2

    @classmethod
    def seeded(cls, seed: int, bound: int = 3, denominator: int = 2) -> Sampler:
        return cls(random.Random(seed), bound, denominator)

    def rational(self) -> Fraction:
        return Fraction(self.rng.randint(-self.bound, self.bound), self.rng.randint(1, self.denominator))

    def nonzero_rational(self) -> Fraction:
        while True:
            q = self.rational()
            if q:
                return q

    def vector(self, dim: int) -> Mat:
        return Mat.column([self.rational() for _ in range(dim)])

    def antisymmetric(self, dim: int) -> Mat:
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(i + 1, dim):
                q = self.rational()
                rows[i][j] = q
                rows[j][i] = -q
        return Mat(rows, cols=dim)

    def skew_for(self, gram: Mat) -> Mat:
        """A random operator skew-adjoint for an involutive Gram matrix."""
        # (G A)^T G + G (G A) = -A + A = 0 when G^2 = I and A^T = -A.
        return gram @ self.antisymmetric(gram.rows)

    def isometry_for(self, gram: Mat, allow_reflection: bool = True) -> Mat:
        n = gram.rows
        ident = Mat.identity(n)
        while True:
            x = self.skew_for(gram)
            try:
                q = (ident - x) @ (ident + x).inverse()
            except ViolationError:
                continue
            break
        if allow_reflection and n and self.rng.random() < 0.5:
            w = self.vector(n)
            norm = (w.T @ gram @ w).scalar()
            if norm:
                q = q @ (ident - (w @ w.T @ gram) * (2 / norm))
        return q

    # elements of the semidirect group and algebra

    def group_element(self, space: InnerProductSpace) -> GroupElement:
        P = self.isometry_for(space.gram, allow_reflection=False)
        if self.rng.random() < 0.5:
            w = self.vector(space.dim)
            if space.inner(w, w):
                P = P @ reflection(space, w)
        return GroupElement(space, P, self.vector(space.dim))

    def stabilizer_isometry(self, space: InnerProductSpace) -> Mat:
        rotation = self.isometry_for(space.gram_tilde)
        return stabilizer_isometry(space, rotation, self.vector(space.n))

    def stabilizer_group_element(self, space: InnerProductSpace) -> GroupElement:
        p = self.vector(space.dim).with_entry(0, 0, 0)
        return GroupElement(space, self.stabilizer_isometry(space), p)

    def algebra_element(self, space: InnerProductSpace) -> AlgebraElement:
        return AlgebraElement(space, self.skew_for(space.gram), self.vector(space.dim))

    def stabilizer_algebra_element(self, space: InnerProductSpace) -> AlgebraElement:
        n = space.n
        gt = space.gram_tilde
        boost = self.vector(n)
        X = Mat.zeros(n + 2, n + 2).with_block(1, 0, boost).with_block(1, 1, self.skew_for(gt))
        X = X.with_block(n + 1, 1, -(boost.T @ gt))
        return AlgebraElement(space, X, self.vector(space.dim).with_entry(0, 0, 0))

    # special tuples and equivalence witnesses

    def witness(self, space: InnerProductSpace) -> EquivalenceWitness:
        p = self.vector(space.dim).with_entry(0, 0, 0)
        return EquivalenceWitness(self.stabilizer_isometry(space), p, self.vector(space.dim), self.rational())

    def special_tuple(self, space: InnerProductSpace, case: str) -> SpecialTuple:
        """A random tuple of the given case: ``case1``, ``zero``, ``affine`` or ``nonaffine``."""
        d, n = space.dim, space.n
        Y = self.skew_for(space.gram)
        if case == "case1":
            y = self.vector(d).with_entry(0, 0, self.nonzero_rational())
        elif case == "zero":
            y = Mat.zeros(d, 1)
        elif case == "affine":
            y = Mat.unit(d, d - 1) * self.nonzero_rational()
        elif case == "nonaffine":
            gt = space.gram_tilde
            while True:
                y_tilde = self.vector(n)
                if (y_tilde.T @ gt @ y_tilde).scalar() != 0:
                    break
            y = Mat.zeros(d, 1).with_block(1, 0, y_tilde).with_entry(d - 1, 0, self.rational())
        else:
            raise ValueError(f"unknown tuple case {case!r}")
        return SpecialTuple(space, Y, y)
