"""Exact rational linear algebra and the inner-product-space primitives.

Everything here works over :class:`fractions.Fraction`; no floating point is
ever involved.  Matrices are small and dense, so a plain tuple-of-tuples
representation is both adequate and immutable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


class ViolationError(ValueError):
    """An input breaks a structural precondition (shape, symmetry, ...)."""


def to_fraction(value: Number | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a reduced fraction."""
    if not isinstance(text, str):
        raise ViolationError(f"expected a rational string, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ViolationError(f"invalid rational {text!r}") from None
    if q == 0:
        raise ViolationError(f"invalid rational {text!r} (zero denominator)")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _integral(entries: Sequence[Fraction]) -> tuple[int, tuple[int, ...]]:
    """Common denominator and the integer numerators over it."""
    den = math.lcm(*[q.denominator for q in entries]) if entries else 1
    if den == 1:
        return 1, tuple([q.numerator for q in entries])
    return den, tuple([q.numerator * (den // q.denominator) for q in entries])


_ZERO = Fraction(0)


def _ratio(num: int, den: int) -> Fraction:
    if num == 0:
        return _ZERO
    return Fraction(num, den) if den != 1 else Fraction(num)


class Mat:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("_rows", "_cols", "_e")

    def __init__(self, entries: Iterable[Iterable[Number]], cols: int | None = None):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ViolationError("ragged matrix rows")
            if cols is not None and cols != width:
                raise ViolationError(f"expected {cols} columns, got {width}")
        else:
            width = cols or 0
        self._rows = len(rows)
        self._cols = width
        self._e = rows

    # construction helpers

    @classmethod
    def _raw(cls, rows: tuple[tuple[Fraction, ...], ...], cols: int) -> Mat:
        m = object.__new__(cls)
        m._rows = len(rows)
        m._cols = cols
        m._e = rows
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Mat:
        zero = Fraction(0)
        return cls._raw(tuple((zero,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> Mat:
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n)

    @classmethod
    def diag(cls, values: Sequence[Number]) -> Mat:
        vals = [to_fraction(v) for v in values]
        n = len(vals)
        zero = Fraction(0)
        return cls._raw(tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)), n)

    @classmethod
    def column(cls, values: Sequence[Number]) -> Mat:
        return cls._raw(tuple((to_fraction(v),) for v in values), 1)

    @classmethod
    def unit(cls, n: int, i: int) -> Mat:
        """The i-th standard basis column (0-based) of length n."""
        return cls.column([1 if k == i else 0 for k in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Mat], rows: int | None = None) -> Mat:
        if not columns:
            return cls.zeros(rows or 0, 0)
        height = columns[0].rows
        for c in columns:
            if c.shape != (height, 1):
                raise ViolationError("from_columns expects equal-length column vectors")
        return cls._raw(tuple(tuple(c._e[i][0] for c in columns) for i in range(height)), len(columns))

    @classmethod
    def block_diag(cls, blocks: Sequence[Mat]) -> Mat:
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[Fraction(0)] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r + i][c + j] = b._e[i][j]
            r += b.rows
            c += b.cols
        return cls._raw(tuple(tuple(row) for row in out), m)

    # basic accessors

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self._e[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def entries(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._e

    def flat(self) -> list[Fraction]:
        """Entries of a column (or row) vector as a flat list."""
        if self._cols == 1:
            return [r[0] for r in self._e]
        if self._rows == 1:
            return list(self._e[0])
        raise ViolationError(f"flat() needs a vector, got shape {self.shape}")

    def col(self, j: int) -> Mat:
        return Mat._raw(tuple((r[j],) for r in self._e), 1)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> Mat:
        return Mat._raw(tuple(r[c0:c1] for r in self._e[r0:r1]), c1 - c0)

    def with_entry(self, i: int, j: int, value: Number) -> Mat:
        rows = [list(r) for r in self._e]
        rows[i][j] = to_fraction(value)
        return Mat._raw(tuple(tuple(r) for r in rows), self._cols)

    def with_block(self, r0: int, c0: int, b: Mat) -> Mat:
        rows = [list(r) for r in self._e]
        for i in range(b.rows):
            rows[r0 + i][c0:c0 + b.cols] = b._e[i]
        return Mat._raw(tuple(tuple(r) for r in rows), self._cols)

    @property
    def T(self) -> Mat:
        if not self._rows:
            return Mat.zeros(self._cols, 0)
        return Mat._raw(tuple(zip(*self._e)), self._rows)

    # arithmetic

    def _check_same(self, other: Mat) -> None:
        if not isinstance(other, Mat):
            raise TypeError("matrix operand expected")
        if self.shape != other.shape:
            raise ViolationError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Mat) -> Mat:
        self._check_same(other)
        return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self._cols)

    def __sub__(self, other: Mat) -> Mat:
        self._check_same(other)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self._cols)

    def __neg__(self) -> Mat:
        return Mat._raw(tuple(tuple(-a for a in r) for r in self._e), self._cols)

    def __mul__(self, scalar: Number) -> Mat:
        if isinstance(scalar, Mat):
            raise TypeError("use @ for matrix products")
        s = to_fraction(scalar)
        return Mat._raw(tuple(tuple(a * s for a in r) for r in self._e), self._cols)

    __rmul__ = __mul__

    def __matmul__(self, other: Mat) -> Mat:
        if not isinstance(other, Mat):
            return NotImplemented
        if self._cols != other._rows:
            raise ViolationError(f"cannot multiply {self.shape} by {other.shape}")
        # Scale rows and columns to integers so each entry is normalized once.
        cols = [_integral(c) for c in zip(*other._e)] if other._rows else [(1, ())] * other._cols
        out = []
        for r in self._e:
            dr, ir = _integral(r)
            out.append(tuple(_ratio(sum([a * b for a, b in zip(ir, ic)]), dr * dc) for dc, ic in cols))
        return Mat._raw(tuple(out), other._cols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.shape, self._e))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._e)
        return f"Mat({self._rows}x{self._cols}: [{body}])"

    # predicates and scalar functions

    def is_square(self) -> bool:
        return self._rows == self._cols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._e for x in r)

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ViolationError("trace of a non-square matrix")
        return sum((self._e[i][i] for i in range(self._rows)), Fraction(0))

    def scalar(self) -> Fraction:
        """The single entry of a 1x1 matrix."""
        if self.shape != (1, 1):
            raise ViolationError(f"expected a 1x1 matrix, got {self.shape}")
        return self._e[0][0]

    def rank(self) -> int:
        return len(_rref(self.tolist())[1])

    def nullspace(self) -> list[Mat]:
        """A basis of the right kernel, one column per free variable."""
        return [Mat.column(v) for v in _nullspace_rows(self.tolist(), self._cols)]

    def det(self) -> Fraction:
        if not self.is_square():
            raise ViolationError("determinant of a non-square matrix")
        a = self.tolist()
        n = self._rows
        det = Fraction(1)
        for c in range(n):
            pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != c:
                a[c], a[pivot] = a[pivot], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    for k in range(c, n):
                        a[r][k] -= f * a[c][k]
        return det

    def inverse(self) -> Mat:
        if not self.is_square():
            raise ViolationError("inverse of a non-square matrix")
        n = self._rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._e)]
        red, pivots = _rref(aug)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ViolationError("matrix is singular")
        return Mat._raw(tuple(tuple(r[n:]) for r in red[:n]), n)

    def solve(self, rhs: Mat) -> Mat | None:
        """Some solution X of self @ X = rhs, or None when inconsistent."""
        if rhs.rows != self._rows:
            raise ViolationError("right-hand side has the wrong height")
        n = self._cols
        aug = [list(r) + list(s) for r, s in zip(self._e, rhs._e)]
        red, pivots = _rref(aug)
        if any(p >= n for p in pivots):
            return None
        out = [[Fraction(0)] * rhs.cols for _ in range(n)]
        for row, p in zip(red, pivots):
            out[p] = row[n:]
        return Mat._raw(tuple(tuple(r) for r in out), rhs.cols)

    def power(self, k: int) -> Mat:
        out = Mat.identity(self._rows)
        for _ in range(k):
            out = out @ self
        return out

    def charpoly(self) -> list[Fraction]:
        """Coefficients of det(t I - A), highest degree first (monic)."""
        if not self.is_square():
            raise ViolationError("characteristic polynomial of a non-square matrix")
        # Faddeev-LeVerrier; exact over the rationals.
        n = self._rows
        coeffs = [Fraction(1)]
        m = Mat.zeros(n, n)
        ident = Mat.identity(n)
        for k in range(1, n + 1):
            m = self @ m + ident * coeffs[-1]
            coeffs.append(-(self @ m).trace() / k)
        return coeffs


def _rref(a: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a (copied) list matrix and its pivot columns."""
    a = [list(r) for r in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def _nullspace_rows(a: list[list[Fraction]], cols: int) -> list[list[Fraction]]:
    if not a:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    red, pivots = _rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def span_basis(vectors: Sequence[Mat], dim: int) -> list[Mat]:
    """An echelon basis of the span of the given columns."""
    if not vectors:
        return []
    red, pivots = _rref([v.flat() for v in vectors])
    return [Mat.column(red[i]) for i in range(len(pivots))]


def intersect_kernel(basis: Sequence[Mat], constraint: Mat) -> list[Mat]:
    """Vectors in span(basis) annihilated by ``constraint`` (a matrix of row functionals)."""
    if not basis:
        return []
    b = Mat.from_columns(list(basis))
    coeffs = (constraint @ b).nullspace()
    return [b @ c for c in coeffs]


def hstack(blocks: Sequence[Mat]) -> Mat:
    rows = blocks[0].rows
    return Mat._raw(tuple(sum((b.entries()[i] for b in blocks), ()) for i in range(rows)), sum(b.cols for b in blocks))


def vstack(blocks: Sequence[Mat]) -> Mat:
    cols = blocks[0].cols
    return Mat._raw(sum((b.entries() for b in blocks), ()), cols)


# Inner product spaces


class SpaceKind(enum.Enum):
    TILDE = "TILDE"
    FULL = "FULL"
    EXTENDED = "EXTENDED"


@dataclass(frozen=True)
class SignatureReport:
    positives: int
    negatives: int
    zeros: int

    @property
    def dim(self) -> int:
        return self.positives + self.negatives + self.zeros


@dataclass(frozen=True)
class InnerProductSpace:
    """A coordinate space with a symmetric Gram matrix.

    TILDE spaces carry an arbitrary invertible Gram matrix, FULL spaces carry
    the bordered involutive matrix built from it, and EXTENDED spaces add one
    more leading coordinate spanning the kernel of the form.
    """

    dim: int
    gram: Mat
    kind: SpaceKind

    def __post_init__(self) -> None:
        g = self.gram
        if g.shape != (self.dim, self.dim):
            raise ViolationError(f"Gram matrix has shape {g.shape}, expected {(self.dim, self.dim)}")
        if not g.is_symmetric():
            raise ViolationError("Gram matrix is not symmetric")
        if self.kind is SpaceKind.TILDE:
            if g.det() == 0:
                raise ViolationError("Gram matrix is singular")
        elif self.kind is SpaceKind.FULL:
            _check_full_gram(g)
        else:
            if g.rank() != self.dim - 1 or not (g @ Mat.unit(self.dim, 0)).is_zero():
                raise ViolationError("extended Gram matrix must have kernel spanned by the first basis vector")

    @property
    def n(self) -> int:
        """Dimension of the inner tilde space."""
        if self.kind is SpaceKind.FULL:
            return self.dim - 2
        if self.kind is SpaceKind.EXTENDED:
            return self.dim - 3
        return self.dim

    @property
    def gram_tilde(self) -> Mat:
        if self.kind is SpaceKind.FULL:
            return self.gram.block(1, self.dim - 1, 1, self.dim - 1)
        if self.kind is SpaceKind.EXTENDED:
            return self.gram.block(2, self.dim - 1, 2, self.dim - 1)
        return self.gram

    def inner(self, u: Mat, v: Mat) -> Fraction:
        return (star(self, u) @ v).scalar()

    @classmethod
    def full(cls, gram_tilde: Mat) -> InnerProductSpace:
        return build_chain(gram_tilde.rows, gram_tilde)[1]


def _check_full_gram(g: Mat) -> None:
    d = g.rows
    if d < 2:
        raise ViolationError("full space needs dimension at least 2")
    border = [g[0, j] for j in range(d)] + [g[d - 1, j] for j in range(d)]
    expected = [Fraction(int(j == d - 1)) for j in range(d)] + [Fraction(int(j == 0)) for j in range(d)]
    if border != expected:
        raise ViolationError("full Gram matrix lacks the hyperbolic border rows")
    if g @ g != Mat.identity(d):
        raise ViolationError("full Gram matrix is not involutive")


def _check_tilde(n: int, gram_tilde: Mat) -> None:
    if gram_tilde.shape != (n, n):
        raise ViolationError(f"gram_tilde has shape {gram_tilde.shape}, expected {(n, n)}")
    if not gram_tilde.is_symmetric():
        raise ViolationError("gram_tilde is not symmetric")
    if n and gram_tilde.det() == 0:
        raise ViolationError("gram_tilde is singular")
    if gram_tilde @ gram_tilde != Mat.identity(n):
        raise ViolationError("gram_tilde is not involutive (its square is not the identity)")


def build_chain(n: int, gram_tilde: Mat) -> tuple[InnerProductSpace, InnerProductSpace, InnerProductSpace]:
    """Return the nested spaces of dimensions n, n+2 and n+3."""
    if n < 0:
        raise ViolationError("dimension must be nonnegative")
    _check_tilde(n, gram_tilde)
    full = Mat.zeros(n + 2, n + 2).with_entry(0, n + 1, 1).with_entry(n + 1, 0, 1).with_block(1, 1, gram_tilde)
    extended = Mat.zeros(n + 3, n + 3).with_block(1, 1, full)
    return (
        InnerProductSpace(n, gram_tilde, SpaceKind.TILDE),
        InnerProductSpace(n + 2, full, SpaceKind.FULL),
        InnerProductSpace(n + 3, extended, SpaceKind.EXTENDED),
    )


def _check_vector(space: InnerProductSpace, u: Mat, name: str = "vector") -> None:
    if u.shape != (space.dim, 1):
        raise ViolationError(f"{name} has shape {u.shape}, expected ({space.dim}, 1)")


def _check_square(space: InnerProductSpace, m: Mat, name: str) -> None:
    if m.shape != (space.dim, space.dim):
        raise ViolationError(f"{name} has shape {m.shape}, expected {(space.dim, space.dim)}")


def star(space: InnerProductSpace, u: Mat) -> Mat:
    """The covector u^T G as a row."""
    _check_vector(space, u)
    return u.T @ space.gram


def lift(space: InnerProductSpace, u: Mat, v: Mat) -> Mat:
    """The rank-two operator u (x) v* - v (x) u*."""
    _check_vector(space, u, "u")
    _check_vector(space, v, "v")
    return u @ star(space, v) - v @ star(space, u)


def is_orthogonal(space: InnerProductSpace, P: Mat) -> bool:
    _check_square(space, P, "P")
    g = space.gram
    if P.T @ g @ P != g:
        return False
    if space.kind is SpaceKind.EXTENDED:
        e0 = Mat.unit(space.dim, 0)
        return P @ e0 == e0
    return P.det() != 0


def is_skew_adjoint(space: InnerProductSpace, X: Mat) -> bool:
    _check_square(space, X, "X")
    g = space.gram
    if not (X.T @ g + g @ X).is_zero():
        return False
    if space.kind is SpaceKind.EXTENDED:
        return (X @ Mat.unit(space.dim, 0)).is_zero()
    return True


def trace_pairing(X: Mat, Y: Mat) -> Fraction:
    """Half the trace of X Y."""
    return (X @ Y).trace() / 2


def congruence_diagonalize(gram: Mat) -> tuple[list[Fraction], Mat]:
    """Diagonalize a symmetric matrix by congruence.

    Returns ``(d, B)`` with ``B^T gram B = diag(d)`` and ``B`` invertible.
    Zero diagonal entries with a nonzero off-diagonal partner are handled by
    replacing the basis vector with its sum with the partner.
    """
    if not gram.is_symmetric():
        raise ViolationError("congruence diagonalization needs a symmetric matrix")
    n = gram.rows
    a = gram.tolist()
    basis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]  # basis[j] is column j

    def add_to(i: int, j: int, f: Fraction) -> None:
        # basis_i += f * basis_j, and the matching congruence on a
        basis[i] = [x + f * y for x, y in zip(basis[i], basis[j])]
        a[i] = [x + f * y for x, y in zip(a[i], a[j])]
        for r in range(n):
            a[r][i] += f * a[r][j]

    def swap(i: int, j: int) -> None:
        basis[i], basis[j] = basis[j], basis[i]
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]

    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            add_to(i, j, Fraction(1))
            pivot = i
        if pivot != k:
            swap(k, pivot)
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add_to(i, k, -a[i][k] / a[k][k])
    diag = [a[i][i] for i in range(n)]
    return diag, Mat.from_columns([Mat.column(b) for b in basis], rows=n)


def signature_of(gram: Mat) -> SignatureReport:
    diag, _ = congruence_diagonalize(gram)
    return SignatureReport(
        positives=sum(1 for d in diag if d > 0),
        negatives=sum(1 for d in diag if d < 0),
        zeros=sum(1 for d in diag if d == 0),
    )


def signature(space: InnerProductSpace) -> SignatureReport:
    return signature_of(space.gram)


def reflection(space: InnerProductSpace, w: Mat) -> Mat:
    """The orthogonal reflection in the hyperplane perpendicular to w."""
    norm = space.inner(w, w)
    if norm == 0:
        raise ViolationError("cannot reflect in an isotropic vector")
    return Mat.identity(space.dim) - (w @ star(space, w)) * (2 / norm)


def witt_map(space: InnerProductSpace, y: Mat) -> Mat:
    """An isometry sending the nonzero isotropic vector y to the last basis vector.

    Built from at most two rational reflections: two isotropic vectors u, v
    with nonzero product are swapped by the reflection in u - v.
    """
    if space.kind is not SpaceKind.FULL:
        raise ViolationError("witt_map needs a full space")
    _check_vector(space, y, "y")
    if y.is_zero():
        raise ViolationError("witt_map needs a nonzero vector")
    if space.inner(y, y) != 0:
        raise ViolationError("witt_map needs an isotropic vector")
    d = space.dim
    e_last = Mat.unit(d, d - 1)
    if y == e_last:
        return Mat.identity(d)
    if space.inner(y, e_last) != 0:
        return _swap_isotropic(space, y, e_last)
    # y is orthogonal to e_last; route through an isotropic vector that meets both.
    if y[d - 1, 0] != 0:
        middle = Mat.unit(d, 0)
    else:
        gt = space.gram_tilde
        n = d - 2
        ytil = y.block(1, d - 1, 0, 1)
        j = next(j for j in range(n) if (ytil.T @ gt @ Mat.unit(n, j)).scalar() != 0)
        w = Mat.unit(n, j)
        half_norm = (w.T @ gt @ w).scalar() / 2
        middle = Mat.unit(d, 0) + Mat.zeros(d, 1).with_block(1, 0, w) - e_last * half_norm
    first = _swap_isotropic(space, y, middle)
    second = _swap_isotropic(space, middle, e_last)
    return second @ first


def _swap_isotropic(space: InnerProductSpace, u: Mat, v: Mat) -> Mat:
    if u == v:
        return Mat.identity(space.dim)
    return reflection(space, u - v)


def orthogonal_complement(gram: Mat, basis: Sequence[Mat], within: Sequence[Mat] | None = None) -> list[Mat]:
    """Vectors of ``within`` (default: the whole space) orthogonal to all of ``basis``."""
    n = gram.rows
    ambient = list(within) if within is not None else [Mat.unit(n, i) for i in range(n)]
    if not basis:
        return ambient
    constraint = vstack([b.T @ gram for b in basis])
    return intersect_kernel(ambient, constraint)


def restrict(gram: Mat, op: Mat, basis: Sequence[Mat]) -> tuple[Mat, Mat]:
    """Gram matrix and operator matrix on an invariant subspace, in the given basis."""
    b = Mat.from_columns(list(basis), rows=gram.rows)
    g = b.T @ gram @ b
    m = b.solve(op @ b)
    if m is None:
        raise ViolationError("subspace is not invariant under the operator")
    return g, m
