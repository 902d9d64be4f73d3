"""Summand kinds, decompositions, and the scope errors raised by the classifier."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import format_rational, to_fraction


class ScopeError(Exception):
    """Input lies outside the catalog the classifier can label."""

    code = "SCOPE"


class UnsupportedType(ScopeError):
    code = "UNSUPPORTED_TYPE"


class AffineScope(ScopeError):
    code = "AFFINE_SCOPE"


class IndexMismatch(ValueError):
    """A decomposition cannot be realized on any admissible ambient form."""

    code = "INDEX_MISMATCH"


class Kind(enum.Enum):
    # Declaration order is the canonical sort order.
    COTYPE_NABLA2_Y1 = "COTYPE_NABLA2_Y1"
    COTYPE_NONAFFINE_EPS = "COTYPE_NONAFFINE_EPS"
    COTYPE_AFFINE_NABLA3 = "COTYPE_AFFINE_NABLA3"
    COTYPE_AFFINE_NABLA2 = "COTYPE_AFFINE_NABLA2"
    COTYPE_ZERO = "COTYPE_ZERO"
    TYPE_DELTA2_MINUS_0 = "TYPE_DELTA2_MINUS_0"
    TYPE_DELTA0_RP = "TYPE_DELTA0_RP"
    TYPE_DELTA0_IP = "TYPE_DELTA0_IP"
    TYPE_DELTA0_SIGN0 = "TYPE_DELTA0_SIGN0"

    @property
    def is_cotype(self) -> bool:
        return self.value.startswith("COTYPE")

    @property
    def rank(self) -> int:
        return list(Kind).index(self)


# Required and optional moduli per kind.
REQUIRED_MODULI: dict[Kind, tuple[str, ...]] = {
    Kind.COTYPE_NABLA2_Y1: ("y1",),
    Kind.COTYPE_NONAFFINE_EPS: ("alpha_sq", "epsilon"),
    Kind.COTYPE_AFFINE_NABLA3: ("mu",),
    Kind.COTYPE_AFFINE_NABLA2: (),
    Kind.COTYPE_ZERO: (),
    Kind.TYPE_DELTA2_MINUS_0: (),
    Kind.TYPE_DELTA0_RP: ("zeta_sq",),
    Kind.TYPE_DELTA0_IP: ("beta_sq",),
    Kind.TYPE_DELTA0_SIGN0: (),
}
OPTIONAL_MODULI: dict[Kind, tuple[str, ...]] = {Kind.COTYPE_NONAFFINE_EPS: ("coupling", "drift_sq")}

# (dim, index) shapes allowed for each kind, as listed in the orbit tables.
SHAPES: dict[Kind, frozenset[tuple[int, int]]] = {
    Kind.COTYPE_NABLA2_Y1: frozenset({(2, 0)}),
    Kind.COTYPE_NONAFFINE_EPS: frozenset({(1, 0), (1, 1)}),
    Kind.COTYPE_AFFINE_NABLA3: frozenset({(3, 1)}),
    Kind.COTYPE_AFFINE_NABLA2: frozenset({(2, 1)}),
    Kind.COTYPE_ZERO: frozenset({(0, 0)}),
    Kind.TYPE_DELTA2_MINUS_0: frozenset({(3, 1)}),
    Kind.TYPE_DELTA0_RP: frozenset({(2, 1)}),
    Kind.TYPE_DELTA0_IP: frozenset({(2, 0)}),
    Kind.TYPE_DELTA0_SIGN0: frozenset({(1, 0), (1, 1)}),
}


@dataclass(frozen=True)
class SummandShape:
    """A summand without moduli values: what an atlas row records."""

    kind: Kind
    dim: int
    index: int

    def __post_init__(self) -> None:
        if (self.dim, self.index) not in SHAPES[self.kind]:
            raise ValueError(f"{self.kind.value} cannot have (dim, index) = ({self.dim}, {self.index})")

    def sort_key(self) -> tuple:
        return (not self.kind.is_cotype, self.kind.rank, self.dim, self.index)

    @property
    def label(self) -> str:
        return shape_label(self.kind, self.index)

    @property
    def moduli_names(self) -> tuple[str, ...]:
        return REQUIRED_MODULI[self.kind]


def shape_label(kind: Kind, index: int) -> str:
    sign = "-" if index else "+"
    return {
        Kind.COTYPE_NABLA2_Y1: "nabla_2^{y1}(0)",
        Kind.COTYPE_NONAFFINE_EPS: f"nabla_0^{sign}(0)",
        Kind.COTYPE_AFFINE_NABLA3: "nabla_3^+(0)",
        Kind.COTYPE_AFFINE_NABLA2: "nabla_2(0,0)",
        Kind.COTYPE_ZERO: "0",
        Kind.TYPE_DELTA2_MINUS_0: "Delta_2^-(0)",
        Kind.TYPE_DELTA0_RP: "Delta_0(zeta,RP)",
        Kind.TYPE_DELTA0_IP: "Delta_0(i beta,IP)",
        Kind.TYPE_DELTA0_SIGN0: f"Delta_0^{sign}(0)",
    }[kind]


@dataclass(frozen=True)
class Summand:
    kind: Kind
    dim: int
    index: int
    moduli: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self) -> None:
        SummandShape(self.kind, self.dim, self.index)
        names = [k for k, _ in self.moduli]
        required = REQUIRED_MODULI[self.kind]
        optional = OPTIONAL_MODULI.get(self.kind, ())
        missing = [k for k in required if k not in names]
        unknown = [k for k in names if k not in required and k not in optional]
        if missing or unknown:
            raise ValueError(f"{self.kind.value}: missing moduli {missing}, unexpected {unknown}")
        object.__setattr__(self, "moduli", tuple(sorted((k, to_fraction(v)) for k, v in self.moduli)))
        _check_moduli(self)

    @classmethod
    def make(cls, kind: Kind, dim: int, index: int, moduli: Mapping[str, Fraction | int] | None = None) -> Summand:
        return cls(kind, dim, index, tuple((moduli or {}).items()))

    @property
    def shape(self) -> SummandShape:
        return SummandShape(self.kind, self.dim, self.index)

    def modulus(self, name: str, default: Fraction | None = None) -> Fraction | None:
        return dict(self.moduli).get(name, default)

    def sort_key(self) -> tuple:
        return self.shape.sort_key() + (self.moduli,)

    def describe(self) -> str:
        if not self.moduli:
            return self.shape.label
        vals = ", ".join(f"{k}={format_rational(v)}" for k, v in self.moduli)
        return f"{self.shape.label}[{vals}]"


def _check_moduli(s: Summand) -> None:
    m = dict(s.moduli)
    positive = ("alpha_sq", "zeta_sq", "beta_sq", "mu")
    for name in positive:
        if name in m and m[name] <= 0:
            raise ValueError(f"{s.kind.value}: modulus {name} must be positive")
    if "y1" in m and m["y1"] == 0:
        raise ValueError("y1 must be nonzero")
    if "epsilon" in m:
        if m["epsilon"] not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if (m["epsilon"] < 0) != bool(s.index):
            raise ValueError("epsilon disagrees with the index of the nonaffine cotype")
    for name in ("coupling", "drift_sq"):
        # Both are signed; zero is recorded by omission.
        if name in m and m[name] == 0:
            raise ValueError(f"a zero {name} is recorded by omission")


@dataclass(frozen=True)
class Decomposition:
    """A canonically sorted multiset of summands with exactly one cotype."""

    summands: tuple[Summand, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.summands, key=Summand.sort_key))
        object.__setattr__(self, "summands", ordered)
        cotypes = [s for s in ordered if s.kind.is_cotype]
        if len(cotypes) != 1:
            raise ValueError(f"a decomposition needs exactly one cotype summand, got {len(cotypes)}")

    @classmethod
    def of(cls, summands: Iterable[Summand]) -> Decomposition:
        return cls(tuple(summands))

    @property
    def cotype(self) -> Summand:
        return self.summands[0]

    @property
    def types(self) -> tuple[Summand, ...]:
        return self.summands[1:]

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.summands)

    @property
    def total_index(self) -> int:
        return sum(s.index for s in self.summands)

    @property
    def shapes(self) -> tuple[SummandShape, ...]:
        return tuple(s.shape for s in self.summands)

    def describe(self) -> str:
        return " + ".join(s.describe() for s in self.summands)
