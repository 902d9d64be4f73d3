"""Indecomposable catalog, orbit atlases, and explicit representatives."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement
from typing import Any, Callable, Iterable, Mapping, Sequence

from .classifier import SpecialTuple
from .galilean import AlgebraElement
from .linalg import InnerProductSpace, Mat, SpaceKind, ViolationError, build_chain, lift, parse_rational
from .serialize import decode_shape, encode_shape
from .summands import Decomposition, IndexMismatch, Kind, Summand, SummandShape


@dataclass(frozen=True)
class TypeModel:
    """A concrete pair ``(gram, Z)`` realizing one type summand."""

    gram: Mat
    Z: Mat


def _exact_sqrt(q: Fraction, name: str) -> Fraction:
    if q <= 0:
        raise ValueError(f"modulus {name} must be positive")
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError(f"modulus {name} = {q} is not a rational square; no rational representative exists")
    return Fraction(num, den)


def _sign_model(index: int, _moduli: Mapping[str, Fraction]) -> TypeModel:
    return TypeModel(Mat([[-1 if index else 1]]), Mat.zeros(1, 1))


def _elliptic_model(_index: int, moduli: Mapping[str, Fraction]) -> TypeModel:
    beta = _exact_sqrt(moduli["beta_sq"], "beta_sq")
    return TypeModel(Mat.identity(2), Mat([[0, -beta], [beta, 0]]))


def _hyperbolic_model(_index: int, moduli: Mapping[str, Fraction]) -> TypeModel:
    zeta = _exact_sqrt(moduli["zeta_sq"], "zeta_sq")
    return TypeModel(Mat.diag([1, -1]), Mat([[0, zeta], [zeta, 0]]))


def _nilpotent_model(_index: int, _moduli: Mapping[str, Fraction]) -> TypeModel:
    gram = Mat.diag([1, 1, -1])
    space = InnerProductSpace(3, gram, SpaceKind.TILDE)
    # L_{a,b} with a isotropic is nilpotent of height three.
    return TypeModel(gram, lift(space, Mat.column([1, 0, 1]), Mat.column([0, 1, 0])))


@dataclass(frozen=True)
class CatalogEntry:
    kind: Kind
    dim: int
    index: int
    moduli_arity: int
    representative_builder: Callable[[int, Mapping[str, Fraction]], TypeModel] | None

    @property
    def shape(self) -> SummandShape:
        return SummandShape(self.kind, self.dim, self.index)

    @property
    def is_cotype(self) -> bool:
        return self.kind.is_cotype


# Cotypes are placed by :func:`representative` directly, so they carry no
# standalone builder.
CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(Kind.TYPE_DELTA2_MINUS_0, 3, 1, 0, _nilpotent_model),
    CatalogEntry(Kind.TYPE_DELTA0_RP, 2, 1, 1, _hyperbolic_model),
    CatalogEntry(Kind.TYPE_DELTA0_IP, 2, 0, 1, _elliptic_model),
    CatalogEntry(Kind.TYPE_DELTA0_SIGN0, 1, 1, 0, _sign_model),
    CatalogEntry(Kind.TYPE_DELTA0_SIGN0, 1, 0, 0, _sign_model),
    CatalogEntry(Kind.COTYPE_AFFINE_NABLA3, 3, 1, 1, None),
    CatalogEntry(Kind.COTYPE_AFFINE_NABLA2, 2, 1, 0, None),
    CatalogEntry(Kind.COTYPE_NABLA2_Y1, 2, 0, 1, None),
    CatalogEntry(Kind.COTYPE_NONAFFINE_EPS, 1, 1, 1, None),
    CatalogEntry(Kind.COTYPE_NONAFFINE_EPS, 1, 0, 1, None),
    CatalogEntry(Kind.COTYPE_ZERO, 0, 0, 0, None),
)


def catalog_entry(shape: SummandShape) -> CatalogEntry:
    for entry in CATALOG:
        if entry.shape == shape:
            return entry
    raise KeyError(shape)


# atlases


Row = tuple[SummandShape, ...]


def canonical_row(shapes: Iterable[SummandShape]) -> Row:
    return tuple(sorted(shapes, key=SummandShape.sort_key))


@dataclass(frozen=True)
class AtlasRow:
    shapes: Row
    in_reference: bool = False
    reference_row: int | None = None

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.shapes)

    @property
    def total_index(self) -> int:
        return sum(s.index for s in self.shapes)

    def label(self) -> str:
        return " + ".join(s.label for s in self.shapes)


@dataclass(frozen=True)
class OrbitAtlas:
    total_dim: int
    total_index: int
    rows: tuple[AtlasRow, ...]

    def row_shapes(self) -> list[Row]:
        return [r.shapes for r in self.rows]


def _multiset_key(row: Row) -> tuple:
    return tuple(s.sort_key() for s in row)


def enumerate_atlas(total_dim: int, total_index: int, catalog: Sequence[CatalogEntry] = CATALOG,
                    reference: Sequence[AtlasRow] | None = None) -> OrbitAtlas:
    """All one-cotype-plus-types sums with the given dimension and index totals.

    The zero cotype only occurs on its own, as the empty decomposition.
    """
    if total_dim < 0 or total_index < 0:
        raise ValueError("totals must be nonnegative")
    if reference is None:
        reference = reference_table().rows if (total_dim, total_index) == (5, 1) else ()
    ref_index = {_multiset_key(r.shapes): r.reference_row for r in reference}
    types = [e.shape for e in catalog if not e.is_cotype]
    found: set[Row] = set()
    for entry in catalog:
        if not entry.is_cotype:
            continue
        if entry.kind is Kind.COTYPE_ZERO:
            if (total_dim, total_index) == (0, 0):
                found.add((entry.shape,))
            continue
        rest_dim = total_dim - entry.dim
        rest_index = total_index - entry.index
        if rest_dim < 0 or rest_index < 0:
            continue
        # Every type has dimension at least one, so at most rest_dim of them.
        for count in range(1, rest_dim + 1):
            for combo in combinations_with_replacement(types, count):
                if sum(s.dim for s in combo) == rest_dim and sum(s.index for s in combo) == rest_index:
                    found.add(canonical_row((entry.shape, *combo)))
        if rest_dim == 0 and rest_index == 0:
            found.add((entry.shape,))
    rows = []
    for shapes in sorted(found, key=_multiset_key):
        ref = ref_index.get(_multiset_key(shapes))
        rows.append(AtlasRow(shapes, ref is not None, ref))
    return OrbitAtlas(total_dim, total_index, tuple(rows))


def load_atlas(obj: Mapping[str, Any]) -> OrbitAtlas:
    rows = []
    for i, row in enumerate(obj["rows"]):
        shapes = canonical_row(decode_shape(s, f"$.rows[{i}].summands[{j}]") for j, s in enumerate(row["summands"]))
        rows.append(AtlasRow(shapes, bool(row.get("in_paper", False)), row.get("paper_row")))
    return OrbitAtlas(obj["total_dim"], obj["total_index"], tuple(rows))


def reference_table() -> OrbitAtlas:
    """The bundled transcription of the n = 3 orbit table."""
    text = resources.files("galorb").joinpath("data/table3.json").read_text(encoding="utf-8")
    return load_atlas(json.loads(text))


def encode_atlas(atlas: OrbitAtlas) -> dict[str, Any]:
    return {
        "total_dim": atlas.total_dim,
        "total_index": atlas.total_index,
        "rows": [
            {"summands": [encode_shape(s) for s in r.shapes], "in_paper": r.in_reference, "paper_row": r.reference_row}
            for r in atlas.rows
        ],
    }


@dataclass(frozen=True)
class AtlasDiff:
    missing: tuple[Row, ...]
    extra: tuple[Row, ...]

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra


def atlas_diff(atlas: OrbitAtlas, expected: Iterable[Row | AtlasRow]) -> AtlasDiff:
    """Multiset difference between computed rows and expected row descriptors."""
    want = Counter(_multiset_key(canonical_row(r.shapes if isinstance(r, AtlasRow) else r)) for r in expected)
    have = Counter(_multiset_key(r.shapes) for r in atlas.rows)
    by_key = {_multiset_key(r.shapes): r.shapes for r in atlas.rows}
    for r in expected:
        shapes = canonical_row(r.shapes if isinstance(r, AtlasRow) else r)
        by_key.setdefault(_multiset_key(shapes), shapes)
    missing = tuple(by_key[k] for k in sorted((want - have).elements()))
    extra = tuple(by_key[k] for k in sorted((have - want).elements()))
    return AtlasDiff(missing, extra)


def render_table(rows: Sequence[AtlasRow]) -> list[str]:
    """Aligned text lines: row marker, summand sum, dimension sum, index sum."""
    cells = []
    for r in rows:
        marker = f"{r.reference_row}." if r.reference_row is not None else "*"
        cells.append((
            marker,
            r.label(),
            "+".join(str(s.dim) for s in r.shapes),
            "+".join(str(s.index) for s in r.shapes),
        ))
    header = ("", "cotype sum", "dimension", "index")
    widths = [max(len(c[i]) for c in [header, *cells]) for i in range(4)]

    def fmt(c: tuple[str, ...]) -> str:
        return "  ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip()

    return [fmt(header), "-" * len(fmt(header))] + [fmt(c) for c in cells]


def table_order(atlas: OrbitAtlas) -> list[AtlasRow]:
    """Reference rows first in their printed order, then the remaining rows."""
    ref = sorted((r for r in atlas.rows if r.reference_row is not None), key=lambda r: r.reference_row)
    return ref + [r for r in atlas.rows if r.reference_row is None]


# representatives


def sample_moduli(row: Row, y1: Fraction | int = 1) -> Decomposition:
    """Concrete moduli for an atlas row: the values used by the round-trip checks.

    Repeated elliptic planes get distinct ``beta_sq`` values 1, 4, 9, ...  A
    nonaffine cotype whose row has a height-three block but no negative line
    gets ``drift_sq = 1`` so that the block is realized by the cotype's drift.
    """
    kinds = Counter(s.kind for s in row)
    has_negative_line = any(s.kind is Kind.TYPE_DELTA0_SIGN0 and s.index for s in row)
    elliptic = 0
    out = []
    for s in row:
        moduli: dict[str, Fraction | int] = {}
        if s.kind is Kind.COTYPE_NABLA2_Y1:
            moduli["y1"] = y1
        elif s.kind is Kind.COTYPE_NONAFFINE_EPS:
            moduli.update(epsilon=-1 if s.index else 1, alpha_sq=1)
            if kinds[Kind.TYPE_DELTA2_MINUS_0] and not has_negative_line:
                moduli["drift_sq"] = 1
        elif s.kind is Kind.COTYPE_AFFINE_NABLA3:
            moduli["mu"] = 1
        elif s.kind is Kind.TYPE_DELTA0_IP:
            elliptic += 1
            moduli["beta_sq"] = elliptic * elliptic
        elif s.kind is Kind.TYPE_DELTA0_RP:
            moduli["zeta_sq"] = 1
        out.append(Summand.make(s.kind, s.dim, s.index, moduli))
    return Decomposition.of(out)


def _take(types: list[Summand], kind: Kind, index: int) -> Summand | None:
    for i, s in enumerate(types):
        if s.kind is kind and s.index == index:
            return types.pop(i)
    return None


def _embed_middle(n: int, Z: Mat) -> Mat:
    return Mat.zeros(n + 2, n + 2).with_block(1, 1, Z)


def representative(d: Decomposition) -> SpecialTuple:
    """An explicit special tuple whose classification is ``d``.

    The tilde form is the block sum of the Gram matrices needed by the
    summands, so it may be indefinite.  Raises IndexMismatch when the
    summands cannot be assembled into a tuple with this decomposition.
    """
    cotype = d.cotype
    types = list(d.types)
    if cotype.kind is Kind.COTYPE_ZERO:
        raise ViolationError("the zero cotype has no ambient space to build a representative in")
    moduli = dict(cotype.moduli)
    lead_grams: list[Mat] = []
    lead_ops: list[Mat] = []
    y_tilde_lead: list[Fraction] = []
    e_tilde_lead: list[Fraction] = []
    if cotype.kind is Kind.COTYPE_AFFINE_NABLA3:
        m = _exact_sqrt(moduli["mu"], "mu")
        lead_grams, lead_ops = [Mat([[1]])], [Mat.zeros(1, 1)]
        e_tilde_lead = [m]
    elif cotype.kind is Kind.COTYPE_NONAFFINE_EPS:
        eps = int(moduli["epsilon"])
        alpha = _exact_sqrt(moduli["alpha_sq"], "alpha_sq")
        coupling = moduli.get("coupling", Fraction(0))
        drift_sq = moduli.get("drift_sq")
        if drift_sq is not None:
            if _take(types, Kind.TYPE_DELTA2_MINUS_0, 1) is None:
                raise IndexMismatch("a nonaffine cotype with drift needs a Delta_2^- summand to absorb")
            r = _exact_sqrt(drift_sq, "drift_sq")
            lead_grams = [Mat([[eps]]), Mat([[1]])]
            lead_ops = [Mat.zeros(1, 1), Mat.zeros(1, 1)]
            y_tilde_lead = [alpha, Fraction(0)]
            e_tilde_lead = [coupling / (eps * alpha), r]
        else:
            plus = _take(types, Kind.TYPE_DELTA0_SIGN0, 0)
            minus = _take(types, Kind.TYPE_DELTA0_SIGN0, 1)
            if plus is None or minus is None:
                raise IndexMismatch(
                    "a nonaffine cotype needs a Delta_0^+ and a Delta_0^- summand (or a Delta_2^- with drift) "
                    "to fill the hyperbolic plane it pairs with"
                )
            lead_grams, lead_ops = [Mat([[eps]])], [Mat.zeros(1, 1)]
            y_tilde_lead = [alpha]
            e_tilde_lead = [coupling / (eps * alpha)]
    elif cotype.kind not in (Kind.COTYPE_NABLA2_Y1, Kind.COTYPE_AFFINE_NABLA2):
        raise ViolationError(f"no representative for cotype {cotype.kind.value}")

    models = [catalog_entry(s.shape).representative_builder(s.index, dict(s.moduli)) for s in types]
    gram_tilde = Mat.block_diag(lead_grams + [m.gram for m in models])
    Z = Mat.block_diag(lead_ops + [m.Z for m in models])
    n = gram_tilde.rows
    space = build_chain(n, gram_tilde)[1]
    Y = _embed_middle(n, Z)
    y = Mat.zeros(n + 2, 1)
    if cotype.kind is Kind.COTYPE_NABLA2_Y1:
        y = y.with_entry(0, 0, moduli["y1"])
    elif cotype.kind in (Kind.COTYPE_AFFINE_NABLA2, Kind.COTYPE_AFFINE_NABLA3):
        y = y.with_entry(n + 1, 0, 1)
    else:
        y = y.with_block(1, 0, Mat.column(y_tilde_lead + [0] * (n - len(y_tilde_lead))))
    if e_tilde_lead:
        e_tilde = Mat.zeros(n + 2, 1).with_block(1, 0, Mat.column(e_tilde_lead + [0] * (n - len(e_tilde_lead))))
        # L_{e~, e_1} puts e~ in the last column and -e~* in the first row.
        Y = Y + lift(space, e_tilde, Mat.unit(n + 2, 0))
    return SpecialTuple(space, Y, y)


def tuple_to_algebra(t: SpecialTuple) -> AlgebraElement:
    """The algebra element ``(Y, y)`` that pairs against the stabilizer like the tuple."""
    return AlgebraElement(t.space, t.Y, t.y)


def representative_for_row(row: Row, moduli: Mapping[str, Any]) -> Decomposition:
    """Fill a symbolic row with concrete moduli.

    ``moduli`` maps a modulus name to one value, or to a list consumed in
    order by the summands that need that name.  Optional nonaffine moduli
    (``coupling``, ``drift_sq``) are used only when supplied.
    """
    queues: dict[str, list[Fraction]] = {}
    for name, value in moduli.items():
        values = value if isinstance(value, list) else [value]
        queues[name] = [Fraction(v) if not isinstance(v, str) else _parse(v, name) for v in values]
    out = []
    for s in row:
        values: dict[str, Fraction | int] = {}
        names = list(s.moduli_names)
        if s.kind is Kind.COTYPE_NONAFFINE_EPS:
            values["epsilon"] = -1 if s.index else 1
            names = ["alpha_sq"] + [k for k in ("coupling", "drift_sq") if k in queues]
        for name in names:
            queue = queues.get(name)
            if not queue:
                if name in ("coupling", "drift_sq"):
                    continue
                raise ValueError(f"missing modulus {name!r} for {s.label}")
            values[name] = queue.pop(0) if len(queue) > 1 else queue[0]
        out.append(Summand.make(s.kind, s.dim, s.index, values))
    return Decomposition.of(out)


def _parse(text: str, name: str) -> Fraction:
    try:
        return parse_rational(text)
    except ViolationError as exc:
        raise ValueError(f"modulus {name}: {exc}") from None
