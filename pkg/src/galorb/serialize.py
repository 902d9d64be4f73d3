"""JSON encoding shared by every module.

Rationals are strings ``"p"`` or ``"p/q"`` in lowest terms; matrices are
row-major lists of such strings and vectors are flat lists.  Decoding errors
carry the JSON path of the offending value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .classifier import SpecialTuple
from .galilean import AlgebraElement, GroupElement
from .linalg import InnerProductSpace, Mat, ViolationError, build_chain, format_rational, parse_rational
from .summands import Decomposition, Kind, Summand, SummandShape


class DecodeError(ValueError):
    """Malformed JSON input; the message names the position."""


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def encode_rational(q: Fraction) -> str:
    return format_rational(q)


def encode_matrix(m: Mat) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.entries()]


def encode_vector(v: Mat) -> list[str]:
    return [format_rational(x) for x in v.flat()] if v.rows else []


def decode_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DecodeError(f"{where}: expected a rational string, got {value!r}")
    try:
        return parse_rational(str(value))
    except ViolationError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def decode_matrix(value: Any, where: str, shape: tuple[int, int] | None = None) -> Mat:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise DecodeError(f"{where}: expected an array of arrays")
    rows = [[decode_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(value)]
    if shape is not None:
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise DecodeError(f"{where}: expected shape {shape[0]}x{shape[1]}")
    try:
        return Mat(rows, cols=shape[1] if shape else None)
    except ViolationError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def decode_vector(value: Any, where: str, length: int) -> Mat:
    if not isinstance(value, list):
        raise DecodeError(f"{where}: expected an array")
    # Accept both flat vectors and single-column matrices.
    flat = [x[0] if isinstance(x, list) and len(x) == 1 else x for x in value]
    if len(flat) != length:
        raise DecodeError(f"{where}: expected {length} entries, got {len(flat)}")
    return Mat.column([decode_rational(x, f"{where}[{i}]") for i, x in enumerate(flat)])


def _field(obj: Any, name: str, where: str) -> Any:
    if not isinstance(obj, Mapping):
        raise DecodeError(f"{where}: expected a JSON object")
    if name not in obj:
        raise DecodeError(f"{where}: missing field {name!r}")
    return obj[name]


def decode_space(obj: Mapping[str, Any], where: str = "$") -> InnerProductSpace:
    n = _field(obj, "n", where)
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DecodeError(f"{where}.n: expected a nonnegative integer")
    gram_tilde = decode_matrix(_field(obj, "gram_tilde", where), f"{where}.gram_tilde", (n, n))
    try:
        return build_chain(n, gram_tilde)[1]
    except ViolationError as exc:
        raise DecodeError(f"{where}.gram_tilde: {exc}") from None


def _space_fields(space: InnerProductSpace) -> dict[str, Any]:
    return {"n": space.n, "gram_tilde": encode_matrix(space.gram_tilde)}


def encode_tuple(t: SpecialTuple) -> dict[str, Any]:
    return {**_space_fields(t.space), "Y": encode_matrix(t.Y), "y": encode_vector(t.y)}


def decode_tuple(obj: Any, where: str = "$") -> SpecialTuple:
    space = decode_space(obj, where)
    d = space.dim
    Y = decode_matrix(_field(obj, "Y", where), f"{where}.Y", (d, d))
    y = decode_vector(_field(obj, "y", where), f"{where}.y", d)
    try:
        return SpecialTuple(space, Y, y)
    except ViolationError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def encode_group(g: GroupElement) -> dict[str, Any]:
    return {**_space_fields(g.space), "P": encode_matrix(g.P), "p": encode_vector(g.p)}


def decode_group(obj: Any, where: str = "$") -> GroupElement:
    space = decode_space(obj, where)
    d = space.dim
    P = decode_matrix(_field(obj, "P", where), f"{where}.P", (d, d))
    p = decode_vector(_field(obj, "p", where), f"{where}.p", d)
    try:
        return GroupElement(space, P, p)
    except ViolationError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def encode_algebra(a: AlgebraElement) -> dict[str, Any]:
    return {**_space_fields(a.space), "X": encode_matrix(a.X), "x": encode_vector(a.x)}


def decode_algebra(obj: Any, where: str = "$") -> AlgebraElement:
    space = decode_space(obj, where)
    d = space.dim
    X = decode_matrix(_field(obj, "X", where), f"{where}.X", (d, d))
    x = decode_vector(_field(obj, "x", where), f"{where}.x", d)
    try:
        return AlgebraElement(space, X, x)
    except ViolationError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def encode_summand(s: Summand) -> dict[str, Any]:
    return {
        "kind": s.kind.value,
        "dim": s.dim,
        "index": s.index,
        "moduli": {k: encode_rational(v) for k, v in s.moduli},
    }


def encode_decomposition(d: Decomposition) -> dict[str, Any]:
    return {"summands": [encode_summand(s) for s in d.summands]}


def decode_kind(value: Any, where: str) -> Kind:
    try:
        return Kind(value)
    except ValueError:
        raise DecodeError(f"{where}: unknown summand kind {value!r}") from None


def decode_shape(obj: Any, where: str) -> SummandShape:
    kind = decode_kind(_field(obj, "kind", where), f"{where}.kind")
    try:
        return SummandShape(kind, _field(obj, "dim", where), _field(obj, "index", where))
    except ValueError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def decode_summand(obj: Any, where: str) -> Summand:
    shape = decode_shape(obj, where)
    raw = obj.get("moduli", {}) if isinstance(obj, Mapping) else {}
    if not isinstance(raw, Mapping):
        raise DecodeError(f"{where}.moduli: expected an object")
    moduli = {k: decode_rational(v, f"{where}.moduli.{k}") for k, v in raw.items()}
    try:
        return Summand.make(shape.kind, shape.dim, shape.index, moduli)
    except ValueError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def decode_decomposition(obj: Any, where: str = "$") -> Decomposition:
    items = _field(obj, "summands", where)
    if not isinstance(items, list):
        raise DecodeError(f"{where}.summands: expected an array")
    summands = [decode_summand(s, f"{where}.summands[{i}]") for i, s in enumerate(items)]
    try:
        return Decomposition.of(summands)
    except ValueError as exc:
        raise DecodeError(f"{where}: {exc}") from None


def encode_shape(s: SummandShape) -> dict[str, Any]:
    return {"kind": s.kind.value, "dim": s.dim, "index": s.index, "moduli": list(s.moduli_names)}
