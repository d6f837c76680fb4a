"""JSON state files.

Schema (UTF-8, complex numbers as ``[re, im]`` pairs, 0-based indices)::

    {"kind": "pure", "d": 2, "n": 2, "coeffs": [[[re, im], ...], ...]}
    {"kind": "product_sum", "d": 2, "n": 3,
     "terms": [{"c": [re, im], "left": [...], "right": [...]}, ...]}
    {"kind": "mixed_pure", "d": 2, "n": 3, "slices": [d x d matrix, ...]}

Floats are written with Python's shortest round-trip repr, so
``deserialize(serialize(x)) == x`` exactly.
"""

from __future__ import annotations

import json
import math
from numbers import Real

import numpy as np

from .errors import NonFiniteEntry, SchemaError
from .states import (
    MixedPureState,
    ProductSumState,
    PureState,
    make_mixed_pure,
    make_product_sum,
    make_pure_state,
)

KINDS = ("pure", "product_sum", "mixed_pure")


def _reject_constant(token):
    raise NonFiniteEntry(f"non-finite token {token!r} in JSON input")


def loads(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except NonFiniteEntry:
        raise
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, allow_nan=False, ensure_ascii=False)


def complex_to_json(z) -> list[float]:
    z = complex(z)
    # adding 0.0 maps -0.0 to 0.0 so equal values print identically
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in np.asarray(m)]


def real_vector_to_json(v) -> list[float]:
    return [float(x) + 0.0 for x in np.asarray(v, dtype=float).reshape(-1)]


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise SchemaError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteEntry(f"{where}: non-finite value")
    return x


def complex_from_json(x, where: str = "value") -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise SchemaError(f"{where}: complex numbers are [re, im] pairs, got {x!r}")
    return complex(_number(x[0], where), _number(x[1], where))


def vector_from_json(x, length: int | None = None, where: str = "vector") -> np.ndarray:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected a list")
    if length is not None and len(x) != length:
        raise SchemaError(f"{where}: expected length {length}, got {len(x)}")
    return np.array([complex_from_json(z, f"{where}[{i}]") for i, z in enumerate(x)], dtype=np.complex128)


def matrix_from_json(x, rows: int, cols: int, where: str = "matrix") -> np.ndarray:
    if not isinstance(x, list) or len(x) != rows:
        raise SchemaError(f"{where}: expected {rows} rows")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(x):
        out[i] = vector_from_json(row, cols, f"{where}[{i}]")
    return out


def _dim(doc: dict, key: str) -> int:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise SchemaError(f'"{key}" must be a positive integer, got {v!r}')
    return v


def to_document(state) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "d": state.d, "n": state.n, "coeffs": matrix_to_json(state.coeffs)}
    if isinstance(state, ProductSumState):
        terms = [
            {"c": complex_to_json(t.c), "left": vector_to_json(t.left), "right": vector_to_json(t.right)}
            for t in state.terms
        ]
        return {"kind": "product_sum", "d": state.d, "n": state.n, "terms": terms}
    if isinstance(state, MixedPureState):
        return {
            "kind": "mixed_pure",
            "d": state.d,
            "n": state.n,
            "slices": [matrix_to_json(s) for s in state.slices],
        }
    raise TypeError(f"cannot serialize {type(state).__name__}")


def from_document(doc, normalize: bool = False):
    """Decode a parsed state document.

    ``normalize`` only applies to pure states; other kinds are validated as
    written.
    """
    if not isinstance(doc, dict):
        raise SchemaError("state file must contain a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaError(f'"kind" must be one of {KINDS}, got {kind!r}')
    d, n = _dim(doc, "d"), _dim(doc, "n")
    if kind == "pure":
        if "coeffs" not in doc:
            raise SchemaError('pure state requires "coeffs"')
        return make_pure_state(matrix_from_json(doc["coeffs"], d, n, "coeffs"), normalize=normalize)
    if kind == "product_sum":
        terms = doc.get("terms")
        if not isinstance(terms, list) or not terms:
            raise SchemaError('product_sum requires a nonempty "terms" list')
        parsed = []
        for i, t in enumerate(terms):
            if not isinstance(t, dict) or not {"c", "left", "right"} <= t.keys():
                raise SchemaError(f"terms[{i}] must have c, left, right")
            parsed.append(
                (
                    complex_from_json(t["c"], f"terms[{i}].c"),
                    vector_from_json(t["left"], d, f"terms[{i}].left"),
                    vector_from_json(t["right"], n, f"terms[{i}].right"),
                )
            )
        return make_product_sum(parsed, d=d, n=n)
    slices = doc.get("slices")
    if not isinstance(slices, list) or len(slices) != n:
        raise SchemaError(f'mixed_pure requires "slices" of length n={n}')
    return make_mixed_pure([matrix_from_json(s, d, d, f"slices[{k}]") for k, s in enumerate(slices)])


def serialize(state) -> str:
    return dumps(to_document(state))


def deserialize(text: str, normalize: bool = False):
    return from_document(loads(text), normalize=normalize)


def load(path, normalize: bool = False):
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read(), normalize=normalize)


def save(state, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(state))
        fh.write("\n")
