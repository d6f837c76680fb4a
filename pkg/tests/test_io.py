import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_coeffs, random_unit
from schmidt_dinf import NonFiniteEntry, NotNormalized, SchemaError, make_mixed_pure, make_product_sum, make_pure_state
from schmidt_dinf import io

BELL = '{"kind": "pure", "d": 2, "n": 2, "coeffs": [[[0.7071067811865476, 0], [0, 0]], [[0, 0], [0.7071067811865476, 0]]]}'


def test_reads_bell_file():
    s = io.deserialize(BELL)
    np.testing.assert_allclose(s.coeffs, np.diag([2**-0.5, 2**-0.5]))


def test_round_trip_all_kinds(rng):
    states = [
        make_pure_state(random_coeffs(rng, 3, 5)),
        make_product_sum([(0.6, [1, 0], random_unit(rng, 4)), (0.8j, [0, 1], random_unit(rng, 4))]),
        make_mixed_pure(rng.standard_normal((3, 2, 2)) + 1j * rng.standard_normal((3, 2, 2))),
    ]
    for s in states:
        text = io.serialize(s)
        back = io.deserialize(text)
        assert type(back) is type(s)
        assert back == s
        assert io.serialize(back) == text


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False, allow_subnormal=False),
        min_size=2,
        max_size=24,
    ).filter(lambda xs: sum(x * x for x in xs) > 1e-6)
)
def test_round_trip_is_bit_exact(xs):
    if len(xs) % 2:
        xs = xs[:-1]
    z = np.array(xs[0::2]) + 1j * np.array(xs[1::2])
    s = make_pure_state(z.reshape(1, -1), normalize=True)
    back = io.deserialize(io.serialize(s))
    assert np.array_equal(back.coeffs, s.coeffs)


def test_file_round_trip(tmp_path, rng):
    s = make_pure_state(random_coeffs(rng, 2, 3))
    path = tmp_path / "s.json"
    io.save(s, path)
    assert io.load(path) == s


def _doc(**over):
    doc = json.loads(BELL)
    doc.update(over)
    return json.dumps(doc)


@pytest.mark.parametrize(
    "text",
    [
        _doc(d=3),
        _doc(n=1),
        _doc(coeffs=[[[1, 0], [0, 0]]]),
        _doc(coeffs=[[[1, 0, 0], [0, 0]], [[0, 0], [0, 0]]]),
        _doc(coeffs=[[["1", 0], [0, 0]], [[0, 0], [0, 0]]]),
        _doc(kind="mixed"),
        _doc(d=True),
        _doc(d=0),
        '{"kind": "pure", "d": 2, "n": 2}',
        "[1, 2]",
        "{not json",
        '{"kind": "product_sum", "d": 2, "n": 2, "terms": []}',
        '{"kind": "product_sum", "d": 2, "n": 2, "terms": [{"c": [1, 0], "left": [[1, 0], [0, 0]]}]}',
        '{"kind": "mixed_pure", "d": 2, "n": 2, "slices": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}',
    ],
)
def test_schema_errors(text):
    with pytest.raises(SchemaError):
        io.deserialize(text)


@pytest.mark.parametrize("token", ["NaN", "Infinity", "-Infinity", "1e999"])
def test_nonfinite_tokens(token):
    text = BELL.replace("0.7071067811865476, 0]", f"{token}, 0]", 1)
    with pytest.raises(NonFiniteEntry):
        io.deserialize(text)


def test_normalization_enforced_unless_requested():
    text = _doc(coeffs=[[[1, 0], [0, 0]], [[0, 0], [1, 0]]])
    with pytest.raises(NotNormalized):
        io.deserialize(text)
    s = io.deserialize(text, normalize=True)
    assert s.norm == pytest.approx(1.0)


def test_dumps_refuses_nan():
    with pytest.raises(ValueError):
        io.dumps({"x": float("nan")})
