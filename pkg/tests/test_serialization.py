import csv
import io
import json

import numpy as np
import pytest

from ellaybe import serialization as ser
from ellaybe.errors import ParameterError


def random_tensor(n, legs=2, seed=0):
    rng = np.random.default_rng(seed)
    shape = (n,) * (2 * legs)
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@pytest.mark.parametrize("legs", [2, 3])
def test_json_round_trip_is_exact(legs):
    t = random_tensor(3, legs)
    back = ser.tensor_from_json(json.loads(json.dumps(ser.tensor_to_json(t))))
    assert np.array_equal(back, t)


def test_entry_order_is_row_major():
    t = np.zeros((2,) * 4, dtype=complex)
    t[0, 1, 1, 0] = 1 + 2j
    entries = ser.tensor_to_json(t)["entries"]
    assert entries[0b0110] == [1.0, 2.0]


def test_json_shape_check():
    with pytest.raises(ParameterError):
        ser.tensor_from_json({"n": 2, "legs": 2, "entries": [[0, 0]] * 15})


def test_dumps_carries_schema():
    assert json.loads(ser.dumps({"a": 1})) == {"schema": 1, "a": 1}


def test_csv():
    t = random_tensor(2, seed=1)
    rows = list(csv.reader(io.StringIO(ser.tensors_to_csv({-1: t, 0: 2 * t}))))
    assert rows[0] == ["order", "a", "b", "c", "d", "re", "im"]
    assert len(rows) == 1 + 2 * 16
    order, a, b, c, d, re, im = rows[17]
    assert order == "0" and complex(float(re), float(im)) == 2 * t[int(a), int(b), int(c), int(d)]
    single = list(csv.reader(io.StringIO(ser.tensor_to_csv(t))))
    assert single[0] == ["a", "b", "c", "d", "re", "im"]
    assert float(single[1][4]) == t[0, 0, 0, 0].real
