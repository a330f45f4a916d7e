"""Shared wire format for tensors and reports.

A tensor is serialized as ``{"n": n, "legs": 2, "entries": [[re, im], ...]}``
with entries in flat row-major order over the index tuple ``(a, b, c, d)``
(``(a, b, c, d, e, f)`` for three-tensors).  Top-level JSON records carry
``"schema": 1``.
"""
from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import ParameterError

SCHEMA_VERSION = 1


def tensor_to_json(t) -> dict:
    t = np.asarray(t, dtype=complex)
    legs = t.ndim // 2
    return {
        "n": int(t.shape[0]),
        "legs": legs,
        "entries": [[float(z.real), float(z.imag)] for z in t.ravel()],
    }


def tensor_from_json(obj: dict) -> np.ndarray:
    n, legs = int(obj["n"]), int(obj.get("legs", 2))
    entries = np.asarray(obj["entries"], dtype=float)
    if entries.shape != (n ** (2 * legs), 2):
        raise ParameterError(f"expected {n ** (2 * legs)} [re, im] pairs, got {entries.shape}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape((n,) * (2 * legs))


def dumps(record: dict) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, **record}, allow_nan=True)


def tensor_csv_rows(t, order=None):
    """Rows ``(order, a, b, c, d, re, im)`` for every entry of a two-tensor."""
    t = np.asarray(t, dtype=complex)
    for idx in np.ndindex(t.shape):
        z = t[idx]
        yield ([order] if order is not None else []) + list(idx) + [repr(float(z.real)), repr(float(z.imag))]


def tensor_to_csv(t) -> str:
    """CSV text for one two-tensor with header ``a,b,c,d,re,im``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "c", "d", "re", "im"])
    w.writerows(tensor_csv_rows(t))
    return buf.getvalue()


def tensors_to_csv(tensors: dict) -> str:
    """CSV text for ``{order: tensor}`` with header ``order,a,b,c,d,re,im``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["order", "a", "b", "c", "d", "re", "im"])
    for order, t in tensors.items():
        w.writerows(tensor_csv_rows(t, order))
    return buf.getvalue()
