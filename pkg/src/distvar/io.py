"""JSON encoding of matrices, triples, tuples, colligations and polynomials.

Complex entries are ``[re, im]`` pairs; matrices are row-major nested lists.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InputError
from .inner import BivariatePoly
from .model import Colligation, ModelTriple, ModelTuple


def encode_matrix(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def decode_matrix(obj, name="matrix", shape=None):
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: entries must be [re, im] pairs") from exc
    if arr.size == 0 and shape is not None:
        return np.zeros(shape, dtype=complex)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InputError(f"{name}: expected a rows x cols x 2 array, got shape {arr.shape}")
    m = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None and m.shape != shape:
        raise InputError(f"{name}: expected shape {shape}, got {m.shape}")
    return m


def triple_to_dict(t):
    return {"dim": t.dim, "P": encode_matrix(t.p), "U": encode_matrix(t.u)}


def tuple_to_dict(t):
    return {"dim": t.dim, "d": t.d, "P_list": [encode_matrix(p) for p in t.ps],
            "U_list": [encode_matrix(u) for u in t.us]}


def colligation_to_dict(c):
    e, h = c.dim_e, c.dim_h
    return {"dim_e": e, "dim_h": h, "A": encode_matrix(c.a),
            "B": encode_matrix(c.b) if h else [],
            "C": encode_matrix(c.c) if h else [],
            "D": encode_matrix(c.d) if h else []}


def _int(obj, key):
    try:
        v = obj[key]
    except KeyError as exc:
        raise InputError(f"missing field {key!r}") from exc
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"field {key!r} must be an integer")
    return v


def triple_from_dict(obj):
    n = _int(obj, "dim")
    return ModelTriple(n, decode_matrix(obj["P"], "P", (n, n)), decode_matrix(obj["U"], "U", (n, n)))


def tuple_from_dict(obj):
    n, d = _int(obj, "dim"), _int(obj, "d")
    ps, us = obj.get("P_list", []), obj.get("U_list", [])
    if len(ps) != d or len(us) != d:
        raise InputError(f"P_list and U_list must each have d={d} entries")
    return ModelTuple(n, tuple(decode_matrix(p, f"P_list[{i}]", (n, n)) for i, p in enumerate(ps)),
                      tuple(decode_matrix(u, f"U_list[{i}]", (n, n)) for i, u in enumerate(us)))


def colligation_from_dict(obj):
    e, h = _int(obj, "dim_e"), _int(obj, "dim_h")
    return Colligation(e, h, decode_matrix(obj["A"], "A", (e, e)),
                       decode_matrix(obj["B"], "B", (e, h)),
                       decode_matrix(obj["C"], "C", (h, e)),
                       decode_matrix(obj["D"], "D", (h, h)))


def to_dict(obj):
    if isinstance(obj, ModelTriple):
        return triple_to_dict(obj)
    if isinstance(obj, ModelTuple):
        return tuple_to_dict(obj)
    if isinstance(obj, Colligation):
        return colligation_to_dict(obj)
    if isinstance(obj, BivariatePoly):
        return obj.to_dict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_dict(obj):
    """Decode by shape: tuple (``P_list``), colligation (``dim_e``),
    polynomial (``coeffs``) or triple (``P``).
    """
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    try:
        if "P_list" in obj:
            return tuple_from_dict(obj)
        if "dim_e" in obj:
            return colligation_from_dict(obj)
        if "coeffs" in obj:
            return BivariatePoly.from_dict(obj)
        if "P" in obj:
            return triple_from_dict(obj)
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    raise InputError("unrecognized object: expected a triple, tuple, colligation or polynomial")


def dumps(obj, **kw):
    return json.dumps(obj if isinstance(obj, (dict, list)) else to_dict(obj), **kw)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return from_dict(data)


def save(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, indent=1))
        fh.write("\n")
