"""JSON documents for matrices, functions, sequences and splittings.

Complex entries are written as ``[re, im]`` pairs, matrices row-major as a
list of rows.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import DomainError
from .opfunc import DyadicFn, TrigFn


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 2:
        # real entries written without imaginary parts
        arr = np.stack([arr, np.zeros_like(arr)], axis=-1)
    if arr.shape[-1] != 2:
        raise DomainError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def fn_to_dict(f) -> dict:
    doc = {"kind": f.kind, "dim": f.dim}
    if f.kind == "dyadic":
        doc["resolution"] = f.resolution
    else:
        doc["gridsize"] = f.gridsize
        doc["spectrum_bound"] = f.spectrum_bound
    doc["values"] = [encode_matrix(v) for v in f.values]
    return doc


def fn_from_dict(doc: dict):
    values = np.array([decode_matrix(v) for v in doc["values"]])
    if values.shape[1:] != (doc["dim"], doc["dim"]):
        raise DomainError("stored values do not match the declared dim")
    if doc["kind"] == "dyadic":
        f = DyadicFn(values)
        if f.resolution != doc["resolution"]:
            raise DomainError("stored values do not match the declared resolution")
        return f
    if doc["kind"] == "trig":
        if values.shape[0] != doc["gridsize"]:
            raise DomainError("stored values do not match the declared gridsize")
        return TrigFn(values, doc.get("spectrum_bound"))
    raise DomainError(f"unknown function kind {doc['kind']!r}")


def sequence_to_dict(seq) -> dict:
    return {"dim": seq.dim, "items": [encode_matrix(c) for c in seq.items]}


def sequence_from_dict(doc: dict):
    from .seqnorm import OpSequence

    items = [decode_matrix(c) for c in doc["items"]]
    seq = OpSequence(items)
    if "dim" in doc and seq.dim != doc["dim"]:
        raise DomainError("stored items do not match the declared dim")
    return seq


def dumps(doc, **kw) -> str:
    return json.dumps(doc, sort_keys=True, **kw)
