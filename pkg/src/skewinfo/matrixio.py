"""Plain-text matrix files with value-exact round trips.

A matrix file is a JSON document::

    {"dim": 2, "kind": "density",
     "entries": [[0.9, 0], [0, 0], [0, 0], [0.1, 0]]}

``entries`` lists ``(re, im)`` pairs in row-major order. Floats are written
with 17 significant digits so reading back reproduces every bit.
"""

import json
import re

import numpy as np

from .qig import as_density, as_observable

__all__ = ["MatrixFileError", "KINDS", "dumps", "loads", "write_matrix", "read_matrix", "parse_matrix_spec"]

KINDS = ("density", "observable")


class MatrixFileError(ValueError):
    """Malformed matrix document; the message names the offending location."""


def _number(v):
    text = "%.17g" % v
    # keep a float literal so JSON readers do not drop the sign of -0.0
    return text if any(ch in text for ch in ".en") else text + ".0"


def dumps(matrix, kind):
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, not {kind!r}")
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    rows = [f"[{_number(z.real)}, {_number(z.imag)}]" for z in m.ravel()]
    body = ",\n  ".join(rows)
    return f'{{"dim": {m.shape[0]}, "kind": "{kind}",\n "entries": [\n  {body}\n ]}}\n'


def loads(text, source="<string>", kind=None):
    """Parse a matrix document and enforce the invariants of its kind."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise MatrixFileError(f"{source}: top level must be an object")
    for key in ("dim", "kind", "entries"):
        if key not in doc:
            raise MatrixFileError(f"{source}: missing field {key!r}")
    dim, found, entries = doc["dim"], doc["kind"], doc["entries"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MatrixFileError(f"{source}: field 'dim' must be a positive integer")
    if found not in KINDS:
        raise MatrixFileError(f"{source}: field 'kind' must be one of {KINDS}")
    if kind is not None and found != kind:
        raise MatrixFileError(f"{source}: expected a {kind} matrix, found {found}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise MatrixFileError(f"{source}: 'entries' must hold dim**2 = {dim * dim} pairs")
    values = np.empty(dim * dim, dtype=complex)
    for k, pair in enumerate(entries):
        where = f"{source}: entries[{k}] (row {k // dim}, column {k % dim})"
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise MatrixFileError(f"{where}: expected a [re, im] pair of numbers")
        values[k] = complex(pair[0], pair[1])
    m = values.reshape(dim, dim)
    try:
        return as_density(m) if found == "density" else as_observable(m)
    except ValueError as exc:
        raise MatrixFileError(f"{source}: {exc}") from None


def write_matrix(path, matrix, kind):
    with open(path, "w") as fh:
        fh.write(dumps(matrix, kind))


def read_matrix(path, kind=None):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror}") from None
    return loads(text, source=str(path), kind=kind)


_PAULI = {
    "sigmax": np.array([[0, 1], [1, 0]], dtype=complex),
    "sigmay": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sigmaz": np.array([[1, 0], [0, -1]], dtype=complex),
}


def parse_matrix_spec(spec, kind):
    """Inline matrix (``diag(0.9,0.1)``, ``sigmax``, ``eye(3)``) or a path to a matrix file."""
    s = spec.strip().replace(" ", "")
    lowered = s.lower()
    m = None
    if lowered in _PAULI:
        m = _PAULI[lowered]
    elif (found := re.fullmatch(r"diag\((.*)\)", lowered)) is not None:
        try:
            m = np.diag([complex(v) for v in found.group(1).split(",")])
        except ValueError:
            raise MatrixFileError(f"{spec}: diag() arguments must be numbers") from None
    elif (found := re.fullmatch(r"eye\((\d+)\)", lowered)) is not None:
        n = int(found.group(1))
        m = np.eye(n, dtype=complex) / (n if kind == "density" else 1)
    if m is None:
        return read_matrix(spec, kind)
    try:
        return as_density(m) if kind == "density" else as_observable(m)
    except ValueError as exc:
        raise MatrixFileError(f"{spec}: {exc}") from None
