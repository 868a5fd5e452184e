"""Plain-text file formats: CSV samples, fields and matrices; JSON coefficients and tensors.

Floats are written with ``repr`` (shortest round-trip form) so a read after a
write recovers every value bit for bit.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .basis import BasisParams
from .matrices import nonzero_entries
from .multidim import ParamTensors
from .transform import CoefficientVector, PhaseSpaceField, PhaseSpaceGrid, SampledWaveFunction

__all__ = [
    "write_samples",
    "read_samples",
    "write_coeffs",
    "read_coeffs",
    "write_field",
    "read_field",
    "write_matrix",
    "read_matrix",
    "write_tensors",
    "read_tensors",
    "write_json",
]


def _f(v) -> str:
    return repr(float(v))


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _rows(path, header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [h.strip() for h in first] != header:
            raise ValueError(f"{path}: expected header {','.join(header)}, got {first}")
        return [row for row in reader if row]


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


# -- wave-function samples ----------------------------------------------------------


def write_samples(path, x, values):
    """``x,re,im`` rows."""
    values = np.asarray(values, dtype=complex)
    _write_rows(path, ["x", "re", "im"], ([_f(xi), _f(v.real), _f(v.imag)] for xi, v in zip(x, values)))


def read_samples(path) -> SampledWaveFunction:
    rows = np.array(_rows(path, ["x", "re", "im"]), dtype=float).reshape(-1, 3)
    return SampledWaveFunction(rows[:, 0], rows[:, 1] + 1j * rows[:, 2])


# -- coefficient vectors ----------------------------------------------------------


def write_coeffs(path, cv: CoefficientVector):
    write_json(
        path,
        {
            "params": cv.params.to_dict(),
            "n_max": cv.n_max,
            "re": [float(c.real) for c in cv.coeffs],
            "im": [float(c.imag) for c in cv.coeffs],
            "flags": sorted(cv.flags),
        },
    )


def read_coeffs(path) -> CoefficientVector:
    d = json.loads(Path(path).read_text())
    p = d["params"]
    params = BasisParams(p["X"], p["P"], p["a"], p["hbar"], p.get("phase_origin", "x"))
    coeffs = np.asarray(d["re"]) + 1j * np.asarray(d["im"])
    return CoefficientVector(params, int(d["n_max"]), coeffs, frozenset(d.get("flags", ())))


# -- phase-space fields --------------------------------------------------------------


def _sidecar(path):
    return Path(str(path) + ".json")


def write_field(path, field: PhaseSpaceField):
    """``X,P,re,im`` rows in row-major order (``X`` outer) plus a ``<path>.json`` sidecar."""
    X, P = field.grid.X, field.grid.P

    def rows():
        for i, Xi in enumerate(X):
            for j, Pj in enumerate(P):
                v = field.values[i, j]
                yield [_f(Xi), _f(Pj), _f(v.real), _f(v.imag)]

    _write_rows(path, ["X", "P", "re", "im"], rows())
    write_json(
        _sidecar(path),
        {
            "grid": field.grid.to_dict(),
            "n": field.n,
            "a": field.a,
            "hbar": field.hbar,
            "phase_origin": field.phase_origin,
            "flags": sorted(field.flags),
        },
    )


def read_field(path) -> PhaseSpaceField:
    meta = json.loads(_sidecar(path).read_text())
    grid = PhaseSpaceGrid(**meta["grid"])
    rows = np.array(_rows(path, ["X", "P", "re", "im"]), dtype=float).reshape(-1, 4)
    if len(rows) != grid.nX * grid.nP:
        raise ValueError(f"{path}: {len(rows)} rows for a {grid.nX} x {grid.nP} grid")
    values = (rows[:, 2] + 1j * rows[:, 3]).reshape(grid.nX, grid.nP)
    return PhaseSpaceField(
        grid, meta["n"], meta["a"], values, meta["hbar"], meta["phase_origin"], frozenset(meta["flags"])
    )


# -- matrices -----------------------------------------------------------------------


def write_matrix(path, M, tol=0.0):
    """Nonzero entries as ``n,m,re,im`` rows."""
    _write_rows(
        path,
        ["n", "m", "re", "im"],
        ([str(n), str(m), _f(re), _f(im)] for n, m, re, im in nonzero_entries(M, tol)),
    )


def read_matrix(path, N=None) -> np.ndarray:
    rows = _rows(path, ["n", "m", "re", "im"])
    idx = [(int(r[0]), int(r[1])) for r in rows]
    if N is None:
        N = 1 + max((max(i) for i in idx), default=-1)
    M = np.zeros((N, N), dtype=complex)
    for (n, m), r in zip(idx, rows):
        M[n, m] = float(r[2]) + 1j * float(r[3])
    return M


# -- tensors -------------------------------------------------------------------------


def write_tensors(path, t: ParamTensors):
    write_json(path, t.to_dict())


def read_tensors(path) -> ParamTensors:
    return ParamTensors.from_dict(json.loads(Path(path).read_text()))
