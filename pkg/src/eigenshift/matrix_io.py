"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Matrix files
============
Dense real matrices stored as JSON (a list of rows, or an object with a ``matrix`` field) or as
CSV whose first line gives the shape (``n`` for square, ``m,n`` otherwise) followed by one line
per row.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       numpy
:platform:      All
"""
import json
import logging
import pathlib

import numpy as np

from eigenshift.exceptions import ShapeError
from eigenshift.exceptions import UsageError
from eigenshift.spectral_core import as_matrix

# Globals
log = logging.getLogger(__name__)


def _format(path):
    suffix = pathlib.Path(path).suffix.lower()
    if suffix not in (".json", ".csv"):
        raise UsageError(f"unsupported matrix file {path}, expected .json or .csv")
    return suffix


def _shape_header(line, path):
    try:
        dims = [int(v) for v in line.strip().split(",")]
    except ValueError as exc:
        raise ShapeError(f"{path}: bad shape header {line.strip()!r}") from exc
    if len(dims) == 1:
        dims = dims * 2
    if len(dims) != 2 or min(dims) < 1:
        raise ShapeError(f"{path}: bad shape header {line.strip()!r}")
    return tuple(dims)


def read_matrix(path):
    """
    Load a matrix and check it is finite and two-dimensional
    """
    fmt = _format(path)
    with open(path, encoding="utf-8") as fh:
        if fmt == ".json":
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path} is not valid JSON: {exc}") from exc
            if isinstance(data, dict):
                data = data.get("matrix")
            try:
                arr = np.asarray(data, dtype=float)
            except (TypeError, ValueError) as exc:
                raise ShapeError(f"{path}: not a rectangular numeric matrix: {exc}") from exc
        else:
            shape = _shape_header(fh.readline(), path)
            try:
                arr = np.loadtxt(fh, delimiter=",", ndmin=2)
            except ValueError as exc:
                raise ShapeError(f"{path}: not a rectangular numeric matrix: {exc}") from exc
            if arr.shape != shape:
                raise ShapeError(f"{path}: header says {shape}, found {arr.shape}")
    log.debug(f"Read {arr.shape} matrix from {path}")
    return as_matrix(arr)


def write_matrix(M, path):
    fmt = _format(path)
    arr = as_matrix(M)
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == ".json":
            json.dump({"matrix": arr.tolist()}, fh)
            fh.write("\n")
        else:
            m, n = arr.shape
            fh.write(f"{n}\n" if m == n else f"{m},{n}\n")
            np.savetxt(fh, arr, delimiter=",", fmt="%.17g")
