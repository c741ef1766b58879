"""Dense complex determinants and minors.

Double precision goes through LAPACK's partially pivoted LU (``numpy.linalg``);
setting ``REFLECT6V_PRECISION`` to a digit count (e.g. ``50``) switches
:func:`det` to an mpmath LU at that many decimal digits.
"""
from __future__ import annotations

import os
from typing import Iterable

import numpy as np

from .errors import IndexOutOfRange, NotSquare


def _precision():
    raw = os.environ.get("REFLECT6V_PRECISION", "").strip().lower()
    if raw in ("", "double", "float64", "53"):
        return None
    return int(raw)


def det(m, precision=None) -> complex:
    """Determinant via LU with partial pivoting; the 0x0 determinant is 1.

    Object arrays of mpmath scalars stay in mpmath at the ambient precision.
    """
    m = np.asarray(m)
    if m.dtype == object:
        return _det_object(m)
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"matrix of shape {m.shape} is not square")
    if m.shape[0] == 0:
        return 1.0 + 0.0j
    digits = precision if precision is not None else _precision()
    if digits is None:
        return complex(np.linalg.det(m))
    return det_mp(m, digits)


def _det_object(m):
    import mpmath

    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"matrix of shape {m.shape} is not square")
    if m.shape[0] == 0:
        return mpmath.mpc(1)
    return mpmath.det(mpmath.matrix(m.tolist()))


def det_mp(m, digits=50) -> complex:
    import mpmath

    with mpmath.workdps(digits):
        mat = mpmath.matrix([[mpmath.mpc(x.real, x.imag) for x in row] for row in np.asarray(m)])
        return complex(mpmath.det(mat))


def minor(m, drop_rows: Iterable[int] = (), drop_cols: Iterable[int] = ()) -> np.ndarray:
    """Submatrix with the listed (0-based) rows and columns removed, order preserved."""
    m = np.asarray(m)
    drop_rows, drop_cols = sorted(set(drop_rows)), sorted(set(drop_cols))
    if len(drop_rows) != len(drop_cols):
        raise IndexOutOfRange("row and column deletion sets differ in size")
    for idx, size in ((drop_rows, m.shape[0]), (drop_cols, m.shape[1])):
        if any(not 0 <= i < size for i in idx):
            raise IndexOutOfRange(f"deletion index outside 0..{size - 1}")
    rows = [i for i in range(m.shape[0]) if i not in drop_rows]
    cols = [j for j in range(m.shape[1]) if j not in drop_cols]
    return m[np.ix_(rows, cols)]


def minor_det(m, drop_rows=(), drop_cols=()) -> complex:
    return det(minor(m, drop_rows, drop_cols))


def cofactor_expansion_det(m) -> complex:
    """Reference determinant by recursive Laplace expansion along the first row."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(m[0, 0])
    total = 0.0j
    for j in range(n):
        if m[0, j] != 0:
            total += (-1) ** j * m[0, j] * cofactor_expansion_det(minor(m, [0], [j]))
    return total
