"""Exhaustive sum over ice-rule configurations of the reflecting-end lattice.

Geometry for N = 2 (double row k carries lambda_k)::

                mu_2      mu_1
                 ^         ^          level 0: all up
    in >--------(+)-------(+)------.            upper line, R(lambda_k + mu_j)
                 |         |        )  K        level 2k-1
    out <-------(-)-------(-)------'            lower line, R(lambda_k - mu_j)
                 |         |                    level 2k
                ...       ...
                 v         v          level 2N: all down

Columns run mu_N ... mu_1 from left to right.  The upper line of a double
row is traversed left to right and enters pointing into the lattice; the
lower line is traversed right to left and leaves pointing out of it.  Along
either line "aux down" (index 1) means the horizontal arrow points along the
direction of travel.  A vertical edge has index 0 when its arrow points up.
The turn carries kappa_+ when the line arrives with index 0 and kappa_- for
index 1.  A vertex weight is the R-matrix entry
``R[(aux_out, v_out), (aux_in, v_in)]`` with v_in the edge above the vertex.

Only the vertical edges are enumerated; horizontal arrows follow from arrow
conservation along each line, and configurations that break it are dropped.
"""
from __future__ import annotations

import numpy as np

from . import weights as w
from .errors import DivisionByZeroPartition, IndexOutOfRange, SizeCap
from .weights import ModelParameters

ENUM_CAP = 3


def _levels(N):
    """All vertical-edge assignments, shape (nconf, 2N+1, N), boundaries fixed."""
    free = N * (2 * N - 1)
    bits = (np.arange(2**free)[:, None] >> np.arange(free)[None, :]) & 1
    conf = np.empty((2**free, 2 * N + 1, N), dtype=np.int8)
    conf[:, 0, :] = 0
    conf[:, -1, :] = 1
    conf[:, 1:-1, :] = bits.reshape(-1, 2 * N - 1, N)
    return conf


def _line(conf, above, below, sites, spectral, eta, aux, weight):
    for j in sites:
        r = w.r_matrix(spectral(j), eta).reshape(2, 2, 2, 2)
        v_in, v_out = conf[:, above, j - 1], conf[:, below, j - 1]
        out = aux + v_in - v_out
        ok = (out == 0) | (out == 1)
        out = np.clip(out, 0, 1)
        weight = np.where(ok, weight * r[out, v_out, aux, v_in], 0.0)
        aux = out
    return aux, weight


def configuration_weights(params: ModelParameters, cap=ENUM_CAP):
    """Vertical-edge assignments and their Boltzmann weights (zero when invalid)."""
    N = params.N
    if N > cap:
        raise SizeCap(f"enumeration is limited to N <= {cap}, got {N}")
    conf = _levels(N)
    weight = np.ones(len(conf), dtype=complex)
    eta, lams, mus = params.eta, params.lambdas, params.mus
    for k in range(1, N + 1):
        lam = lams[k - 1]
        aux = np.ones(len(conf), dtype=np.int8)
        aux, weight = _line(conf, 2 * k - 2, 2 * k - 1, range(N, 0, -1),
                            lambda j: lam + mus[j - 1], eta, aux, weight)
        turn = np.where(aux == 0, w.kappa_plus(lam, params.xi), w.kappa_minus(lam, params.xi))
        aux, weight = _line(conf, 2 * k - 1, 2 * k, range(1, N + 1),
                            lambda j: lam - mus[j - 1], eta, aux, turn * weight)
        weight = np.where(aux == 0, weight, 0.0)
    return conf, weight


def count_configurations(N: int) -> int:
    """Number of admissible configurations (vertex weights all set to 1)."""
    conf, weight = configuration_weights(ModelParameters.homogeneous(0.3, 0.1, N, 0.4, 1.2))
    return int(np.count_nonzero(weight))


def enumerate_partition(params: ModelParameters, cap=ENUM_CAP) -> complex:
    return complex(configuration_weights(params, cap)[1].sum())


def _restricted(params, mask_fn, cap):
    conf, weight = configuration_weights(params, cap)
    z = weight.sum()
    if abs(z) < params.tol_singular:
        raise DivisionByZeroPartition(f"|Z_N| = {abs(z):.3e}")
    return complex(weight[mask_fn(conf)].sum() / z)


def _check(idx, N, name):
    if not 1 <= idx <= N:
        raise IndexOutOfRange(f"{name}={idx} outside 1..{N}")


def enumerate_efp(params: ModelParameters, r: int, s: int, cap=ENUM_CAP) -> complex:
    """First s vertical edges from the left below double row r all point down."""
    N = params.N
    _check(r, N, "r")
    _check(s, N, "s")
    # leftmost column is site N
    return _restricted(params, lambda c: np.all(c[:, 2 * r, N - s:] == 1, axis=1), cap)


def enumerate_g(params: ModelParameters, r: int, cap=ENUM_CAP) -> complex:
    return enumerate_efp(params, r, 1, cap)


def enumerate_h(params: ModelParameters, r: int, cap=ENUM_CAP) -> complex:
    """Leftmost column flips from up to down inside double row r."""
    N = params.N
    _check(r, N, "r")
    return _restricted(params, lambda c: (c[:, 2 * r - 2, N - 1] == 0) & (c[:, 2 * r, N - 1] == 1), cap)
