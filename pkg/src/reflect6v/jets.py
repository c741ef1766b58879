"""Truncated multivariate Taylor series.

A :class:`Jet` stores the coefficients ``c[k1, ..., kv]`` of
``sum c[k] * e1**k1 * ... * ev**kv`` with every ``ki <= orders[i]``.
Coefficient ``c[k]`` equals ``d^k f / k!`` at the expansion point.
"""
from __future__ import annotations

import cmath

import mpmath
from math import factorial

import numpy as np
from scipy.signal import convolve


class Jet:
    __array_priority__ = 1000

    def __init__(self, coeffs, orders=None):
        coeffs = np.asarray(coeffs, dtype=complex)
        if orders is not None and tuple(d + 1 for d in orders) != coeffs.shape:
            raise ValueError("coefficient shape does not match orders")
        self.coeffs = coeffs
        self.coeffs.setflags(write=False)

    # construction ------------------------------------------------------
    @classmethod
    def constant(cls, value, orders):
        c = np.zeros(tuple(d + 1 for d in orders), dtype=complex)
        c[(0,) * len(orders)] = value
        return cls(c)

    @classmethod
    def variable(cls, index, orders, value=0.0):
        """The jet of ``value + e_index``."""
        c = np.zeros(tuple(d + 1 for d in orders), dtype=complex)
        c[(0,) * len(orders)] = value
        if orders[index] >= 1:
            unit = [0] * len(orders)
            unit[index] = 1
            c[tuple(unit)] = 1.0
        return cls(c)

    def embed(self, axes, orders):
        """Re-express as a jet in ``len(orders)`` variables; variable q of self
        becomes variable ``axes[q]`` of the result."""
        if len(axes) != self.nvars:
            raise ValueError("one target axis per variable required")
        out = np.zeros(tuple(d + 1 for d in orders), dtype=complex)
        src = self.coeffs
        idx = [0] * len(orders)
        for q, ax in enumerate(axes):
            n = min(src.shape[q], orders[ax] + 1)
            src = src.take(range(n), axis=q)
            idx[ax] = slice(0, n)
        # source axes must appear in increasing target order
        perm = np.argsort(axes)
        out[tuple(idx)] = np.transpose(src, perm)
        return Jet(out)

    @property
    def orders(self):
        return tuple(n - 1 for n in self.coeffs.shape)

    @property
    def nvars(self):
        return self.coeffs.ndim

    @property
    def value(self):
        return complex(self.coeffs[(0,) * self.nvars])

    def derivative(self, *k):
        """Mixed partial derivative of multi-order ``k`` at the expansion point."""
        scale = 1
        for ki in k:
            scale *= factorial(ki)
        return complex(self.coeffs[tuple(k)]) * scale

    # arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.coeffs.shape != self.coeffs.shape:
                raise ValueError("jets with different truncation orders")
            return other
        return Jet.constant(other, self.orders)

    def __add__(self, other):
        return Jet(self.coeffs + self._coerce(other).coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.coeffs - self._coerce(other).coeffs)

    def __rsub__(self, other):
        return Jet(self._coerce(other).coeffs - self.coeffs)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * complex(other))
        other = self._coerce(other)
        return Jet(_truncated_product(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / complex(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Jet.constant(1.0, self.orders)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _split(self):
        x0 = self.value
        nil = np.array(self.coeffs)
        nil[(0,) * self.nvars] = 0.0
        return x0, Jet(nil)

    def _nilpotency(self):
        return sum(self.orders)

    def reciprocal(self):
        x0, e = self._split()
        if x0 == 0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        # 1/(x0 (1 + u)) = (1/x0) sum (-u)^k, u nilpotent
        u = e / x0
        term = Jet.constant(1.0, self.orders)
        total = term
        for _ in range(self._nilpotency()):
            term = term * (-u)
            total = total + term
        return total / x0

    def sin(self):
        x0, e = self._split()
        s, c = _sin_cos_series(e, self._nilpotency())
        return s * cmath.cos(x0) + c * cmath.sin(x0)

    def cos(self):
        x0, e = self._split()
        s, c = _sin_cos_series(e, self._nilpotency())
        return c * cmath.cos(x0) - s * cmath.sin(x0)

    def __repr__(self):
        return f"Jet(orders={self.orders}, value={self.value!r})"


_DIRECT_MAX = 64


def _truncated_product(x, y):
    if x.size <= _DIRECT_MAX:
        full = convolve(x, y, method="direct")
        return full[tuple(slice(0, n) for n in x.shape)]
    nx, ny = np.count_nonzero(x), np.count_nonzero(y)
    if ny < nx:
        x, y, nx = y, x, ny
    out = np.zeros(x.shape, dtype=complex)
    shape = x.shape
    # shift-and-add over the nonzero coefficients of the sparser factor
    for p in zip(*np.nonzero(x)):
        dst = tuple(slice(pi, n) for pi, n in zip(p, shape))
        src = tuple(slice(0, n - pi) for pi, n in zip(p, shape))
        out[dst] += x[p] * y[src]
    return out


def _sin_cos_series(e, max_power):
    one = Jet.constant(1.0, e.orders)
    s = Jet.constant(0.0, e.orders)
    c = one
    power = one
    for k in range(1, max_power + 1):
        power = power * e
        sign_k = k % 4
        coeff = 1.0 / factorial(k)
        if sign_k == 1:
            s = s + power * coeff
        elif sign_k == 2:
            c = c - power * coeff
        elif sign_k == 3:
            s = s - power * coeff
        else:
            c = c + power * coeff
    return s, c


def is_mp(x) -> bool:
    """True for mpmath scalars, which take the extended-precision path."""
    return isinstance(x, (mpmath.mpc, mpmath.mpf))


def sin(x):
    """Sine of a scalar, an mpmath scalar or a jet."""
    if isinstance(x, Jet):
        return x.sin()
    if is_mp(x):
        return mpmath.sin(x)
    return cmath.sin(x)


def value_of(x):
    """Constant term of a jet, or the scalar itself."""
    if isinstance(x, Jet):
        return x.value
    return x if is_mp(x) else complex(x)
