"""
Truncated Taylor jets of analytic functions.

A :class:`Jet` of order ``N`` at ``z0`` stores the normalized Taylor
coefficients ``c_k = f^(k)(z0)/k!`` for ``k = 0..N``.  The coefficient array
has shape ``(N + 1,) + batch`` so that one jet can describe the same function
at a whole grid of centers at once; every operation below acts elementwise
over the trailing batch axes.

Arithmetic between jets of different orders truncates to the smaller order.
Elementary functions use the principal branch at the constant term and the
usual first-order recurrences for the higher coefficients.
"""
import math

import numpy as np

from .errors import (BranchPointAtCenter, DivisionByZeroLeadCoefficient,
                     DomainError, OrderTooLow)

DEFAULT_ORDER = 8
ZERO_TOL = 1e-14


class Jet:
    __slots__ = ("center", "coeffs")
    __array_priority__ = 100

    def __init__(self, center, coeffs):
        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.ndim == 0:
            coeffs = coeffs.reshape(1)
        self.center = center
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value, center, order):
        center_arr = np.asarray(center)
        coeffs = np.zeros((order + 1,) + center_arr.shape, dtype=complex)
        coeffs[0] = value
        return cls(center, coeffs)

    @classmethod
    def variable(cls, center, order):
        """Jet of the identity function ``z`` at ``center``."""
        center_arr = np.asarray(center)
        coeffs = np.zeros((order + 1,) + center_arr.shape, dtype=complex)
        coeffs[0] = center_arr
        if order >= 1:
            coeffs[1] = 1.0
        return cls(center, coeffs)

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def truncate(self, order):
        if order > self.order:
            raise OrderTooLow(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.center, self.coeffs[:order + 1])

    def derivative(self, k):
        return derivative(self, k)

    def deriv(self):
        """Jet of ``f'`` (one order lower)."""
        if self.order < 1:
            raise OrderTooLow("derivative of an order-0 jet")
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return Jet(self.center, self.coeffs[1:] * k)

    def __add__(self, other):
        return jet_add(self, other)

    def __radd__(self, other):
        return jet_add(self, other)

    def __sub__(self, other):
        return jet_sub(self, other)

    def __rsub__(self, other):
        return jet_sub(_coerce(other, self), self)

    def __mul__(self, other):
        return jet_mul(self, other)

    def __rmul__(self, other):
        return jet_mul(self, other)

    def __truediv__(self, other):
        return jet_div(self, other)

    def __rtruediv__(self, other):
        return jet_div(_coerce(other, self), self)

    def __neg__(self):
        return Jet(self.center, -self.coeffs)

    def __pow__(self, exponent):
        return jet_pow(self, exponent)

    def __repr__(self):
        return f"Jet(center={self.center!r}, coeffs={self.coeffs!r})"


def _coerce(x, like):
    if isinstance(x, Jet):
        return x
    return Jet.constant(x, like.center, like.order)


def _align(a, b):
    a = _coerce(a, b) if not isinstance(a, Jet) else a
    b = _coerce(b, a)
    if a.center is not b.center and not np.array_equal(a.center, b.center):
        raise DomainError("jets expanded at different centers")
    n = min(a.order, b.order)
    return a.coeffs[:n + 1], b.coeffs[:n + 1], n


def _first_bad(mask, center):
    idx = np.argwhere(np.atleast_1d(mask))[0]
    c = np.atleast_1d(np.asarray(center))
    return c[tuple(idx)] if c.size > 1 else c.reshape(-1)[0]


def _small_lead(coeffs):
    """Mask of batch entries whose constant term is numerically zero."""
    lead = np.abs(coeffs[0])
    # high orders of series with a small radius grow geometrically, so only
    # the first DEFAULT_ORDER + 1 coefficients set the scale
    scale = np.max(np.abs(coeffs[:DEFAULT_ORDER + 1]), axis=0)
    return (lead == 0) | (lead <= ZERO_TOL * scale)


def jet_add(a, b):
    ca, cb, _ = _align(a, b)
    return Jet(a.center if isinstance(a, Jet) else b.center, ca + cb)


def jet_sub(a, b):
    ca, cb, _ = _align(a, b)
    return Jet(a.center if isinstance(a, Jet) else b.center, ca - cb)


def _cauchy(ca, cb, n):
    out = np.empty(np.broadcast_shapes(ca.shape, cb.shape), dtype=complex)
    for k in range(n + 1):
        out[k] = np.sum(ca[:k + 1] * cb[k::-1], axis=0)
    return out


def jet_mul(a, b):
    if not isinstance(b, Jet):
        return Jet(a.center, a.coeffs * b)
    if not isinstance(a, Jet):
        return Jet(b.center, b.coeffs * a)
    ca, cb, n = _align(a, b)
    return Jet(a.center, _cauchy(ca, cb, n))


def jet_div(a, b):
    if not isinstance(b, Jet):
        if b == 0:
            raise DivisionByZeroLeadCoefficient("division by zero constant")
        return Jet(a.center, a.coeffs / b)
    ca, cb, n = _align(a, b)
    bad = _small_lead(cb)
    if np.any(bad):
        raise DivisionByZeroLeadCoefficient(
            "divisor has vanishing constant term", _first_bad(bad, b.center))
    out = np.empty(np.broadcast_shapes(ca.shape, cb.shape), dtype=complex)
    b0 = cb[0]
    for k in range(n + 1):
        acc = ca[k] - np.sum(out[:k] * cb[k:0:-1], axis=0) if k else ca[0]
        out[k] = acc / b0
    return Jet(a.center, out)


def jet_exp(a):
    c = a.coeffs
    n = a.order
    out = np.empty_like(c)
    out[0] = np.exp(c[0])
    for k in range(1, n + 1):
        j = np.arange(1, k + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        out[k] = np.sum(j * c[1:k + 1] * out[k - 1::-1][:k], axis=0) / k
    return Jet(a.center, out)


def _check_branch(a, what):
    bad = _small_lead(a.coeffs)
    if np.any(bad):
        raise BranchPointAtCenter(f"{what} at a zero of its argument",
                                  _first_bad(bad, a.center))


def jet_log(a):
    _check_branch(a, "log")
    c = a.coeffs
    n = a.order
    out = np.empty_like(c)
    out[0] = np.log(c[0])
    for k in range(1, n + 1):
        acc = k * c[k]
        if k > 1:
            j = np.arange(1, k).reshape((-1,) + (1,) * (c.ndim - 1))
            acc = acc - np.sum(j * out[1:k] * c[k - 1:0:-1], axis=0)
        out[k] = acc / (k * c[0])
    return Jet(a.center, out)


def _integer_exponent(exponent):
    e = complex(exponent)
    if e.imag == 0 and e.real == math.floor(e.real) and abs(e.real) < 2**31:
        return int(e.real)
    return None


def _int_pow(a, n):
    if n < 0:
        return jet_div(Jet.constant(1.0, a.center, a.order), _int_pow(a, -n))
    result = Jet.constant(1.0, a.center, a.order)
    base = a
    while n:
        if n & 1:
            result = jet_mul(result, base)
        n >>= 1
        if n:
            base = jet_mul(base, base)
    return result


def jet_pow(a, exponent):
    """``a ** exponent`` on the principal branch; integer powers are exact."""
    n_int = _integer_exponent(exponent)
    if n_int is not None:
        return _int_pow(a, n_int)
    _check_branch(a, "non-integer power")
    alpha = complex(exponent)
    c = a.coeffs
    n = a.order
    out = np.empty_like(c)
    out[0] = c[0] ** alpha
    for k in range(1, n + 1):
        j = np.arange(1, k + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        w = alpha * j - (k - j)
        out[k] = np.sum(w * c[1:k + 1] * out[k - 1::-1][:k], axis=0) / (k * c[0])
    return Jet(a.center, out)


def jet_sqrt(a):
    return jet_pow(a, 0.5)


def jet_compose(outer, inner):
    """Jet of ``F(g(z))`` from the jet of ``F`` at ``g(z0)`` and the jet of ``g`` at ``z0``."""
    n = min(outer.order, inner.order)
    d = Jet(inner.center, inner.coeffs[:n + 1].copy())
    d.coeffs[0] = 0.0
    oc = outer.coeffs
    result = Jet(inner.center, np.zeros(np.broadcast_shapes(
        oc[:n + 1].shape, d.coeffs.shape), dtype=complex))
    result.coeffs[0] = oc[n]
    for k in range(n - 1, -1, -1):
        result = jet_mul(result, d)
        result.coeffs[0] += oc[k]
    return result


def derivative(a, k):
    """``f^(k)(z0) = k! c_k``."""
    if k < 0 or k > a.order:
        raise OrderTooLow(f"derivative of order {k} needs a jet of order >= {k}")
    return math.factorial(k) * a.coeffs[k]
