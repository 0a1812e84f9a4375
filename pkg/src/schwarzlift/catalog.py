"""
Named test functions: power maps with prescribed Schwarzian norm, the
worked examples, dilatation families with controlled range and the
folding-map fixture for the non-univalent shear.
"""
import cmath
import math

import numpy as np
from scipy.optimize import brentq

from . import expr as ex


def power_map(alpha):
    """``((1+z)/(1-z))^alpha``, or ``log((1+z)/(1-z))`` when ``alpha = 0``.

    Both have Schwarzian ``2(1 - alpha^2)/(1 - z^2)^2``; the logarithm is the
    nondegenerate member of the family at ``alpha = 0``.
    """
    if alpha == 0:
        return ex.parse("log((1+z)/(1-z))")
    return ex.parse(f"pow((1+z)/(1-z), {alpha!r})")


def schwarzian_norm_map(s):
    """Analytic map with ``Sh = 2s/(1-z^2)^2`` and so ``||Sh|| = 2s``."""
    if not 0 <= s <= 1:
        raise ValueError("s must lie in [0, 1]")
    return power_map(math.sqrt(1 - s))


def pommerenke_extremal(t):
    """``(1/(2 sqrt(1+t))) ((1+z)/(1-z))^sqrt(1+t)``; ``|f''/f'(0)| = 2 sqrt(1+t)``."""
    a = math.sqrt(1 + t)
    return ex.Mul(ex.Const(1 / (2 * a)), power_map(a))


def rotated(f, theta):
    """``f(e^{i theta} z)``; rotations preserve the Schwarzian norm."""
    return ex.Compose(ex.as_expr(f), ex.Mul(ex.Const(cmath.exp(1j * theta)), ex.Var()))


def example_decreasing_h():
    return ex.parse("z/(1+z)")


def example_pole_omega(R):
    return ex.parse(f"{2 * R!r}/(1-z)")


def example_log_q(t):
    """``a log(1/(1-z))`` with the largest admissible ``a`` for the target ``t``."""
    a = (math.sqrt(1 + 8 * t) - 1) / 8
    return ex.parse(f"{a!r}*log(1/(1-z))")


def quadratic_q(R):
    return ex.Mul(ex.Const(math.sqrt(R)), ex.Var())


def mobius_q(r, a):
    """``r (z - a)/(1 - conj(a) z)``, bounded by ``r``."""
    a = complex(a)
    return ex.Mul(ex.Const(r), ex.Div(ex.Sub(ex.Var(), ex.Const(a)),
                                      ex.Sub(ex.Const(1.0), ex.Mul(ex.Const(a.conjugate()), ex.Var()))))


def bounded_q(r, kind, rng=None):
    """Member of a family of analytic ``q`` with ``|q| <= r`` on the disk."""
    rng = np.random.default_rng(0) if rng is None else rng
    z = ex.Var()
    if kind == "linear":
        return ex.Mul(ex.Const(r * cmath.exp(2j * math.pi * rng.uniform())), z)
    if kind == "mobius":
        a = 0.8 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        return mobius_q(r, a)
    if kind == "square":
        return ex.Mul(ex.Const(r), ex.Pow(z, 2))
    if kind == "mean":
        return ex.Mul(ex.Const(r / 2), ex.Add(z, ex.Pow(z, 2)))
    if kind == "exp":
        return ex.Mul(ex.Const(r), ex.Exp(ex.Sub(z, ex.Const(1.0))))
    if kind == "const":
        return ex.Const(r * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform()))
    raise ValueError(f"unknown family {kind!r}")


BOUNDED_KINDS = ("linear", "mobius", "square", "mean", "exp", "const")


def annulus_q(inner, outer, theta=0.0):
    """``q`` with ``inner <= |q| <= outer`` on the disk (``0 < inner <= outer``).

    ``|outer exp(k (z - 1)/2)| = outer exp(k (Re z - 1)/2)`` ranges over
    ``(outer e^{-k}, outer)``.
    """
    k = math.log(outer / inner) if inner > 0 else 0.0
    u = ex.Mul(ex.Const(cmath.exp(1j * theta)), ex.Var()) if theta else ex.Var()
    return ex.Mul(ex.Const(outer), ex.Exp(ex.Mul(ex.Const(k / 2), ex.Sub(u, ex.Const(1.0)))))


def balloon_q(a, b):
    """``q = i sqrt(a + b z)``, so ``omega = -(a + b z)`` sits near ``-1`` for ``a`` near 1."""
    return ex.Mul(ex.Const(1j), ex.Sqrt(ex.Add(ex.Const(a), ex.Mul(ex.Const(b), ex.Var()))))


# -- non-univalent shear fixture -------------------------------------------

FOLD_C = 0.3
FOLD_KAPPA = 0.3
FOLD_HEIGHT = -0.5


def slit_map():
    """``i z/(1-z)^2``: the disk onto the plane minus the slit ``{-i a : a >= 1/4}``."""
    return ex.parse("i*z/(1-z)^2")


def folding_map(c=FOLD_C, kappa=FOLD_KAPPA):
    """``Psi(w) = w + psi(w)`` on the slit plane with ``psi' = c (s - kappa)/(s + kappa)``.

    Here ``s = sqrt(1/4 - i w)`` maps the slit plane to the right half-plane,
    so ``|Psi' - 1| < c``; ``psi(0) = 0`` and ``Psi(-conj w) = -conj Psi(w)``.
    """
    s = "sqrt(-i*z+0.25)"
    body = f"({s})^2/2 - 2*{kappa!r}*{s} + 2*{kappa!r}^2*log({s}+{kappa!r})"
    Psi0 = ex.parse(f"z + {c!r}*2i*({body})")
    return ex.Sub(Psi0, ex.Const(ex.evaluate(Psi0, 0.0)))


def folding_fixture(c=FOLD_C, kappa=FOLD_KAPPA, height=FOLD_HEIGHT):
    """``(phi, Psi, w1, w2, c)`` with ``w2 = -conj(w1)`` and ``Re Psi(w1) = 0``.

    By the reflection symmetry ``Psi(w1) = Psi(w2)`` follows from the real
    part vanishing, and ``w1`` is found by a bracketed root search along the
    horizontal line ``Im w = height``.
    """
    phi = slit_map()
    Psi = folding_map(c, kappa)

    def re_psi(x):
        return ex.evaluate(Psi, x + 1j * height).real

    xs = np.linspace(1e-6, 2.0, 401)
    vals = np.array([re_psi(x) for x in xs])
    k = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
    if k.size == 0:
        raise ValueError("no collision pair on this horizontal line")
    x = brentq(re_psi, xs[k[0]], xs[k[0] + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return phi, Psi, complex(x, height), complex(-x, height), c
