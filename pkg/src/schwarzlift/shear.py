"""
Shears of locally univalent functions and the non-univalent construction
for domains without the chord-arc property.

A shear of ``phi`` in the direction ``lam`` is ``f = h + conj(g)`` with
``h - lam^2 g = phi`` and dilatation ``omega = g'/h'``; hence
``h' = phi' / (1 - lam^2 omega)`` and ``g' = omega h'``.  Both parts are
produced as truncated power series at the origin with ``g(0) = 0``.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import (DegenerateShear, DomainError, NotASquare,
                     PreconditionViolation, TruncationWarning)
from .quadrature import QuadratureSpec, segment_integral
from .schwarzian import HarmonicMapping, analytic_sqrt

DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class ShearSpec:
    phi: ex.Expr
    omega: ex.Expr = None
    lam: complex = 1.0
    order: int = ex.SHEAR_ORDER
    q: ex.Expr = None
    check_radius: float = 0.9

    def __post_init__(self):
        if abs(abs(complex(self.lam)) - 1) > 1e-12:
            raise DomainError("direction must have unit modulus")
        if self.omega is None and self.q is None:
            raise ValueError("give omega or q")
        object.__setattr__(self, "phi", ex.as_expr(self.phi))
        if self.q is not None:
            object.__setattr__(self, "q", ex.as_expr(self.q))
            if self.omega is None:
                object.__setattr__(self, "omega", ex.Pow(self.q, 2))
        object.__setattr__(self, "omega", ex.as_expr(self.omega))


@dataclass
class ShearResult:
    h_series: ex.PowerSeries
    g_series: ex.PowerSeries
    omega: ex.Expr
    lam: complex = 1.0
    q: ex.Expr = None
    residual: float = 0.0
    tail: float = 0.0
    liftable: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def order(self):
        return self.h_series.order

    def value(self, z):
        """``f(z) = h(z) + conj(g(z))`` from the series."""
        return self.h_series(z) + np.conj(self.g_series(z))

    def to_mapping(self):
        """The shear as a direct mapping with series-backed ``h``."""
        if self.q is None:
            raise NotASquare("the dilatation of this shear has no analytic square root")
        return HarmonicMapping.direct(ex.Series(self.h_series), self.q)

    def to_json(self):
        out = {"h": self.h_series.to_pairs(), "g": self.g_series.to_pairs(),
               "order": self.order, "residual": self.residual,
               "tail": self.tail, "liftable": self.liftable,
               "lambda": [complex(self.lam).real, complex(self.lam).imag]}
        out.update(self.extra)
        return out


def _sample_disk(radius, nr=24, nt=48):
    r = np.linspace(0, radius, nr)[:, None]
    return r * np.exp(2j * np.pi * np.arange(nt)[None, :] / nt)


def shear(spec):
    """Construct the shear described by ``spec``."""
    m = spec.order
    lam2 = complex(spec.lam) ** 2
    pts = _sample_disk(spec.check_radius)
    denom = 1 - lam2 * ex.evaluate(spec.omega, pts)
    if np.any(np.abs(denom) < DEGENERATE_TOL):
        k = np.argwhere(np.abs(denom) < DEGENERATE_TOL)[0]
        raise DegenerateShear("1 - lam^2 omega vanishes", pts[tuple(k)])
    phi_s = ex.taylor_expand(spec.phi, m + 1)
    om_s = ex.taylor_expand(spec.omega, m)
    one = np.zeros(m + 1, dtype=complex)
    one[0] = 1.0
    hp = ex.series_div(phi_s.derivative(), ex.PowerSeries(one - lam2 * om_s.coeffs))
    gp = ex.series_mul(om_s, hp)
    h = ex.series_antiderivative(hp, phi_s.coeffs[0])
    g = ex.series_antiderivative(gp, 0.0)
    q = spec.q
    liftable = True
    if q is None:
        try:
            q = analytic_sqrt(spec.omega, check_grid=(24, 48, spec.check_radius))
        except NotASquare:
            q, liftable = None, False
    return _finish(spec.phi, h, g, spec.omega, spec.lam, q, liftable, pts, spec.check_radius)


def _finish(phi, h, g, omega, lam, q, liftable, pts, radius):
    lam2 = complex(lam) ** 2
    resid = np.abs(h(pts) - lam2 * g(pts) - ex.evaluate(phi, pts))
    tail = max(h.tail_estimate(radius), g.tail_estimate(radius))
    if tail > 1e-9:
        warnings.warn(f"series tail estimate {tail:.3g} at |z| = {radius} exceeds 1e-9",
                      TruncationWarning, stacklevel=3)
    return ShearResult(h, g, omega, complex(lam), q, float(np.max(resid)), tail, liftable)


def chord_arc_shear_bound(M):
    """Dilatation bound ``1/(2M + 1)`` under which shears onto a chord-arc domain stay univalent."""
    if not M >= 1:
        raise DomainError("chord-arc constants are at least 1")
    return 1.0 / (2 * M + 1)


def directional_shear_bound(M_lambda):
    """Same bound for shears in direction ``lam`` from the directional constant ``M(lam)``."""
    return chord_arc_shear_bound(M_lambda)


# -- non-univalent construction ---------------------------------------------

def epsilon_from_c(c):
    return c / (2 - c)


def c_from_epsilon(eps):
    return 2 * eps / (1 + eps)


@dataclass
class CollisionCertificate:
    w1: complex
    w2: complex
    z1: complex
    z2: complex
    F1: complex
    F2: complex
    omega_sup: float
    epsilon: float

    @property
    def gap(self):
        return abs(self.F1 - self.F2)

    @property
    def certified(self):
        return self.gap <= 1e-7 and self.omega_sup < self.epsilon

    def to_json(self):
        def pair(v):
            return [complex(v).real, complex(v).imag]
        return {"w1": pair(self.w1), "w2": pair(self.w2), "z1": pair(self.z1),
                "z2": pair(self.z2), "F1": pair(self.F1), "F2": pair(self.F2),
                "gap": self.gap, "omega_sup": self.omega_sup,
                "epsilon": self.epsilon, "certified": self.certified}


def invert(phi, w, start=0.0, steps=16, tol=1e-12, max_iter=50):
    """``phi^{-1}(w)`` by Newton's method continued along the segment from ``phi(start)`` to ``w``.

    The continuation step is halved whenever Newton fails to converge or
    leaves the disk.
    """
    phi = ex.as_expr(phi)
    z = complex(start)
    w0 = complex(ex.evaluate(phi, z))
    w = complex(w)
    t, dt = 0.0, 1.0 / steps
    while t < 1.0:
        dt = min(dt, 1.0 - t)
        znew = _newton(phi, z, w0 + (w - w0) * (t + dt), tol, max_iter)
        if znew is None:
            dt /= 2
            if dt < 1e-8:
                raise DomainError(f"could not continue the inverse to w = {w}")
            continue
        z, t = znew, t + dt
        dt *= 2
    return z


def _newton(phi, z, target, tol, max_iter):
    for _ in range(max_iter):
        jet = ex.eval_jet(phi, z, 1).coeffs
        dz = (jet[0] - target) / jet[1]
        z = complex(z - dz)
        if abs(z) >= 1:
            return None
        if abs(dz) < tol:
            return z
    return None


def converse_construction(phi, Psi, w1, w2, c, order=ex.SHEAR_ORDER,
                          sample=(40, 96, 0.99), quad=QuadratureSpec(), check_radius=0.5):
    """Non-univalent horizontal shear of ``phi`` built from a folding map ``Psi``.

    ``Psi`` is analytic on ``Omega = phi(D)`` with ``|Psi' - 1| < c`` and
    ``Psi(w1) = Psi(w2)`` for ``w1 != w2`` on a horizontal line.  With
    ``psi = Psi - id`` the shear has ``g' = phi' psi'(phi) / 2``, ``g(0) = 0``
    and ``h = phi + g``; its dilatation is bounded by ``c/(2 - c)`` and
    ``F = f o phi^{-1} = w + 2 Re g(phi^{-1}(w))`` identifies ``w1`` and ``w2``.
    """
    phi = ex.as_expr(phi)
    Psi = ex.as_expr(Psi)
    w1, w2 = complex(w1), complex(w2)
    if abs(w1 - w2) < 1e-12:
        raise PreconditionViolation("collision points coincide")
    if abs(w1.imag - w2.imag) > 1e-9:
        raise PreconditionViolation("collision points are not on a horizontal line")
    if abs(ex.evaluate(Psi, w1) - ex.evaluate(Psi, w2)) > 1e-9:
        raise PreconditionViolation("Psi(w1) != Psi(w2)")

    nr, nt, rmax = sample
    pts = np.linspace(0, rmax, nr)[:, None] * np.exp(2j * np.pi * np.arange(nt) / nt)[None, :]
    omega_pts = ex.evaluate(phi, pts)
    dpsi = ex.Sub(ex.Diff(Psi), ex.Const(1.0))
    dev = np.abs(ex.evaluate(dpsi, omega_pts))
    if not np.all(dev < c):
        k = np.argmax(dev)
        raise PreconditionViolation(
            f"|Psi' - 1| = {dev.flat[k]:.6g} >= c = {c} at w = {omega_pts.flat[k]:.6g}")

    dpsi_phi = ex.Compose(dpsi, phi)
    omega = ex.Div(dpsi_phi, ex.Add(ex.Const(2.0), dpsi_phi))
    gprime = ex.Mul(ex.Const(0.5), ex.Mul(ex.Diff(phi), dpsi_phi))

    g = ex.series_antiderivative(ex.taylor_expand(gprime, order), 0.0)
    phi_s = ex.taylor_expand(phi, order + 1)
    h = ex.PowerSeries(phi_s.coeffs + g.coeffs)
    result = _finish(phi, h, g, omega, 1.0, None, False,
                     _sample_disk(check_radius), check_radius)

    def g_at(z):
        return segment_integral(lambda zz: ex.evaluate(gprime, zz), 0.0, z, quad)

    z1 = invert(phi, w1)
    z2 = invert(phi, w2)
    F1 = w1 + 2 * g_at(z1).real
    F2 = w2 + 2 * g_at(z2).real
    omega_sup = float(np.max(np.abs(ex.evaluate(omega, pts))))
    cert = CollisionCertificate(w1, w2, z1, z2, F1, F2, omega_sup, epsilon_from_c(c))
    result.extra["certificate"] = cert.to_json()
    return result, cert
