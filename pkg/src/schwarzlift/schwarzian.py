"""
Schwarzian derivatives of analytic functions and of harmonic mappings that
admit a Weierstrass-Enneper lift.

A liftable harmonic mapping ``f = h + conj(g)`` is stored through ``h`` (or,
for a shear, through ``phi = h - lam**2 g``) and the analytic square root
``q`` of its dilatation ``omega = g'/h' = q**2``.  Every point quantity is
derived algebraically from one order-3 jet of ``h`` (or ``phi``) and one
order-2 jet of ``q``; all functions accept a scalar ``z`` or an array of
points and return matching shapes.
"""
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import (CriticalPoint, DegenerateDilatation, DomainError,
                     NotASquare)
from .jets import Jet

CRITICAL_TOL = 1e-12
FD_STEP = 1e-3


@dataclass(frozen=True)
class HarmonicMapping:
    """Liftable harmonic mapping normalized by ``g(0) = 0``.

    Exactly one of ``h`` (direct provenance) and ``phi`` (shear provenance,
    ``h - lam**2 g = phi``) is given.
    """
    q: ex.Expr
    h: ex.Expr = None
    phi: ex.Expr = None
    lam: complex = 1.0
    name: str = ""

    def __post_init__(self):
        if (self.h is None) == (self.phi is None):
            raise ValueError("give exactly one of h and phi")
        if abs(abs(self.lam) - 1.0) > 1e-12:
            raise DomainError("shear direction must have unit modulus")
        object.__setattr__(self, "q", ex.as_expr(self.q))

    @property
    def provenance(self):
        return "direct" if self.h is not None else "shear"

    @property
    def omega(self):
        return ex.Pow(self.q, 2)

    @classmethod
    def direct(cls, h, q, name=""):
        return cls(q=ex.as_expr(q), h=ex.as_expr(h), name=name)

    @classmethod
    def shear_of(cls, phi, q, lam=1.0, name=""):
        return cls(q=ex.as_expr(q), phi=ex.as_expr(phi), lam=complex(lam), name=name)

    @classmethod
    def from_omega(cls, h, omega, name="", check_grid=(48, 64, 0.999)):
        """Build the mapping from ``h`` and a dilatation that must be a square."""
        return cls.direct(h, analytic_sqrt(omega, check_grid), name=name)


def analytic_sqrt(omega, check_grid=(48, 64, 0.999)):
    """Square root of ``omega`` analytic on the disk, or :class:`NotASquare`.

    The order ``m`` of the zero of ``omega`` at the origin must be even; the
    root is ``z**(m/2) * sqrt(omega / z**m)`` on the principal branch.  A
    sign flip of that root between neighbouring samples of a polar check
    grid (along radii or around circles) means no continuous branch is
    being tracked and is rejected.
    """
    omega = ex.as_expr(omega)
    c = ex.eval_jet(omega, 0.0, 16).coeffs
    scale = max(np.max(np.abs(c)), 1e-300)
    nz = np.nonzero(np.abs(c) > 1e-13 * scale)[0]
    if nz.size == 0:
        return ex.Const(0.0)
    m = int(nz[0])
    if m % 2:
        raise NotASquare(f"dilatation has a zero of odd order {m} at the origin", 0.0)
    if m == 0:
        q = ex.Sqrt(omega)
    else:
        q = ex.Mul(ex.Pow(ex.Var(), m // 2), ex.Sqrt(ex.Deflate(omega, m)))
    if check_grid is not None:
        nr, nt, rmax = check_grid
        r = np.linspace(rmax / nr, rmax, nr)[:, None]
        t = 2 * np.pi * np.arange(nt)[None, :] / nt
        zz = r * np.exp(1j * t)
        vals = ex.evaluate(q, zz)
        for axis, nxt in ((0, vals[1:]), (1, np.roll(vals, -1, axis=1))):
            prev = vals[:-1] if axis == 0 else vals
            step = np.abs(nxt - prev)
            flip = (step > 1e-3) & (np.abs(nxt + prev) < step)
            if np.any(flip):
                k = np.argwhere(flip)[0]
                where = "a radius" if axis == 0 else "a circle"
                raise NotASquare(f"principal square root of the dilatation jumps along {where}",
                                 zz[k[0], k[1]])
    return q


# -- local data -------------------------------------------------------------

def _as_points(z):
    return z if np.ndim(z) else complex(z)


def _check_critical(d0, z, what):
    bad = np.abs(d0) < CRITICAL_TOL
    if np.any(bad):
        zz = np.atleast_1d(np.asarray(z))
        raise CriticalPoint(f"{what} vanishes", zz[tuple(np.argwhere(np.atleast_1d(bad))[0])]
                            if zz.size > 1 else zz.reshape(-1)[0])


def _ratio_terms(fp):
    """``(f''/f', Sf)`` from the order-2 jet ``[f', f'', f'''/2]`` of ``f'``."""
    a0, a1, a2 = fp.coeffs[0], fp.coeffs[1], fp.coeffs[2]
    pre = a1 / a0
    return pre, 2.0 * a2 / a0 - 1.5 * pre * pre


def _local(m, z):
    """Jets ``(h', q)`` of order 2 at ``z`` for any provenance."""
    z = _as_points(z)
    qj = ex.eval_jet(m.q, z, 2)
    if m.provenance == "direct":
        hp = ex.eval_jet(m.h, z, 3).deriv()
        _check_critical(hp.coeffs[0], z, "h'")
        return hp, qj
    pp = ex.eval_jet(m.phi, z, 3).deriv()
    _check_critical(pp.coeffs[0], z, "phi'")
    denom = 1.0 - (m.lam ** 2) * qj * qj
    _check_degenerate(denom.coeffs[0], z)
    return pp / denom, qj


def _check_degenerate(d0, z):
    bad = np.abs(d0) < CRITICAL_TOL
    if np.any(bad):
        zz = np.atleast_1d(np.asarray(z))
        raise DegenerateDilatation("1 - lam^2 omega vanishes",
                                   zz[tuple(np.argwhere(np.atleast_1d(bad))[0])]
                                   if zz.size > 1 else zz.reshape(-1)[0])


def _out(x):
    return x if np.ndim(x) else x.item()


# -- analytic functions ------------------------------------------------------

def pre_schwarzian(f, z):
    """``f''(z)/f'(z)``."""
    z = _as_points(z)
    fp = ex.eval_jet(ex.as_expr(f), z, 3).deriv()
    _check_critical(fp.coeffs[0], z, "f'")
    return _out(_ratio_terms(fp)[0])


def schwarzian_analytic(f, z):
    """``Sf = (f''/f')' - (f''/f')**2 / 2`` from the order-3 jet of ``f``."""
    z = _as_points(z)
    fp = ex.eval_jet(ex.as_expr(f), z, 3).deriv()
    _check_critical(fp.coeffs[0], z, "f'")
    return _out(_ratio_terms(fp)[1])


def fd_schwarzian(f, z, step=FD_STEP):
    """Schwarzian from differences of the values of ``f`` (test oracle).

    Uses the 4-point complex stencil ``z + step * i**j``: for analytic ``f``
    the discrete Fourier sums over the stencil recover ``f'``, ``f''`` and
    ``f'''`` with O(step**4) aliasing error.
    """
    f = ex.as_expr(f)
    z = complex(z)
    if abs(z) + abs(step) >= 1.0:
        raise DomainError("finite-difference stencil leaves the disk")
    h = step
    roots = np.array([1, 1j, -1, -1j])
    v = np.array([ex.evaluate(f, z + h * w) for w in roots])
    d1 = np.sum(v * roots ** -1) / (4 * h)
    d2 = 2 * np.sum(v * roots ** -2) / (4 * h ** 2)
    d3 = 6 * np.sum(v * roots ** -3) / (4 * h ** 3)
    if abs(d1) < CRITICAL_TOL:
        raise CriticalPoint("f' vanishes", z)
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def shifted_pre_schwarzian(f, z):
    """``f''/f' - 2 conj(z)/(1 - |z|^2)``, the quantity bounded by the distortion theorem."""
    z = _as_points(z)
    return pre_schwarzian(f, z) - 2 * np.conj(z) / (1 - np.abs(z) ** 2)


# -- harmonic mappings -------------------------------------------------------

def _harmonic_terms(hp, qj):
    pre, sh = _ratio_terms(hp)
    q0, q1, q2 = qj.coeffs[0], qj.coeffs[1], 2.0 * qj.coeffs[2]
    n2 = 1.0 + np.abs(q0) ** 2
    sf = (sh + 2 * np.conj(q0) / n2 * (q2 - q1 * pre)
          - 4 * (q1 * np.conj(q0) / n2) ** 2)
    return sf, q0, q1


def harmonic_schwarzian(m, z):
    hp, qj = _local(m, z)
    return _out(_harmonic_terms(hp, qj)[0])


def curvature_term(m, z):
    """``e^{2 sigma} |K| = 4|q'|^2 / (1 + |q|^2)^2``."""
    qj = ex.eval_jet(_q_of(m), _as_points(z), 1)
    q0, q1 = qj.coeffs[0], qj.coeffs[1]
    return _out(4 * np.abs(q1) ** 2 / (1 + np.abs(q0) ** 2) ** 2)


def _q_of(m):
    return m.q if isinstance(m, HarmonicMapping) else ex.as_expr(m)


def gauss_curvature(m, z):
    """``K = -4|q'|^2 / (|h'|^2 (1 + |q|^2)^4)``."""
    hp, qj = _local(m, z)
    q0, q1 = qj.coeffs[0], qj.coeffs[1]
    return _out(-4 * np.abs(q1) ** 2 / (np.abs(hp.coeffs[0]) ** 2 * (1 + np.abs(q0) ** 2) ** 4))


def conformal_factor(m, z):
    """``e^sigma = |h'| + |g'| = |h'| (1 + |q|^2)``."""
    hp, qj = _local(m, z)
    return _out(np.abs(hp.coeffs[0]) * (1 + np.abs(qj.coeffs[0]) ** 2))


def jacobian(m, z):
    hp, qj = _local(m, z)
    return _out(np.abs(hp.coeffs[0]) ** 2 * (1 - np.abs(qj.coeffs[0]) ** 4))


def shear_schwarzian(phi, q, z, lam=1.0):
    """Schwarzian of the lift of the shear ``h - lam^2 g = phi`` with ``omega = q^2``.

    Written directly in ``phi`` and ``q``.  A direction ``lam`` enters only
    through ``lam * q``, which leaves the Schwarzian of the lift unchanged
    in form.
    """
    z = _as_points(z)
    pp = ex.eval_jet(ex.as_expr(phi), z, 3).deriv()
    _check_critical(pp.coeffs[0], z, "phi'")
    qj = ex.eval_jet(ex.as_expr(q), z, 2) * complex(lam)
    return _out(_shear_terms(pp, qj))


def _shear_terms(pp, qj):
    pre, sphi = _ratio_terms(pp)
    q0, q1, q2 = qj.coeffs[0], qj.coeffs[1], 2.0 * qj.coeffs[2]
    one_m = 1.0 - q0 * q0
    _check_degenerate(one_m, pp.center)
    a2 = np.abs(q0) ** 2
    n2 = 1.0 + a2
    return (sphi
            + 2 * (q0 / one_m + np.conj(q0) / n2) * (q2 - q1 * pre)
            + 2 * q1 ** 2 * (1 - a2 + 2 * q0 ** 2 * a2) / (one_m ** 2 * n2)
            - 4 * (q1 * np.conj(q0) / n2) ** 2)


@dataclass(frozen=True)
class PointReport:
    """Point (or array) values behind the lift criterion."""
    z: complex
    Sf: complex
    curvature_term: float
    phi: float
    weighted_phi: float
    conformal_factor: float
    jacobian: float


def phi_quantity(m, z, route="harmonic"):
    """``Phi_f(z) = |Sf(z)| + e^{2 sigma}|K|`` with the supporting values.

    ``route="shear"`` evaluates ``Sf`` through :func:`shear_schwarzian`
    (shear provenance only); the default uses the harmonic formula in
    ``h'`` and ``q``.
    """
    z = _as_points(z)
    hp, qj = _local(m, z)
    if route == "shear":
        if m.provenance != "shear":
            raise ValueError("the shear route needs a mapping given by phi")
        pp = ex.eval_jet(m.phi, z, 3).deriv()
        sf = _shear_terms(pp, qj * m.lam)
        q0, q1 = qj.coeffs[0], qj.coeffs[1]
    elif route == "harmonic":
        sf, q0, q1 = _harmonic_terms(hp, qj)
    else:
        raise ValueError(f"unknown route {route!r}")
    a2 = np.abs(q0) ** 2
    curv = 4 * np.abs(q1) ** 2 / (1 + a2) ** 2
    phi = np.abs(sf) + curv
    hp0 = np.abs(hp.coeffs[0])
    return PointReport(
        z=z, Sf=_out(sf), curvature_term=_out(curv), phi=_out(phi),
        weighted_phi=_out((1 - np.abs(z) ** 2) ** 2 * phi),
        conformal_factor=_out(hp0 * (1 + a2)),
        jacobian=_out(hp0 ** 2 * (1 - a2 ** 2)))


def dilatation_jet(m, z, order=2):
    """Jet of ``omega = q^2`` at ``z``."""
    qj = ex.eval_jet(m.q, _as_points(z), order)
    return qj * qj


def q_jet(m, z, order=2) -> Jet:
    return ex.eval_jet(m.q, _as_points(z), order)
