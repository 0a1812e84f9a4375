"""
Univalence criteria for lifts: Nehari weights, sampled criterion checks,
the threshold functions of the dilatation conditions and region predicates.

Every grid check reports a sampled supremum.  A pass is numerical evidence
on the stated grid, never a proof; reports carry their grid so refinement
studies can be repeated.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import bisect, minimize_scalar

from . import expr as ex
from .errors import DomainError, EvaluationError, ZeroDilatation
from .grid import GridSpec, map_rows
from .schwarzian import phi_quantity

TIE_TOL = 1e-14
_SLACK = 1e-12


# -- Nehari functions ------------------------------------------------------

@dataclass(frozen=True)
class NehariFunction:
    kind: str
    fn: object = None
    label: str = ""

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "quad":
            return 1.0 / (1.0 - x * x) ** 2
        if self.kind == "hyper":
            return 2.0 / (1.0 - x * x)
        if self.kind == "const":
            return np.full_like(x, math.pi ** 2 / 4)
        if isinstance(self.fn, ex.Expr):
            vals = np.real(ex.evaluate(self.fn, x.astype(complex)))
        else:
            vals = np.asarray(self.fn(x), dtype=float) * np.ones_like(x)
        if not np.all(np.isfinite(vals)):
            raise EvaluationError("Nehari weight is not finite on the sample")
        return vals

    @property
    def builtin(self):
        return self.kind in ("quad", "hyper", "const")

    @classmethod
    def quad(cls):
        return cls("quad", label="1/(1-x^2)^2")

    @classmethod
    def hyper(cls):
        return cls("hyper", label="2/(1-x^2)")

    @classmethod
    def const(cls):
        return cls("const", label="pi^2/4")

    @classmethod
    def custom(cls, fn, label=""):
        if isinstance(fn, str):
            label = label or fn
            fn = ex.parse(fn)
        return cls("custom", fn, label or "custom")

    @classmethod
    def from_name(cls, text):
        if text in ("quad", "hyper", "const"):
            return getattr(cls, text)()
        return cls.custom(text)


def normalized_weight(t):
    """``t / (1 - x^2)^2``; the criterion with this weight is the ``t`` criterion."""
    return NehariFunction.custom(lambda x: t / (1.0 - x * x) ** 2, f"{t}/(1-x^2)^2")


@dataclass
class ValidationReport:
    positive: bool
    even: bool
    monotone: bool
    disconjugacy: str
    zero_location: float = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.positive and self.even and self.monotone and \
            self.disconjugacy == "disconjugate-verified"

    def to_json(self):
        return {"quantity": "nehari", "positive": self.positive, "even": self.even,
                "monotone": self.monotone, "disconjugacy": self.disconjugacy,
                "zero_location": self.zero_location, "pass": self.passed}


def validate_nehari(p, grid_n=400, delta=1e-4, atol=1e-10):
    """Check the Nehari axioms numerically.

    Disconjugacy is tested on the even solution of ``u'' + p u = 0`` with
    ``u(0) = 1, u'(0) = 0``: evenness of ``p`` makes positivity on ``[0, 1)``
    enough.  A zero before ``1 - delta`` fails the check; one inside the last
    ``delta`` is inconclusive.
    """
    x = np.linspace(0.0, 1.0 - delta, grid_n + 1)[1:]
    vals = p(x)
    mirrored = p(-x)
    positive = bool(np.all(vals > 0) and p(np.array([0.0]))[0] > 0)
    even = bool(np.all(np.abs(vals - mirrored) <= 1e-12 * np.maximum(np.abs(vals), 1.0)))
    weighted = (1 - x * x) ** 2 * vals
    monotone = bool(np.all(np.diff(weighted) <= 1e-12 * np.max(np.abs(weighted))))

    def rhs(xx, y):
        return [y[1], -float(p(np.array([xx]))[0]) * y[0]]

    def hits_zero(xx, y):
        return y[0]
    hits_zero.terminal = True
    hits_zero.direction = -1

    end = 1.0 - delta / 4
    sol = solve_ivp(rhs, (0.0, end), [1.0, 0.0], method="RK45",
                    atol=atol, rtol=1e-10, events=hits_zero)
    zero = None
    if sol.t_events[0].size:
        zero = float(sol.t_events[0][0])
        status = "fail" if zero < 1.0 - delta else "inconclusive"
    elif sol.status != 0 and sol.status != 1:
        status = "inconclusive"
    else:
        status = "disconjugate-verified"
    return ValidationReport(positive, even, monotone, status, zero,
                            {"u_end": float(sol.y[0, -1]), "x_end": float(sol.t[-1])})


# -- criterion checks --------------------------------------------------------

@dataclass
class CriterionReport:
    quantity: str
    sup_value: float
    witness: complex
    threshold: float
    grid: GridSpec

    @property
    def passed(self):
        return bool(self.sup_value <= self.threshold)

    @property
    def margin(self):
        return self.threshold - self.sup_value

    def to_json(self):
        return {"quantity": self.quantity, "grid": self.grid.to_json(),
                "sup": self.sup_value, "witness": [self.witness.real, self.witness.imag],
                "threshold": self.threshold, "pass": self.passed, "margin": self.margin}


def _phi_grid(m, grid, route):
    pts = grid.points()
    return pts, map_rows(lambda block: phi_quantity(m, block, route=route).phi, pts)


def check_lift_criterion(m, p, grid=GridSpec(), route="harmonic"):
    """Sampled test of ``Phi_f(z) <= 2 p(|z|)``, reported as ``max Phi_f / (2p) <= 1``."""
    pts, phi = _phi_grid(m, grid, route)
    ratio = phi / (2.0 * p(np.abs(pts)))
    k = np.unravel_index(np.argmax(ratio), ratio.shape)
    return CriterionReport("phi/2p", float(ratio[k]), complex(pts[k]), 1.0, grid)


def effective_t(m, grid=GridSpec(), route="harmonic"):
    """``(t_eff, witness)`` with ``t_eff = max (1-|z|^2)^2 Phi_f(z) / 2`` over the grid."""
    pts, phi = _phi_grid(m, grid, route)
    w = 0.5 * (1 - np.abs(pts) ** 2) ** 2 * phi
    k = np.unravel_index(np.argmax(w), w.shape)
    return float(w[k]), complex(pts[k])


# -- threshold functions -----------------------------------------------------

def _check_st(s, t):
    if not (-_SLACK <= s <= t + _SLACK and t <= 1 + _SLACK):
        raise DomainError(f"(s, t) = ({s}, {t}) is outside 0 <= s <= t <= 1")


def r0(s, t):
    """Radius where ``rho`` switches from 0 to its annulus branch."""
    _check_st(s, t)
    return (t - s) / (2 * (1 + math.sqrt(1 + s)))


def rho(s, t, R):
    """Inner radius of the admissible dilatation annulus for ``|omega| <= R``."""
    _check_st(s, t)
    if not R > 0:
        raise DomainError("R must be positive")
    d = t - s
    return max(0.0, R - (R + 1) * d / (d + 2 * (1 + math.sqrt(1 + s))))


def eta(s, t):
    _check_st(s, t)
    return (t - s) / (7 + 4 * math.sqrt(1 + s))


def c_fn(s, t):
    _check_st(s, t)
    return 3 * (t - s) / (4 * (4 + 3 * math.sqrt(1 + s)))


def _c_admissible(alpha, s, t):
    """Largest ``c <= alpha`` the balloon estimate allows once ``c`` is capped by ``alpha``."""
    bound = (t - s) / (alpha + 4 * alpha / (1 + alpha) + 4 + 4 * math.sqrt(1 + s))
    return min(alpha, bound)


def c_star(s, t, tol=1e-10):
    """Improved balloon constant: optimize the cap ``alpha`` instead of fixing 1/3."""
    _check_st(s, t)
    if t - s <= 0:
        return 0.0
    res = minimize_scalar(lambda a: -_c_admissible(a, s, t), bounds=(0.0, 1.0),
                          method="bounded", options={"xatol": tol})
    return max(_c_admissible(res.x, s, t), c_fn(s, t))


def balloon_chain_bound(c, s):
    """Right-hand side ``2s + 2c^2 + 8c^2/(1+c) + 8c(1+sqrt(1+s))`` of the balloon estimate."""
    return 2 * s + 2 * c * c + 8 * c * c / (1 + c) + 8 * c * (1 + math.sqrt(1 + s))


def psi_qc(t):
    """Dilatation bound ``((1 - sqrt t)/(1 + sqrt t))^2`` for the plane extension."""
    if not -_SLACK <= t <= 1 + _SLACK:
        raise DomainError("t must lie in [0, 1]")
    r = math.sqrt(max(t, 0.0))
    return ((1 - r) / (1 + r)) ** 2


def t_hat(s, xtol=1e-12):
    """Root in ``t`` of ``eta(s, t) = psi_qc(t)``; equal to 1 at ``s = 1``."""
    if not -_SLACK <= s <= 1 + _SLACK:
        raise DomainError("s must lie in [0, 1]")
    if s >= 1:
        return 1.0
    return bisect(lambda t: eta(s, t) - psi_qc(t), s, 1.0, xtol=xtol)


# -- dilatation regions ------------------------------------------------------

@dataclass
class RegionReport:
    quantity: str
    passed: bool
    boundary: bool
    n_violations: int
    worst_margin: float
    witness: complex
    grid: GridSpec
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return {"quantity": self.quantity, "grid": self.grid.to_json(),
                "sup": -self.worst_margin,
                "witness": [self.witness.real, self.witness.imag],
                "threshold": 0.0, "pass": self.passed, "margin": self.worst_margin,
                "boundary": self.boundary, "violations": self.n_violations, **self.extra}


def _region(quantity, pts, strict, loose, grid):
    """``strict`` margins must be > 0, ``loose`` margins >= 0 (ties within TIE_TOL)."""
    margins = np.minimum(strict, loose)
    viol = (strict <= TIE_TOL) | (loose < -TIE_TOL)
    tie = (np.abs(strict) <= TIE_TOL) | (np.abs(loose) <= TIE_TOL)
    k = np.unravel_index(np.argmin(margins), margins.shape)
    return RegionReport(quantity, not bool(np.any(viol)), bool(np.any(tie)),
                        int(np.count_nonzero(viol)), float(margins[k]),
                        complex(np.asarray(pts)[k]), grid)


def _omega_values(m, grid):
    pts = grid.points()
    q = ex.evaluate(m.q, pts)
    return pts, q * q


def check_annulus_region(m, s, t, R, grid=GridSpec()):
    """``rho(s,t,R) <= |omega| <= R`` on the grid."""
    inner = rho(s, t, R)
    pts, w = _omega_values(m, grid)
    a = np.abs(w)
    return _region("annulus", pts, np.full(a.shape, np.inf),
                   np.minimum(a - inner, R - a), grid)


def balloon_margins(w, c):
    """Margins of ``0 < 1 - |w|`` and ``1 - |w| <= c |1 - w|`` (plus the implied radius bound)."""
    w = np.asarray(w, dtype=complex)
    a = np.abs(w)
    strict = 1.0 - a
    loose = c * np.abs(1 - w) - (1 - a)
    return strict, loose


def balloon(w, c):
    """Pure predicate for the balloon condition (ties on the strict side fail)."""
    strict, loose = balloon_margins(w, c)
    out = (strict > TIE_TOL) & (loose >= -TIE_TOL)
    return bool(out) if out.ndim == 0 else out


def check_balloon_region(m, c, grid=GridSpec()):
    if not 0 < c < 1:
        raise DomainError("balloon constant must lie in (0, 1)")
    pts, w = _omega_values(m, grid)
    strict, loose = balloon_margins(w, c)
    report = _region("balloon", pts, strict, loose, grid)
    # points satisfying the condition must also clear |w| >= (1-c)/(1+c)
    inside = (strict > TIE_TOL) & (loose >= -TIE_TOL)
    implied = np.abs(w[inside]) >= (1 - c) / (1 + c) - 1e-12
    report.extra["implied_bound_ok"] = bool(np.all(implied))
    return report


def check_disk_region(m, radius, grid=GridSpec()):
    """``|omega| <= radius`` on the grid."""
    pts, w = _omega_values(m, grid)
    return _region("disk", pts, np.full(w.shape, np.inf), radius - np.abs(w), grid)


def reciprocal_conditions(s, t, tol=1e-14):
    """Predicates for the conjugated mapping whose dilatation is ``omega_hat = 1/omega``.

    Both are evaluated on ``omega = 1/omega_hat``:
    ``|omega_hat| > 1/eta``  <=>  ``|omega| < eta`` and
    ``0 < |omega_hat| - 1 <= c |1 - omega_hat|``  <=>  the balloon condition on ``omega``.
    """
    e, c = eta(s, t), c_fn(s, t)

    def _omega(w_hat):
        w_hat = np.asarray(w_hat, dtype=complex)
        if np.any(np.abs(w_hat) < tol):
            raise ZeroDilatation("omega_hat vanishes on the sample")
        return 1.0 / w_hat

    def first(w_hat):
        out = e - np.abs(_omega(w_hat)) > TIE_TOL
        return bool(out) if out.ndim == 0 else out

    def second(w_hat):
        return balloon(_omega(w_hat), c)

    return first, second


def check_reciprocal_region(omega_hat, s, t, grid=GridSpec()):
    """Region check of either conjugated condition for ``omega_hat`` given as an expression."""
    pts = grid.points()
    vals = ex.evaluate(ex.as_expr(omega_hat), pts)
    if np.any(np.abs(vals) < 1e-14):
        k = np.argwhere(np.abs(vals) < 1e-14)[0]
        raise ZeroDilatation("omega_hat vanishes on the sample", pts[tuple(k)])
    w = 1.0 / vals
    first = _region("reciprocal-eta", pts, eta(s, t) - np.abs(w),
                    np.full(w.shape, np.inf), grid)
    strict, loose = balloon_margins(w, c_fn(s, t))
    second = _region("reciprocal-balloon", pts, strict, loose, grid)
    return first, second
