"""
Weierstrass-Enneper lift of a liftable harmonic mapping and surface meshes.

For ``f = h + conj(g)`` with ``g' = q^2 h'`` the lifted surface is

    (U, V, W) = (Re f, Im f, 2 Im int_0^z q h' dzeta),

using ``+q h'`` as the square root of ``h' g'``.  Both integrals are taken
by composite Gauss-Legendre quadrature along straight segments from the
origin, with one refinement to certify convergence.
"""
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import CriticalPoint, IoError, QuadratureNotConverged
from .grid import GridSpec
from .quadrature import QuadratureSpec, arc_integral, segment_integral
from .schwarzian import CRITICAL_TOL, HarmonicMapping, gauss_curvature


def _hprime(m, zeta, q=None):
    if m.provenance == "direct":
        return ex.evaluate(ex.Diff(m.h), zeta)
    q = ex.evaluate(m.q, zeta) if q is None else q
    return ex.evaluate(ex.Diff(m.phi), zeta) / (1 - m.lam ** 2 * q * q)


def _integrand_data(m, zeta):
    """Values of ``h'`` and ``q`` at the points ``zeta``."""
    q = ex.evaluate(m.q, zeta)
    hp = _hprime(m, zeta, q)
    bad = np.abs(hp) < CRITICAL_TOL
    if np.any(bad):
        zz = np.atleast_1d(zeta)
        raise CriticalPoint("h' vanishes on the integration path", zz[np.argwhere(np.atleast_1d(bad))[0][0]]
                            if zz.ndim == 1 else zz[tuple(np.argwhere(bad)[0])])
    return hp, q


def _secant_zero(m, z0, z1, max_iter=40):
    f0, f1 = complex(_hprime(m, z0)), complex(_hprime(m, z1))
    for _ in range(max_iter):
        if f1 == f0:
            break
        z2 = z1 - f1 * (z1 - z0) / (f1 - f0)
        z0, f0 = z1, f1
        z1, f1 = z2, complex(_hprime(m, z2))
        if abs(z1 - z0) <= 1e-15 * (1 + abs(z1)):
            break
    return z1, abs(f1)


def _check_path(m, a, b, per_piece=4, max_segment=0.05):
    """Raise :class:`CriticalPoint` if ``h'`` vanishes on a segment ``[a, b]``.

    ``h'`` is sampled at equispaced points including both ends.  Between
    neighbours its linear model locates a candidate zero, which is refined
    by secant steps and accepted when it lies on the segment.
    """
    d = b - a
    longest = float(np.max(np.abs(d))) if d.size else 0.0
    if longest == 0.0:
        return
    n = per_piece * max(1, int(np.ceil(longest / max_segment)))
    s = np.linspace(0.0, 1.0, n + 1).reshape((n + 1,) + (1,) * a.ndim)
    nodes = a[None] + d[None] * s
    v = _hprime(m, nodes)
    bad = np.abs(v) < CRITICAL_TOL
    if np.any(bad):
        raise CriticalPoint("h' vanishes on the integration path", nodes[tuple(np.argwhere(bad)[0])])
    with np.errstate(divide="ignore", invalid="ignore"):
        t = v[:-1] / (v[:-1] - v[1:])
    cand = np.isfinite(t) & (t.real > -0.5) & (t.real < 1.5) & (np.abs(t.imag) < 0.5)
    for idx in np.argwhere(cand):
        k, rest = idx[0], tuple(idx[1:])
        z, res = _secant_zero(m, complex(nodes[(k,) + rest]), complex(nodes[(k + 1,) + rest]))
        seg = complex(d[rest])
        u = (z - complex(a[rest])) / seg
        if res < CRITICAL_TOL and -1e-12 <= u.real <= 1 + 1e-12 and abs(u.imag * seg) < 1e-9:
            raise CriticalPoint("h' vanishes on the integration path", z)


def _both(m):
    # stack [q h', q^2 h'] along a trailing axis so one pass gives W and g
    def F(zeta):
        hp, q = _integrand_data(m, zeta)
        return np.stack([q * hp, q * q * hp], axis=-1)
    return F


def _checked(integrate, quad):
    coarse = integrate(quad)
    fine = integrate(quad.refined())
    err = np.max(np.abs(fine - coarse)) if np.size(fine) else 0.0
    if err > quad.tol:
        raise QuadratureNotConverged(
            f"refinement changed the integral by {err:.3g} > {quad.tol:g}")
    return fine


def _segment_pair(m, a, b, quad):
    """``(int q h', int q^2 h')`` over the segments ``[a, b]`` (vectorized)."""
    F = _both(m)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a, b = np.broadcast_arrays(a, b)
    _check_path(m, a, b)
    if not np.any(a != b):
        return np.zeros(a.shape, dtype=complex), np.zeros(a.shape, dtype=complex)

    def integrate(qs):
        # trailing axis of F is carried through segment_integral's broadcasting
        return segment_integral(lambda zz: F(zz[..., 0]), a[..., None], b[..., None], qs)
    out = _checked(integrate, quad)
    return out[..., 0], out[..., 1]


def _h_values(m, z, g):
    if m.provenance == "direct":
        return ex.evaluate(m.h, z)
    return ex.evaluate(m.phi, z) + m.lam ** 2 * g


def lift_point(m, z, quad=QuadratureSpec()):
    """``(U, V, W)`` at ``z`` (scalar or array); ``W(0) = 0``."""
    z_arr = np.asarray(z, dtype=complex)
    I, g = _segment_pair(m, np.zeros_like(z_arr), z_arr, quad)
    f = _h_values(m, z_arr, g) + np.conj(g)
    U, V, W = f.real, f.imag, 2 * I.imag
    if np.ndim(z) == 0:
        return float(U), float(V), float(W)
    return U, V, W


def path_independence_check(m, z, quad=QuadratureSpec()):
    """Discrepancy of ``W`` between the straight segment and the radial-then-arc path."""
    z = complex(z)
    I_straight, _ = _segment_pair(m, 0j, z, quad)
    r, theta = abs(z), np.angle(z)
    F = _both(m)
    I_radial, _ = _segment_pair(m, 0j, complex(r), quad)
    I_arc = _checked(lambda qs: arc_integral(lambda zz: F(zz)[..., 0], r, 0.0, theta, qs), quad)
    return abs(2 * complex(I_straight).imag - 2 * (complex(I_radial) + I_arc).imag)


@dataclass
class SurfaceMesh:
    """Triangulated lift over a polar grid.

    Vertex 0 is the origin; vertex ``1 + (k - 1) * ntheta + j`` sits at
    radius ``k * r_max / nr`` and angle ``2 pi j / ntheta`` for
    ``k = 1..nr``.
    """
    vertices: np.ndarray
    gauss_curvature: np.ndarray
    faces: np.ndarray
    grid: GridSpec
    params: np.ndarray

    @property
    def n_vertices(self):
        return len(self.vertices)

    def vertex_index(self, k, j):
        return 0 if k == 0 else 1 + (k - 1) * self.grid.ntheta + (j % self.grid.ntheta)


def mesh_parameters(grid):
    r = grid.r_max * np.arange(1, grid.nr + 1) / grid.nr
    ring = r[:, None] * np.exp(1j * grid.angles())[None, :]
    return np.concatenate([[0j], ring.reshape(-1)])


def mesh_faces(grid):
    nt = grid.ntheta
    j = np.arange(nt)
    jn = (j + 1) % nt
    faces = [np.stack([np.zeros(nt, dtype=int), 1 + j, 1 + jn], axis=1)]
    for k in range(1, grid.nr):
        a = 1 + (k - 1) * nt + j
        b = 1 + (k - 1) * nt + jn
        c = 1 + k * nt + jn
        d = 1 + k * nt + j
        faces.append(np.stack([a, d, c], axis=1))
        faces.append(np.stack([a, c, b], axis=1))
    return np.concatenate(faces, axis=0)


def build_mesh(m, grid=GridSpec(), quad=QuadratureSpec()):
    """Surface mesh with ``W`` accumulated ring by ring along each ray."""
    params = mesh_parameters(grid)
    rings = params[1:].reshape(grid.nr, grid.ntheta)
    I = np.zeros_like(rings)
    g = np.zeros_like(rings)
    prev = np.zeros(grid.ntheta, dtype=complex)
    acc_I = np.zeros(grid.ntheta, dtype=complex)
    acc_g = np.zeros(grid.ntheta, dtype=complex)
    for k in range(grid.nr):
        try:
            dI, dg = _segment_pair(m, prev, rings[k], quad)
        except (CriticalPoint, QuadratureNotConverged) as exc:
            raise type(exc)(f"{exc} (grid ring {k + 1} of {grid.nr})") from exc
        acc_I = acc_I + dI
        acc_g = acc_g + dg
        I[k], g[k] = acc_I, acc_g
        prev = rings[k]
    I = np.concatenate([[0j], I.reshape(-1)])
    g = np.concatenate([[0j], g.reshape(-1)])
    f = _h_values(m, params, g) + np.conj(g)
    verts = np.stack([f.real, f.imag, 2 * I.imag], axis=1)
    K = np.asarray(gauss_curvature(m, params), dtype=float)
    return SurfaceMesh(verts, K, mesh_faces(grid), grid, params)


# -- export -----------------------------------------------------------------

def _fmt(x):
    s = "%.9g" % x
    return "0" if s == "-0" else s


def export_mesh(mesh, fmt="obj"):
    """Mesh as OBJ or ASCII PLY bytes; output depends only on the mesh."""
    lines = []
    if fmt == "obj":
        lines += ["v " + " ".join(_fmt(c) for c in v) for v in mesh.vertices]
        lines += ["f %d %d %d" % tuple(f + 1) for f in mesh.faces]
    elif fmt == "ply":
        lines += ["ply", "format ascii 1.0",
                  f"element vertex {len(mesh.vertices)}",
                  "property double x", "property double y", "property double z",
                  "property double quality",
                  f"element face {len(mesh.faces)}",
                  "property list uchar int vertex_indices", "end_header"]
        lines += [" ".join(_fmt(c) for c in v) + " " + _fmt(k)
                  for v, k in zip(mesh.vertices, mesh.gauss_curvature)]
        lines += ["3 %d %d %d" % tuple(f) for f in mesh.faces]
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    return ("\n".join(lines) + "\n").encode("ascii")


def atomic_write(path, data):
    """Write ``data`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_mesh(mesh, path, fmt="obj"):
    atomic_write(path, export_mesh(mesh, fmt))


def read_obj_vertices(data):
    """Vertex array of OBJ text (used to round-trip exports)."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    rows = [line.split()[1:4] for line in data.splitlines() if line.startswith("v ")]
    return np.array(rows, dtype=float).reshape(-1, 3)


def isothermal_defect(m, z, step=1e-4, quad=QuadratureSpec()):
    """``(cos angle, relative norm gap)`` of the finite-difference tangents at ``z``.

    Both vanish for conformal parameters.
    """
    z = complex(z)
    pts = np.array([z + step, z - step, z + 1j * step, z - 1j * step])
    U, V, W = lift_point(m, pts, quad)
    P = np.stack([U, V, W], axis=1)
    X = (P[0] - P[1]) / (2 * step)
    Y = (P[2] - P[3]) / (2 * step)
    nx, ny = np.linalg.norm(X), np.linalg.norm(Y)
    return abs(float(X @ Y)) / (nx * ny), abs(nx - ny) / max(nx, ny)
