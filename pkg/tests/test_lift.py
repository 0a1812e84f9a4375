import numpy as np
import pytest

from schwarzlift import catalog as cat
from schwarzlift import expr as ex
from schwarzlift import lift as lf
from schwarzlift.errors import CriticalPoint, IoError, QuadratureNotConverged
from schwarzlift.grid import GridSpec
from schwarzlift.quadrature import QuadratureSpec
from schwarzlift.schwarzian import HarmonicMapping, conformal_factor

ZZ = HarmonicMapping.direct("z", "z")


def disk_points(rng, n, rmax=0.8):
    return np.sqrt(rng.uniform(0, rmax ** 2, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def test_lift_point_closed_form():
    z = (1 + 1j) / 2
    U, V, W = lf.lift_point(ZZ, z)
    assert W == pytest.approx(0.5, abs=1e-14)
    f = z + np.conj(z ** 3 / 3)
    assert (U, V) == pytest.approx((f.real, f.imag), abs=1e-14)


def test_lift_point_planar_and_origin():
    m = HarmonicMapping.direct("exp(z)", "0")
    U, V, W = lf.lift_point(m, 0.3 + 0.4j)
    assert W == 0
    assert complex(U, V) == pytest.approx(np.exp(0.3 + 0.4j), abs=1e-14)
    m = HarmonicMapping.direct("z+2", "z")
    assert lf.lift_point(m, 0) == (2.0, 0.0, 0.0)


def test_lift_point_array(rng):
    z = disk_points(rng, 12)
    U, V, W = lf.lift_point(ZZ, z)
    assert np.allclose(W, np.imag(z ** 2), atol=1e-14)
    assert np.allclose(U + 1j * V, z + np.conj(z ** 3 / 3), atol=1e-14)


def test_shear_provenance_lift(rng):
    # shear of phi = z with q = z/2: h' = 1/(1-z^2/4), W = 2 Im int q h'
    m = HarmonicMapping.shear_of("z", "0.5*z")
    z = disk_points(rng, 10, 0.9)
    U, V, W = lf.lift_point(m, z)
    w_exact = 2 * np.imag(-np.log(1 - z * z / 4))
    assert np.allclose(W, w_exact, atol=1e-13)
    h = 2 * np.arctanh(z / 2)
    g = h - z
    assert np.allclose(U + 1j * V, h + np.conj(g), atol=1e-13)


def test_uv_matches_series_antiderivative(rng):
    m = HarmonicMapping.direct("exp(z)*z", "0.3*z+0.2")
    gp = ex.Mul(ex.Pow(m.q, 2), ex.Diff(m.h))
    g = ex.series_antiderivative(ex.taylor_expand(gp, 60), 0.0)
    z = disk_points(rng, 20, 0.7)
    U, V, _ = lf.lift_point(m, z)
    assert np.allclose(U + 1j * V, ex.evaluate(m.h, z) + np.conj(g(z)), atol=1e-8)


def test_critical_point_on_path():
    with pytest.raises(CriticalPoint):
        lf.lift_point(HarmonicMapping.direct("z^2/2+0.5*z", "0.1"), -0.6)


def test_quadrature_not_converged():
    quad = QuadratureSpec(points=2, max_segment=0.5, tol=1e-12)
    with pytest.raises(QuadratureNotConverged):
        lf.lift_point(HarmonicMapping.direct("exp(5*z)", "z"), 0.9j, quad)


@pytest.mark.parametrize("m,z", [(ZZ, 0.5j), (HarmonicMapping.direct("z", "0.4+0.1i"), 0.6 - 0.3j)])
def test_path_independence_examples(m, z):
    assert lf.path_independence_check(m, z) < 1e-10


def test_path_independence_random(rng):
    for i in range(20):
        q = cat.bounded_q(0.7, cat.BOUNDED_KINDS[i % len(cat.BOUNDED_KINDS)], rng)
        m = HarmonicMapping.direct(cat.rotated(cat.schwarzian_norm_map(0.5), i), q)
        assert lf.path_independence_check(m, disk_points(rng, 1, 0.9)[0]) < 1e-7


# -- meshes ---------------------------------------------------------------------

def test_mesh_shape_and_center():
    grid = GridSpec(50, 64, 0.9)
    mesh = lf.build_mesh(ZZ, grid)
    assert mesh.n_vertices == 50 * 64 + 1
    assert mesh.faces.min() >= 0 and mesh.faces.max() < mesh.n_vertices
    assert len(mesh.faces) == 64 + 2 * 64 * 49
    assert np.all(mesh.vertices[0] == 0)
    axis = [mesh.vertex_index(k, 0) for k in range(1, 51)]
    assert np.allclose(mesh.vertices[axis, 2], 0, atol=1e-15)


def test_flat_mesh():
    mesh = lf.build_mesh(HarmonicMapping.direct("z/(1-z/2)", "0"), GridSpec(10, 16, 0.9))
    assert np.all(mesh.vertices[:, 2] == 0)
    assert np.all(mesh.gauss_curvature == 0)


def test_mesh_matches_lift_point():
    m = HarmonicMapping.direct("exp(z)", "0.5*z+0.2")
    grid = GridSpec(12, 16, 0.95)
    mesh = lf.build_mesh(m, grid)
    U, V, W = lf.lift_point(m, mesh.params)
    assert np.allclose(mesh.vertices, np.stack([U, V, W], axis=1), atol=1e-9, rtol=0)


def test_mesh_curvature_matches_formula():
    m = ZZ
    mesh = lf.build_mesh(m, GridSpec(5, 8, 0.8))
    z = mesh.params
    assert np.allclose(mesh.gauss_curvature, -4 / (1 + np.abs(z) ** 2) ** 4)


def test_first_fundamental_form(rng):
    m = HarmonicMapping.direct("z/(1-z/3)", "0.6*z-0.1")
    for z in disk_points(rng, 10, 0.8):
        dz = 1e-3 * np.exp(2j * np.pi * rng.uniform())
        a = np.array(lf.lift_point(m, z))
        b = np.array(lf.lift_point(m, z + dz))
        length = np.linalg.norm(b - a)
        assert length == pytest.approx(conformal_factor(m, z + dz / 2) * 1e-3, rel=0.02)


def test_isothermal_parameters(rng):
    m = HarmonicMapping.direct("exp(z)+z", "0.5*z+0.3i")
    for z in disk_points(rng, 5, 0.8):
        cos_angle, gap = lf.isothermal_defect(m, z)
        assert cos_angle < 1e-3 and gap < 1e-3


def test_mesh_is_deterministic():
    m = HarmonicMapping.direct("z", "0.5*z")
    a = lf.export_mesh(lf.build_mesh(m, GridSpec(6, 8, 0.9)), "ply")
    b = lf.export_mesh(lf.build_mesh(m, GridSpec(6, 8, 0.9)), "ply")
    assert a == b


# -- export -------------------------------------------------------------------

def _one_triangle():
    grid = GridSpec(2, 3, 0.5)
    return lf.SurfaceMesh(np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0]]), np.zeros(3),
                          np.array([[0, 1, 2]]), grid, np.zeros(3, dtype=complex))


def test_obj_one_triangle():
    text = lf.export_mesh(_one_triangle(), "obj").decode()
    lines = text.splitlines()
    assert [l for l in lines if l.startswith("v ")] == ["v 0 0 0", "v 1 0 0", "v 0 1 0"]
    assert [l for l in lines if l.startswith("f ")] == ["f 1 2 3"]


def test_negative_zero_prints_as_zero():
    mesh = _one_triangle()
    mesh.vertices[0] = [-0.0, -0.0, -0.0]
    assert lf.export_mesh(mesh, "obj").decode().splitlines()[0] == "v 0 0 0"


def test_ply_header():
    text = lf.export_mesh(_one_triangle(), "ply").decode()
    lines = text.splitlines()
    assert lines[:2] == ["ply", "format ascii 1.0"]
    assert "element vertex 3" in lines and "element face 1" in lines
    assert "property double quality" in lines
    end = lines.index("end_header")
    assert lines[end + 4] == "3 0 1 2"
    assert len(lines) == end + 5


def test_obj_round_trip():
    mesh = lf.build_mesh(HarmonicMapping.direct("exp(z)", "0.7*z"), GridSpec(8, 12, 0.95))
    back = lf.read_obj_vertices(lf.export_mesh(mesh, "obj"))
    assert np.allclose(back, mesh.vertices, atol=1e-6, rtol=0)


def test_unknown_format():
    with pytest.raises(ValueError):
        lf.export_mesh(_one_triangle(), "stl")


def test_write_mesh(tmp_path):
    path = tmp_path / "m.obj"
    lf.write_mesh(_one_triangle(), path)
    assert path.read_bytes() == lf.export_mesh(_one_triangle(), "obj")
    assert [p.name for p in tmp_path.iterdir()] == ["m.obj"]


def test_write_mesh_io_error(tmp_path):
    with pytest.raises(IoError):
        lf.write_mesh(_one_triangle(), tmp_path / "missing" / "m.obj")
