import numpy as np
import pytest

from cosserat_shell import geometry as geo


def fd_second(s, x, h=1e-4):
    out = np.empty((2, 2, 3))
    E = np.eye(2) * h
    for a in range(2):
        for b in range(2):
            out[a, b] = (s.y0(x + E[a] + E[b]) - s.y0(x + E[a] - E[b]) - s.y0(x - E[a] + E[b]) + s.y0(x - E[a] - E[b])) / (4 * h * h)
    return out


def test_plane_frame():
    f = geo.flat_frame()
    assert np.array_equal(f.n0, [0, 0, 1])
    assert np.array_equal(f.I, np.eye(2))
    assert not f.II.any() and not f.L.any()
    assert np.array_equal(f.DTheta0, np.eye(3))
    assert np.array_equal(f.A_y0, np.diag([1.0, 1.0, 0.0]))
    assert np.allclose(f.Q0, np.eye(3))
    assert np.array_equal(f.dtheta(0.3), np.eye(3))


def test_cylinder_forms_against_finite_differences():
    s = geo.cylinder(2.0)
    x = np.array([0.3, -0.2])
    f = geo.frame_at(s, x)
    assert np.allclose(f.I, np.eye(2), atol=1e-14)
    H = fd_second(s, x)
    II = np.array([[H[a, b] @ f.n0 for b in range(2)] for a in range(2)])
    assert np.max(np.abs(II - f.II)) < 1e-6
    assert np.allclose(f.L, np.diag([-0.5, 0.0]), atol=1e-12)


def test_sphere_weingarten():
    f = geo.frame_at(geo.sphere(2.0), (0.1, 0.2))
    assert np.allclose(f.L, -0.5 * np.eye(2), atol=1e-12)


def test_fd_fallback_matches_analytic():
    c = geo.cylinder(1.5)
    s = geo.from_callable(c.y0)
    x = np.array([0.2, 0.4])
    a, b = geo.frame_at(c, x), geo.frame_at(s, x)
    assert np.max(np.abs(a.II - b.II)) < 1e-6
    assert np.max(np.abs(a.n0 - b.n0)) < 1e-9


@pytest.mark.parametrize("surf", [geo.plane(), geo.cylinder(0.8), geo.sphere(1.3), geo.graph("0.3*sin(x1)*x2 + x1**2/4")])
def test_projector_identities(surf):
    f = geo.frame_at(surf, (0.2, -0.1))
    n, A = f.n0, f.A_y0
    nn = np.outer(n, n)
    assert np.linalg.norm(n) == pytest.approx(1.0)
    assert np.allclose(np.linalg.inv(f.DTheta0).T @ [0, 0, 1], n, atol=1e-13)
    assert np.allclose(A @ A, A, atol=1e-13)
    assert np.allclose(A + nn, np.eye(3), atol=1e-13)
    assert np.allclose(A @ nn, 0, atol=1e-13)
    assert np.allclose(np.column_stack([np.zeros(3), np.zeros(3), n]) @ f.DTheta0_inv, nn, atol=1e-13)
    assert np.allclose(f.Q0.T @ f.Q0, np.eye(3), atol=1e-10)
    assert np.linalg.det(f.Q0) == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(f.U0, f.U0.T) and np.all(np.linalg.eigvalsh(f.U0) > 0)
    assert np.allclose(f.Q0 @ f.U0, f.DTheta0, atol=1e-10)


def test_dtheta_determinant_factorizes():
    s = geo.cylinder(2.0)
    f = geo.frame_at(s, (0.1, 0.1))
    M = geo.dtheta_thick(s, (0.1, 0.1), 0.1)
    assert np.linalg.det(M) == pytest.approx(f.surf_el * np.linalg.det(np.eye(2) - 0.1 * f.L), rel=1e-12)
    assert np.array_equal(f.dtheta(0.0), f.DTheta0)


def test_thickness_error():
    s = geo.cylinder(0.5)
    with pytest.raises(geo.ThicknessError):
        geo.dtheta_thick(s, (0.0, 0.0), -0.6)


def test_decompose_tangent_normal(rng):
    f = geo.frame_at(geo.sphere(1.7), (0.2, 0.1))
    X = rng.normal(size=(3, 3))
    Xp, Xn = geo.decompose_tangent_normal(X, f)
    assert np.allclose(Xp + Xn, X)
    assert abs(np.sum(Xp * Xn)) < 1e-12
    Xp, _ = geo.decompose_tangent_normal(np.outer(f.n0, [1.0, 2.0, 3.0]), f)
    assert np.allclose(Xp, 0, atol=1e-14)


def test_polar_rejects_reflection():
    with pytest.raises(geo.GeometryError):
        geo.polar(np.diag([1.0, 1.0, -1.0]))


def test_graph_errors():
    with pytest.raises(geo.GeometryError):
        geo.graph("x1 +* 2")
    with pytest.raises(geo.GeometryError):
        geo.graph("x1 + y")


def test_domain_checked():
    with pytest.raises(geo.GeometryError):
        geo.sphere(2.0).position((0.9, 0.0))
