import numpy as np
import pytest

from cosserat_shell import thin_limit as tl
from cosserat_shell.homogenization import w_curv_hom_plate
from cosserat_shell.rotation_fields import AffineAngle, make_exp_field

P = tl.STUDY_PARAMS


def test_quadrature_weights():
    g = tl.QuadratureGrid((-1.0, -0.5), (1.0, 0.5), cells=3)
    X, W = g.nodes2d()
    assert np.all(W > 0) and W.sum() == pytest.approx(2.0)
    t, w = g.nodes3()
    assert np.all(w > 0) and w.sum() == pytest.approx(1.0)
    assert np.all(np.abs(t) < 0.5)


def test_trivial_ansatz_all_zero():
    table = tl.convergence_study(tl.trivial_ansatz(), P)
    assert table.limit == 0.0
    assert all(r["energy"] == 0.0 and r["abs_err"] == 0.0 for r in table.rows)
    assert table.monotone


def test_malformed_h_list():
    with pytest.raises(ValueError):
        tl.trivial_ansatz(h_list=(0.1, 0.2))
    with pytest.raises(ValueError):
        tl.trivial_ansatz(h_list=(0.1, 0.1))
    with pytest.raises(ValueError):
        tl.rescaled_energy(tl.trivial_ansatz(), 0.0, P)


def test_limit_of_constant_twist_equals_plate_value():
    t = 0.6
    a = tl.trivial_ansatz()
    Q = make_exp_field([0, 0, 1.0], AffineAngle(0.0, np.array([t, 0.0, 0.0])))
    G0 = t * np.outer([0, 0, 1.0], [1, 0, 0])
    expected = w_curv_hom_plate(G0, P).total * 4.0  # |omega| = 4
    # the membrane part does not depend on the b's, so doubling them isolates the curvature integral
    P2 = P.replace(b1=2 * P.b1, b2=2 * P.b2, b3=2 * P.b3)
    diff = tl.gamma_limit_value(a.m, Q, P2, a.surface) - tl.gamma_limit_value(a.m, Q, P, a.surface)
    assert diff == pytest.approx(expected, rel=1e-12)


def test_resolution_doubling_is_stable():
    a = tl.flat_shear_rotation()
    tl.rescaled_energy(a, 0.05, P, check_resolution=True, tol=1e-8)


def test_resolution_error_raised_on_coarse_grid():
    a = tl.flat_shear_rotation()
    grid = tl.QuadratureGrid((-1.0, -1.0), (1.0, 1.0), cells=1, points=1, points3=1)
    with pytest.raises(tl.ResolutionError):
        tl.rescaled_energy(a, 0.2, P, grid, check_resolution=True, tol=1e-12)


def test_flat_study_converges():
    table = tl.convergence_study(tl.flat_shear_rotation(), P)
    assert table.monotone and table.slope >= 1.0
    errs = [r["abs_err"] for r in table.rows]
    assert errs[-1] < errs[0] / 100


def test_energy_above_limit_for_uncorrected_ansatz():
    # without the thickness corrections the ansatz is not optimal, so I_h/h >= J0
    base = tl.flat_shear_rotation()
    a = tl.AnsatzPair(base.m, base.Q0, base.surface, base.h_list, "uncorrected", corrections=False)
    grid = tl.default_grid(a.surface)
    J0 = tl.gamma_limit_value(a.m, a.Q0, P, a.surface, grid)
    for h in a.h_list:
        assert tl.rescaled_energy(a, h, P, grid) >= J0 - 1e-10


def test_sphere_study_converges():
    table = tl.convergence_study(tl.sphere_rotation(), P)
    assert table.monotone and table.slope >= 1.0
    assert table.limit > 0
