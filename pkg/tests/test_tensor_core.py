import numpy as np
import pytest
from hypothesis import given

from conftest import mat3, vec3
from cosserat_shell.tensor_core import (
    NotSkewError, ThirdOrder, anti, anti_columns, axl, cartan_decompose, inner, lift_flat,
    norm2, third_mul_left, third_mul_right,
)


def test_anti_e1_matches_matrix_display():
    assert np.array_equal(anti([1, 0, 0]), [[0, 0, 0], [0, 0, -1], [0, 1, 0]])


def test_axl_zero_and_inverse():
    assert np.array_equal(axl(np.zeros((3, 3))), np.zeros(3))
    assert np.allclose(axl(anti([1, 2, 3])), [1, 2, 3], atol=0)


def test_axl_rejects_non_skew():
    with pytest.raises(NotSkewError):
        axl(np.eye(3))


@given(vec3(), vec3())
def test_anti_is_cross_product(v, w):
    assert np.allclose(anti(v) @ w, np.cross(v, w), atol=1e-12)


@given(vec3())
def test_axl_anti_roundtrip_and_norm(v):
    assert np.array_equal(axl(anti(v)), v)
    assert norm2(anti(v)) == pytest.approx(2 * float(v @ v), rel=1e-12, abs=1e-300)


@given(mat3())
def test_anti_axl_roundtrip_on_skew(X):
    A = 0.5 * (X - X.T)
    assert np.allclose(anti(axl(A)), A, atol=1e-12 * max(1, np.linalg.norm(A)))


def test_axl_index_formula():
    A = anti([0.3, -1.2, 2.5])
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[i, k, j] = 1, -1
    assert np.allclose(axl(A), -0.5 * np.einsum("ijk,ij->k", eps, A))


def test_cartan_trivial_cases():
    d, s, t = cartan_decompose(np.eye(3))
    assert np.array_equal(d, np.zeros((3, 3))) and np.array_equal(s, np.zeros((3, 3))) and np.array_equal(t, np.eye(3))
    X = anti([1, 2, 3])
    d, s, t = cartan_decompose(X)
    assert np.array_equal(s, X) and not d.any() and not t.any()


@given(mat3())
def test_cartan_orthogonal_reassembly(X):
    d, s, t = cartan_decompose(X)
    scale = max(1.0, norm2(X))
    assert np.allclose(d + s + t, X, atol=1e-12 * np.sqrt(scale))
    assert abs(np.trace(d)) < 1e-12 * np.sqrt(scale)
    for a, b in ((d, s), (d, t), (s, t)):
        assert abs(inner(a, b)) < 1e-12 * scale
    assert norm2(X) == pytest.approx(norm2(d) + norm2(s) + norm2(t), rel=1e-12, abs=1e-12)


def test_lift_flat_examples():
    assert np.array_equal(lift_flat(np.eye(2)), np.diag([1, 1, 0]))
    assert np.array_equal(lift_flat(np.zeros((2, 2))), np.zeros((3, 3)))
    assert np.array_equal(lift_flat([[1, 2], [3, 4]]), [[1, 2, 0], [3, 4, 0], [0, 0, 0]])


def test_third_order_products(rng):
    A = ThirdOrder(rng.standard_normal((3, 3, 3)))
    assert np.array_equal(third_mul_left(np.eye(3), A).blocks, A.blocks)
    assert np.array_equal(third_mul_right(A, np.eye(3)).blocks, A.blocks)
    D = third_mul_right(A, np.diag([2.0, 1.0, 1.0]))
    assert np.array_equal(D.blocks[0], 2 * A.blocks[0]) and np.array_equal(D.blocks[1:], A.blocks[1:])
    B = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    back = third_mul_right(third_mul_right(A, B), np.linalg.inv(B))
    assert np.max(np.abs(back.blocks - A.blocks)) < 1e-12
    C = rng.standard_normal((3, 3))
    lhs = third_mul_right(third_mul_right(A, B), C).blocks
    rhs = third_mul_right(A, B @ C).blocks
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)
    L = third_mul_left(C, A)
    assert all(np.allclose(L.blocks[k], C @ A.blocks[k]) for k in range(3))


def test_third_order_norm_and_layout(rng):
    b = rng.standard_normal((3, 3, 3))
    A = ThirdOrder(b)
    assert A.norm2() == pytest.approx(sum(norm2(b[k]) for k in range(3)))
    assert np.array_equal(A.as_3x9(), np.hstack([b[0], b[1], b[2]]))
    assert np.array_equal(ThirdOrder.from_ijk(A.ijk()).blocks, b)
    assert A.ijk()[0, 1, 2] == b[2][0, 1]
    with pytest.raises(ValueError):
        ThirdOrder(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        A.blocks[0, 0, 0] = 1.0


def test_anti_columns_and_blockwise_axl(rng):
    Z = rng.standard_normal((3, 3))
    T = anti_columns(Z)
    assert np.allclose(T.axl(), Z)
    assert T.sym().norm2() < 1e-30
    assert T.trace() == 0.0
