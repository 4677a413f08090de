"""Second- and third-order tensor algebra on R^3.

Matrices are plain ``(3, 3)`` float arrays. A third-order tensor A_ijk is kept
as three contiguous 3x3 blocks ``A_k = (A_ijk)_ij`` (the column-block layout
``(A_1 | A_2 | A_3)``), wrapped in :class:`ThirdOrder`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EYE3 = np.eye(3)

# Levi-Civita symbol eps[i, j, k]
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0


class NotSkewError(ValueError):
    """Raised when axl() receives a matrix that is not skew-symmetric."""


def sym(X):
    X = np.asarray(X, dtype=float)
    return 0.5 * (X + X.T)


def skew(X):
    X = np.asarray(X, dtype=float)
    return 0.5 * (X - X.T)


def dev(X):
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    return X - np.trace(X) / n * np.eye(n)


def norm2(X) -> float:
    """Squared Frobenius norm."""
    X = np.asarray(X, dtype=float)
    return float(np.sum(X * X))


def inner(X, Y) -> float:
    """Frobenius scalar product tr(X Y^T)."""
    return float(np.sum(np.asarray(X, dtype=float) * np.asarray(Y, dtype=float)))


def anti(v):
    """Skew matrix with anti(v) @ w == cross(v, w)."""
    v1, v2, v3 = np.asarray(v, dtype=float)
    return np.array([[0.0, -v3, v2], [v3, 0.0, -v1], [-v2, v1, 0.0]])


def axl(A, tol: float = 1e-10):
    """Axial vector of a skew matrix, the inverse of :func:`anti`.

    Raises NotSkewError if ``A + A^T`` exceeds ``tol`` relative to ``max(1, |A|)``.
    """
    A = np.asarray(A, dtype=float)
    asym = np.linalg.norm(A + A.T)
    if asym > tol * max(1.0, np.linalg.norm(A)):
        raise NotSkewError(f"matrix is not skew-symmetric (|A + A^T| = {asym:.3e})")
    return np.array([A[2, 1] - A[1, 2], A[0, 2] - A[2, 0], A[1, 0] - A[0, 1]]) * 0.5


def cartan_decompose(X):
    """Split X into (dev sym X, skew X, tr(X)/3 * I); the parts are Frobenius-orthogonal."""
    X = np.asarray(X, dtype=float)
    trace_part = np.trace(X) / 3.0 * EYE3
    return sym(X) - trace_part, skew(X), trace_part


def lift_flat(M):
    """Embed a 2x2 matrix in the upper-left block of a 3x3 zero matrix."""
    out = np.zeros((3, 3))
    out[:2, :2] = np.asarray(M, dtype=float)
    return out


def outer(a, b):
    return np.outer(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


@dataclass(frozen=True)
class ThirdOrder:
    """Third-order tensor stored as blocks ``blocks[k] = (A_ijk)_ij``."""

    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=float)
        if b.shape != (3, 3, 3):
            raise ValueError(f"expected three 3x3 blocks, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @classmethod
    def from_blocks(cls, A1, A2, A3) -> "ThirdOrder":
        return cls(np.stack([A1, A2, A3]))

    @classmethod
    def from_ijk(cls, arr) -> "ThirdOrder":
        return cls(np.moveaxis(np.asarray(arr, dtype=float), 2, 0))

    @classmethod
    def zeros(cls) -> "ThirdOrder":
        return cls(np.zeros((3, 3, 3)))

    def ijk(self):
        """Index view A[i, j, k]."""
        return np.moveaxis(self.blocks, 0, 2)

    def as_3x9(self):
        return np.hstack(list(self.blocks))

    def block(self, k: int):
        return self.blocks[k]

    def norm2(self) -> float:
        return float(np.sum(self.blocks * self.blocks))

    def norm2_block(self, k: int) -> float:
        return float(np.sum(self.blocks[k] ** 2))

    def sym(self) -> "ThirdOrder":
        return ThirdOrder(0.5 * (self.blocks + self.blocks.transpose(0, 2, 1)))

    def skew(self) -> "ThirdOrder":
        return ThirdOrder(0.5 * (self.blocks - self.blocks.transpose(0, 2, 1)))

    def trace(self) -> float:
        """tr A = tr A_1 + tr A_2 + tr A_3."""
        return float(sum(np.trace(b) for b in self.blocks))

    def block_traces(self):
        return np.array([np.trace(b) for b in self.blocks])

    def axl(self, tol: float = 1e-10):
        """Matrix (axl A_1 | axl A_2 | axl A_3); every block must be skew."""
        return np.column_stack([axl(b, tol) for b in self.blocks])

    def __add__(self, other: "ThirdOrder") -> "ThirdOrder":
        return ThirdOrder(self.blocks + other.blocks)

    def __sub__(self, other: "ThirdOrder") -> "ThirdOrder":
        return ThirdOrder(self.blocks - other.blocks)


def anti_columns(Z) -> ThirdOrder:
    """(anti z_1 | anti z_2 | anti z_3) for the columns z_k of Z."""
    Z = np.asarray(Z, dtype=float)
    return ThirdOrder(np.stack([anti(Z[:, k]) for k in range(3)]))


def third_mul_left(B, A: ThirdOrder) -> ThirdOrder:
    """B A = (B A_1 | B A_2 | B A_3)."""
    B = np.asarray(B, dtype=float)
    return ThirdOrder(np.einsum("ij,kjl->kil", B, A.blocks))


def third_mul_right(A: ThirdOrder, B) -> ThirdOrder:
    """A B with block l equal to sum_k A_k B_kl."""
    B = np.asarray(B, dtype=float)
    return ThirdOrder(np.einsum("kij,kl->lij", A.blocks, B))
