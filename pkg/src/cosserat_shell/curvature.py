"""Curvature strain measures of a rotation field.

Given R(x) the module computes the wryness Gamma (columns axl(R^T d_i R)),
the dislocation density alpha = R^T Curl R, the third-order tensor K with
blocks R^T d_k R and the tensor K-hat with blocks R^T D(R e_k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rotation_fields import RotationField
from .tensor_core import EYE3, LEVI_CIVITA, ThirdOrder, axl, dev, skew, sym


def _connection(field: RotationField, x):
    """R(x) and the three matrices R^T d_i R, projected to skew in FD mode."""
    R = field(x)
    dR = field.derivatives(x)
    Z = np.einsum("ab,iac->ibc", R, dR)
    if field.mode != "analytic":
        Z = 0.5 * (Z - Z.transpose(0, 2, 1))
    return R, dR, Z


def wryness(field: RotationField, x):
    _, _, Z = _connection(field, x)
    return np.column_stack([axl(Z[i], tol=1e-6) for i in range(3)])


def nye_gamma_to_alpha(G):
    G = np.asarray(G, dtype=float)
    return -G.T + np.trace(G) * EYE3


def nye_alpha_to_gamma(A):
    A = np.asarray(A, dtype=float)
    return -A.T + 0.5 * np.trace(A) * EYE3


def dislocation_density(field: RotationField, x):
    return nye_gamma_to_alpha(wryness(field, x))


def curl_rows(P, dP):
    """Row-wise curl: (Curl P)_ij = eps_jab d_a P_ib, with ``dP[a] = d_a P``."""
    return np.einsum("jab,aib->ij", LEVI_CIVITA, np.asarray(dP, dtype=float))


def dislocation_density_direct(field: RotationField, x):
    """alpha = R^T Curl R assembled from the derivatives (cross-check route)."""
    R = field(x)
    return R.T @ curl_rows(R, field.derivatives(x))


@dataclass(frozen=True)
class Correspondence:
    """Both sides of the sym/skew/trace relations between Gamma and alpha."""

    devsym_gamma: np.ndarray
    minus_devsym_alpha: np.ndarray
    skew_gamma: np.ndarray
    skew_alpha: np.ndarray
    tr_gamma: float
    half_tr_alpha: float
    gamma_from_alpha: np.ndarray
    gamma: np.ndarray

    def residuals(self) -> dict:
        return {
            "devsym": float(np.linalg.norm(self.devsym_gamma - self.minus_devsym_alpha)),
            "skew": float(np.linalg.norm(self.skew_gamma - self.skew_alpha)),
            "trace": abs(self.tr_gamma - self.half_tr_alpha),
            "roundtrip": float(np.linalg.norm(self.gamma_from_alpha - self.gamma)),
        }


def sym_skew_tr_correspondence(G) -> Correspondence:
    G = np.asarray(G, dtype=float)
    A = nye_gamma_to_alpha(G)
    return Correspondence(
        devsym_gamma=dev(sym(G)),
        minus_devsym_alpha=-dev(sym(A)),
        skew_gamma=skew(G),
        skew_alpha=skew(A),
        tr_gamma=float(np.trace(G)),
        half_tr_alpha=0.5 * float(np.trace(A)),
        gamma_from_alpha=nye_alpha_to_gamma(A),
        gamma=G,
    )


def k_tensor(field: RotationField, x) -> ThirdOrder:
    """Blocks R^T d_k R."""
    _, _, Z = _connection(field, x)
    return ThirdOrder(Z)


def k_hat_tensor(field: RotationField, x) -> ThirdOrder:
    """Blocks R^T D(R e_k); entry (i, j) of block k is (R^T d_j R)_ik."""
    R = field(x)
    dR = field.derivatives(x)
    Z = np.einsum("ab,jac->jbc", R, dR)  # Z[j] = R^T d_j R, unprojected
    return ThirdOrder(np.transpose(Z, (2, 1, 0)))


def permute_A(T: ThirdOrder) -> ThirdOrder:
    """(A.T)_ijk = T_ikj."""
    return ThirdOrder.from_ijk(np.swapaxes(T.ijk(), 1, 2))


def k_from_gamma(G) -> ThirdOrder:
    """K_ijk = -eps_ijl Gamma_lk, i.e. block k equal to anti(Gamma e_k)."""
    return ThirdOrder.from_ijk(-np.einsum("ijl,lk->ijk", LEVI_CIVITA, np.asarray(G, dtype=float)))


@dataclass(frozen=True)
class CurvatureSet:
    gamma: np.ndarray
    alpha: np.ndarray
    k_full: ThirdOrder
    k_hat: ThirdOrder


def curvature_set(field: RotationField, x) -> CurvatureSet:
    G = wryness(field, x)
    return CurvatureSet(G, nye_gamma_to_alpha(G), k_tensor(field, x), k_hat_tensor(field, x))


def grad_norm2(field: RotationField, x) -> float:
    """||D R||^2 summed over all nine entries and three directions."""
    return float(np.sum(field.derivatives(x) ** 2))


def drnorm_from_alpha(A, constants) -> float:
    """c1 ||dev sym A||^2 + c2 ||skew A||^2 + c3 tr(A)^2."""
    c1, c2, c3 = constants
    A = np.asarray(A, dtype=float)
    return float(c1 * np.sum(dev(sym(A)) ** 2) + c2 * np.sum(skew(A) ** 2) + c3 * np.trace(A) ** 2)


# Proper rotation swapping the roles of e2 and e3: e2 -> e3, e3 -> -e2.
WITNESS_ROTATION = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


def direction_energy(field: RotationField, x, k: int) -> float:
    """||R^T D(R e_k)||^2 for a single material direction."""
    return k_hat_tensor(field, x).norm2_block(k)


def anisotropy_witness(field: RotationField, x, Q=WITNESS_ROTATION, k: int = 2) -> dict:
    """Direction-k energy before and after R -> R Q, plus the Gamma invariants of both."""
    Q = np.asarray(Q, dtype=float)
    moved = field.right_multiply(Q)
    e0 = direction_energy(field, x, k)
    e1 = direction_energy(moved, x, k)
    G0 = wryness(field, x)
    G1 = wryness(moved, x)
    inv = lambda G: np.array([np.sum(sym(G) ** 2), np.sum(skew(G) ** 2), np.trace(G)])
    return {
        "energy_before": e0,
        "energy_after": e1,
        "relative_change": abs(e1 - e0) / max(abs(e0), abs(e1), 1e-300),
        "gamma_invariant_residual": float(np.max(np.abs(inv(G1) - inv(G0)))),
    }

