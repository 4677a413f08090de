"""Closed-form homogenized membrane and curvature energies.

Both energies come from minimizing a quadratic density over the unconstrained
normal column. For the membrane part the free vector is the thickness director
d; for the curvature part it is the third column c of the wryness. With
E n0 = 0 and K n0 = 0, the completed strains are E + w (x) n0 and K + c (x) n0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energies import EnergyBreakdown, MaterialParams
from .geometry import Surface, SurfaceFrame, frame_at
from .rotation_fields import RotationField, Vec3Field
from .tensor_core import EYE3, axl, norm2, outer, skew, sym


def harmonic_mean(a: float, b: float) -> float:
    return 2.0 * a * b / (a + b)


# ---------------------------------------------------------------- membrane

def optimal_director(E, frame: SurfaceFrame, p: MaterialParams, Q=None):
    """Minimizing thickness director for the membrane strain E under the rotation Q (default identity)."""
    E = np.asarray(E, dtype=float)
    Q = EYE3 if Q is None else np.asarray(Q, dtype=float)
    n0 = frame.n0
    a = 1.0 - p.lam / (2.0 * p.mu + p.lam) * np.trace(E)
    b = (p.mu_c - p.mu) / (p.mu_c + p.mu)
    return a * (Q @ n0) + b * (Q @ (E.T @ n0))


def optimal_membrane_completion(E, frame: SurfaceFrame, p: MaterialParams):
    """w* with W_mp(1 + E + w (x) n0) minimal; equals Q^T d* - n0."""
    E = np.asarray(E, dtype=float)
    n0 = frame.n0
    return (p.mu_c - p.mu) / (p.mu_c + p.mu) * (E.T @ n0) - p.lam / (2.0 * p.mu + p.lam) * np.trace(E) * n0


def w_mp_hom(E, frame: SurfaceFrame, p: MaterialParams) -> EnergyBreakdown:
    E = np.asarray(E, dtype=float)
    Ep = frame.A_y0 @ E
    v = E.T @ frame.n0
    return EnergyBreakdown(
        p.mu * norm2(sym(Ep)),
        p.mu_c * norm2(skew(Ep)),
        p.lam * p.mu / (p.lam + 2.0 * p.mu) * np.trace(Ep) ** 2,
        harmonic_mean(p.mu, p.mu_c) * float(v @ v),
    )


# ---------------------------------------------------------------- curvature

def optimal_curvature_completion(K, frame: SurfaceFrame, p: MaterialParams):
    K = np.asarray(K, dtype=float)
    n0 = frame.n0
    return (p.b2 - p.b1) / (p.b1 + p.b2) * (K.T @ n0) - p.b3 / (p.b1 + p.b3) * np.trace(K) * n0


def _curv_hom_terms(K_par, v, p: MaterialParams) -> EnergyBreakdown:
    s = p.curv_scale
    return EnergyBreakdown(
        s * p.b1 * norm2(sym(K_par)),
        s * p.b2 * norm2(skew(K_par)),
        s * p.b1 * p.b3 / (p.b1 + p.b3) * np.trace(K_par) ** 2,
        s * harmonic_mean(p.b1, p.b2) * float(v @ v),
    )


def w_curv_hom(K, frame: SurfaceFrame, p: MaterialParams) -> EnergyBreakdown:
    """Homogenized curvature energy split into tangential and normal parts of K."""
    K = np.asarray(K, dtype=float)
    return _curv_hom_terms(frame.A_y0 @ K, K.T @ frame.n0, p)


def w_curv_hom_intermediate(K, frame: SurfaceFrame, p: MaterialParams) -> float:
    """The same value written without the tangential/normal split."""
    K = np.asarray(K, dtype=float)
    v = K.T @ frame.n0
    return p.curv_scale * (
        p.b1 * norm2(sym(K)) + p.b2 * norm2(skew(K))
        - (p.b1 - p.b2) ** 2 / (2.0 * (p.b1 + p.b2)) * float(v @ v)
        + p.b1 * p.b3 / (p.b1 + p.b3) * np.trace(K) ** 2
    )


class PlateStrainError(ValueError):
    pass


def w_curv_hom_plate(G0, p: MaterialParams) -> EnergyBreakdown:
    """Flat-plate version; ``G0`` is the wryness with its third column zero."""
    G0 = np.asarray(G0, dtype=float)
    if np.any(G0[:, 2] != 0.0):
        raise PlateStrainError("plate wryness must have a zero third column")
    K_par = G0.copy()
    K_par[2, :] = 0.0
    return _curv_hom_terms(K_par, G0[2, :].copy(), p)


def curvature_stationarity(K, c, frame: SurfaceFrame, p: MaterialParams):
    """[D W_curv](K + c (x) n0) n0, which vanishes at the optimal c."""
    X = np.asarray(K, dtype=float) + outer(c, frame.n0)
    D = 2.0 * p.curv_scale * (p.b1 * sym(X) + p.b2 * skew(X) + p.b3 * np.trace(X) * EYE3)
    return D @ frame.n0


def curvature_normal_matrix(frame: SurfaceFrame, p: MaterialParams):
    """Hessian / (2 mu L_c^2) of c -> W_curv(K + c (x) n0)."""
    n = frame.n0
    A = frame.A_y0
    return 0.5 * (p.b1 + p.b2) * A + (p.b1 + p.b3) * outer(n, n)


# ---------------------------------------------------------------- strains

@dataclass(frozen=True)
class ShellStrains:
    E: np.ndarray
    K: np.ndarray
    frame: SurfaceFrame


def strain_assembly(m, Qe0: RotationField, surface: Surface, x, x3: float = 0.0) -> ShellStrains:
    """Membrane strain (Q^T D m - D y0 | 0) DTheta(0)^-1 and bending-curvature tensor
    (axl(Q^T d1 Q) | axl(Q^T d2 Q) | 0) DTheta(x3)^-1 at the point x of omega."""
    frame = frame_at(surface, x)
    x = np.asarray(x, dtype=float)[:2]
    if isinstance(m, Vec3Field):
        Dm = m.jac(x)[:, :2]
    else:
        Dm = np.asarray(m(x), dtype=float)
    Q = Qe0(x)
    dQ = Qe0.derivatives(x)
    cols = []
    for i in range(2):
        Z = Q.T @ dQ[i]
        cols.append(axl(0.5 * (Z - Z.T)))
    E = np.column_stack([Q.T @ Dm - frame.Dy0, np.zeros(3)]) @ frame.DTheta0_inv
    K = np.column_stack(cols + [np.zeros(3)]) @ np.linalg.inv(frame.dtheta(x3))
    return ShellStrains(E, K, frame)
