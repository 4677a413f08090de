"""Brute-force minimizers for the homogenization problems.

Objectives are built directly from the three-dimensional densities (no closed
forms involved). :func:`minimize_quadratic` probes the objective with second
differences and solves the normal equations; :func:`grid_refine_min` is a
derivative-free fallback.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .energies import MaterialParams, w_curv_gamma, w_mp
from .geometry import SurfaceFrame, cylinder, frame_at, plane, sphere
from .rotation_fields import random_rotation

HESSIAN_STEP = 1.0


class DegenerateObjectiveError(ValueError):
    """Hessian not positive definite: the objective is unbounded or degenerate."""


class BoxTooSmallError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadraticProbe:
    objective: Callable[[np.ndarray], float]
    H: np.ndarray
    g: np.ndarray
    c0: float

    @classmethod
    def assemble(cls, objective, step: float = HESSIAN_STEP) -> "QuadraticProbe":
        f = lambda v: float(objective(np.asarray(v, dtype=float)))
        E = np.eye(3) * step
        c0 = f(np.zeros(3))
        fp = [f(E[i]) for i in range(3)]
        fm = [f(-E[i]) for i in range(3)]
        g = np.array([(fp[i] - fm[i]) / (2 * step) for i in range(3)])
        H = np.empty((3, 3))
        for i in range(3):
            H[i, i] = (fp[i] - 2 * c0 + fm[i]) / step**2
            for j in range(i + 1, 3):
                H[i, j] = H[j, i] = (
                    f(E[i] + E[j]) - f(E[i] - E[j]) - f(-E[i] + E[j]) + f(-E[i] - E[j])
                ) / (4 * step**2)
        return cls(objective, H, g, c0)

    def model(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(self.c0 + self.g @ v + 0.5 * v @ self.H @ v)

    def reconstruction_error(self, rng: np.random.Generator, samples: int = 50) -> float:
        """Largest relative mismatch between the quadratic model and the objective."""
        worst = 0.0
        for _ in range(samples):
            v = rng.uniform(-1, 1, 3)
            fv = float(self.objective(v))
            worst = max(worst, abs(self.model(v) - fv) / max(1.0, abs(fv)))
        return worst


@dataclass(frozen=True)
class QuadraticMin:
    v: np.ndarray
    value: float
    probe: QuadraticProbe
    residual: float


def minimize_quadratic(objective, step: float = HESSIAN_STEP) -> QuadraticMin:
    probe = QuadraticProbe.assemble(objective, step)
    H, g = probe.H, probe.g
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.min(np.linalg.eigvalsh(H)) <= 1e-12 * scale:
        raise DegenerateObjectiveError("unbounded or degenerate objective: Hessian is not positive definite")
    try:
        C = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise DegenerateObjectiveError("unbounded or degenerate objective: Cholesky factorization failed") from exc
    v = -np.linalg.solve(C.T, np.linalg.solve(C, g))
    return QuadraticMin(v, float(objective(v)), probe, float(np.linalg.norm(H @ v + g)))


def grid_refine_min(objective, center=None, radius=None, levels: int = 30, points: int = 5, shrink: float = 0.5):
    """Derivative-free minimization on a shrinking tensor grid inside a fixed box.

    Without an explicit box, the radius is estimated as 2 |g| / lambda_min + 1 from
    a quadratic probe. Raises :class:`BoxTooSmallError` if the result touches the box.
    """
    if radius is None:
        probe = QuadraticProbe.assemble(objective)
        lam = float(np.min(np.linalg.eigvalsh(probe.H)))
        if lam <= 0:
            raise DegenerateObjectiveError("cannot size the search box: Hessian not positive definite")
        radius = 2.0 * float(np.linalg.norm(probe.g)) / lam + 1.0
    c0 = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    lo, hi = c0 - radius, c0 + radius
    best = c0.copy()
    r = radius
    ticks = np.linspace(-1.0, 1.0, points)
    offsets = np.stack(np.meshgrid(ticks, ticks, ticks, indexing="ij"), -1).reshape(-1, 3)
    best_val = float(objective(best))
    for _ in range(levels):
        cand = np.clip(best + r * offsets, lo, hi)
        vals = np.array([objective(c) for c in cand])
        k = int(np.argmin(vals))
        if vals[k] <= best_val:
            best, best_val = cand[k], float(vals[k])
        r *= shrink
    if np.any(np.isclose(best, lo, rtol=0, atol=1e-9 * radius)) or np.any(np.isclose(best, hi, rtol=0, atol=1e-9 * radius)):
        raise BoxTooSmallError(f"minimizer on the search box boundary (radius {radius:g})")
    return best, best_val


# ---------------------------------------------------------------- objectives

def o2_objective(G, frame: SurfaceFrame, Q, p: MaterialParams):
    """d -> W_mp(Q^T (D m | d) DTheta(0)^-1) with D m = Q (D y0 + G)."""
    Dm = Q @ (frame.Dy0 + np.asarray(G, dtype=float))
    Minv = frame.DTheta0_inv

    def f(d):
        return w_mp(Q.T @ np.column_stack([Dm, d]) @ Minv, p).total

    return f


def o1_objective(G, frame: SurfaceFrame, Q, p: MaterialParams, x3: float = 0.0):
    """Membrane problem at the thickness coordinate x3 (D m fixed, director free)."""
    Dm = Q @ (frame.Dy0 + np.asarray(G, dtype=float))
    Minv = np.linalg.inv(frame.dtheta(x3))

    def f(d):
        return w_mp(Q.T @ np.column_stack([Dm, d]) @ Minv, p).total

    return f


def curvature_objective(G, frame: SurfaceFrame, p: MaterialParams, x3: float = 0.0):
    """c -> W_curv((g1 | g2 | c) DTheta(x3)^-1); x3 = 0 is the fully reduced problem."""
    G = np.asarray(G, dtype=float)
    Minv = np.linalg.inv(frame.dtheta(x3))

    def f(c):
        return w_curv_gamma(np.column_stack([G, c]) @ Minv, p).total

    return f


# ---------------------------------------------------------------- instances

def log_uniform(rng: np.random.Generator, lo: float = 0.1, hi: float = 10.0, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def random_params(rng: np.random.Generator) -> MaterialParams:
    mu, lam, mu_c, L_c = log_uniform(rng, size=4)
    b1, b2, b3 = log_uniform(rng, size=3)
    return MaterialParams(mu=mu, lam=lam, mu_c=mu_c, L_c=L_c, b1=b1, b2=b2, b3=b3)


def random_frame(rng: np.random.Generator, kind: str | None = None) -> SurfaceFrame:
    kind = kind or rng.choice(["plane", "cylinder", "sphere"])
    x = rng.uniform(-0.4, 0.4, 2)
    if kind == "plane":
        return frame_at(plane(), x)
    if kind == "cylinder":
        return frame_at(cylinder(float(rng.uniform(0.5, 3.0))), x)
    return frame_at(sphere(float(rng.uniform(1.0, 3.0))), x)


@dataclass(frozen=True)
class Instance:
    G: np.ndarray          # free 3x2 columns (entries in [-1, 1])
    frame: SurfaceFrame
    Q: np.ndarray
    p: MaterialParams

    @property
    def strain(self):
        """(G | 0) DTheta(0)^-1: the membrane strain E or the bending tensor K."""
        return np.column_stack([self.G, np.zeros(3)]) @ self.frame.DTheta0_inv


def random_instance(rng: np.random.Generator, kind: str | None = None) -> Instance:
    frame = random_frame(rng, kind)
    G = rng.uniform(-1, 1, (3, 2))
    return Instance(G, frame, random_rotation(rng), random_params(rng))
