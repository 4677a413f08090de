"""Midsurface differential geometry for curved shells.

A :class:`Surface` wraps a parametrization y0 of a rectangle omega in R^2 together
with its first and second derivatives. :func:`frame_at` produces the local data
used throughout: the unit normal n0 (oriented by d1 y0 x d2 y0), the fundamental
forms, the Weingarten map, the tangential projector and the polar factors of
D Theta(0) = (D y0 | n0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .tensor_core import EYE3, outer


class GeometryError(ValueError):
    pass


class ThicknessError(GeometryError):
    pass


@dataclass(frozen=True)
class Surface:
    """Parametrized midsurface.

    ``y0(x) -> (3,)``, ``jac(x) -> (3, 2)``, ``hess(x) -> (2, 2, 3)`` with
    ``hess[a, b] = d_a d_b y0``. Missing derivatives fall back to central
    differences with ``fd_step``.
    """

    y0: Callable[[np.ndarray], np.ndarray]
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    lower: tuple = (-np.inf, -np.inf)
    upper: tuple = (np.inf, np.inf)
    fd_step: float = 1e-5
    name: str = "surface"

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= np.asarray(self.lower)) and np.all(x <= np.asarray(self.upper)))

    def _check(self, x):
        x = np.asarray(x, dtype=float)[:2]
        if not self.contains(x):
            raise GeometryError(f"point {x} outside the parameter rectangle of {self.name}")
        return x

    def position(self, x):
        return np.asarray(self.y0(self._check(x)), dtype=float)

    def first(self, x):
        x = self._check(x)
        if self.jac is not None:
            return np.asarray(self.jac(x), dtype=float)
        h = self.fd_step
        return np.column_stack([(self.y0(x + h * e) - self.y0(x - h * e)) / (2 * h) for e in np.eye(2)])

    def second(self, x):
        x = self._check(x)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float)
        h = 1e-4
        out = np.empty((2, 2, 3))
        E = np.eye(2)
        for a in range(2):
            for b in range(2):
                ea, eb = h * E[a], h * E[b]
                out[a, b] = (self.y0(x + ea + eb) - self.y0(x + ea - eb) - self.y0(x - ea + eb) + self.y0(x - ea - eb)) / (4 * h * h)
        return out


def plane(lower=(-1.0, -1.0), upper=(1.0, 1.0)) -> Surface:
    return Surface(
        lambda x: np.array([x[0], x[1], 0.0]),
        lambda x: np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
        lambda x: np.zeros((2, 2, 3)),
        tuple(lower), tuple(upper), name="plane",
    )


def cylinder(r: float = 2.0, lower=(-1.0, -1.0), upper=(1.0, 1.0)) -> Surface:
    """y0 = (r cos(x1/r), r sin(x1/r), x2); the normal points outward."""
    if r <= 0:
        raise GeometryError("cylinder radius must be positive")

    def y0(x):
        return np.array([r * np.cos(x[0] / r), r * np.sin(x[0] / r), x[1]])

    def jac(x):
        c, s = np.cos(x[0] / r), np.sin(x[0] / r)
        return np.array([[-s, 0.0], [c, 0.0], [0.0, 1.0]])

    def hess(x):
        c, s = np.cos(x[0] / r), np.sin(x[0] / r)
        H = np.zeros((2, 2, 3))
        H[0, 0] = np.array([-c, -s, 0.0]) / r
        return H

    return Surface(y0, jac, hess, tuple(lower), tuple(upper), name=f"cylinder(r={r})")


def sphere(r: float = 2.0, lower=(-0.5, -0.5), upper=(0.5, 0.5)) -> Surface:
    """Graph patch (x1, x2, sqrt(r^2 - x1^2 - x2^2)) of the upper hemisphere."""
    if r <= 0:
        raise GeometryError("sphere radius must be positive")
    if max(np.hypot(lower[0], lower[1]), np.hypot(upper[0], upper[1]), np.hypot(lower[0], upper[1]),
           np.hypot(upper[0], lower[1])) >= r:
        raise GeometryError("sphere patch rectangle must stay inside the disc of radius r")

    def f(x):
        return np.sqrt(r * r - x[0] ** 2 - x[1] ** 2)

    def y0(x):
        return np.array([x[0], x[1], f(x)])

    def jac(x):
        z = f(x)
        return np.array([[1.0, 0.0], [0.0, 1.0], [-x[0] / z, -x[1] / z]])

    def hess(x):
        z = f(x)
        H = np.zeros((2, 2, 3))
        z3 = z**3
        H[0, 0, 2] = -(r * r - x[1] ** 2) / z3
        H[1, 1, 2] = -(r * r - x[0] ** 2) / z3
        H[0, 1, 2] = H[1, 0, 2] = -x[0] * x[1] / z3
        return H

    return Surface(y0, jac, hess, tuple(lower), tuple(upper), name=f"sphere(r={r})")


def graph(expression: str, lower=(-1.0, -1.0), upper=(1.0, 1.0)) -> Surface:
    """Graph surface (x1, x2, f(x1, x2)) with ``f`` given as an arithmetic expression.

    Allowed names: x1, x2, pi, E and the usual elementary functions (sin, cos,
    exp, log, sqrt, ...). Derivatives are symbolic.
    """
    import sympy as sp

    x1, x2 = sp.symbols("x1 x2")
    allowed = {n: getattr(sp, n) for n in ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "atan", "pi", "E")}
    allowed.update({"x1": x1, "x2": x2})
    try:
        f = sp.sympify(expression, locals=allowed)
    except (sp.SympifyError, SyntaxError, TypeError) as exc:
        raise GeometryError(f"cannot parse graph expression {expression!r}: {exc}") from exc
    extra = f.free_symbols - {x1, x2}
    if extra:
        raise GeometryError(f"graph expression uses unknown symbols {sorted(map(str, extra))}")
    fx = [sp.diff(f, v) for v in (x1, x2)]
    fxx = [[sp.diff(f, a, b) for b in (x1, x2)] for a in (x1, x2)]
    F = sp.lambdify((x1, x2), f, "numpy")
    FX = sp.lambdify((x1, x2), fx, "numpy")
    FXX = sp.lambdify((x1, x2), fxx, "numpy")

    def y0(x):
        return np.array([x[0], x[1], float(F(x[0], x[1]))])

    def jac(x):
        g = np.asarray(FX(x[0], x[1]), dtype=float)
        return np.array([[1.0, 0.0], [0.0, 1.0], [g[0], g[1]]])

    def hess(x):
        H = np.zeros((2, 2, 3))
        H[:, :, 2] = np.asarray(FXX(x[0], x[1]), dtype=float)
        return H

    return Surface(y0, jac, hess, tuple(lower), tuple(upper), name=f"graph({expression})")


def from_callable(y0: Callable, lower=(-1.0, -1.0), upper=(1.0, 1.0), fd_step: float = 1e-5) -> Surface:
    """Arbitrary parametrization; all derivatives by finite differences."""
    return Surface(lambda x: np.asarray(y0(x), dtype=float), None, None, tuple(lower), tuple(upper), fd_step, "callable")


def polar(F):
    """F = Q U with Q in SO(3) and U symmetric positive definite (F must have det > 0)."""
    F = np.asarray(F, dtype=float)
    if np.linalg.det(F) <= 0:
        raise GeometryError("polar decomposition needs det F > 0")
    w, V = np.linalg.eigh(F.T @ F)
    U = (V * np.sqrt(w)) @ V.T
    Uinv = (V / np.sqrt(w)) @ V.T
    return F @ Uinv, 0.5 * (U + U.T)


@dataclass(frozen=True)
class SurfaceFrame:
    Dy0: np.ndarray
    n0: np.ndarray
    Dn0: np.ndarray
    DTheta0: np.ndarray
    I: np.ndarray
    II: np.ndarray
    L: np.ndarray
    A_y0: np.ndarray
    surf_el: float
    Q0: np.ndarray
    U0: np.ndarray

    @property
    def DTheta0_inv(self):
        return np.linalg.inv(self.DTheta0)

    def dtheta(self, x3: float):
        """(D y0 | n0) + x3 (D n0 | 0)."""
        M = self.DTheta0.copy()
        M[:, :2] += x3 * self.Dn0
        return M


def flat_frame() -> SurfaceFrame:
    return frame_at(plane(), (0.0, 0.0))


def frame_at(s: Surface, x) -> SurfaceFrame:
    Dy = s.first(x)
    H = s.second(x)
    c = np.cross(Dy[:, 0], Dy[:, 1])
    nc = np.linalg.norm(c)
    if nc < 1e-12:
        raise GeometryError(f"degenerate immersion at {x}: |d1 y0 x d2 y0| = {nc:.3e}")
    n = c / nc
    P = EYE3 - outer(n, n)
    dc = [np.cross(H[0, i], Dy[:, 1]) + np.cross(Dy[:, 0], H[1, i]) for i in range(2)]
    Dn = np.column_stack([P @ dc[i] / nc for i in range(2)])
    DT = np.column_stack([Dy, n])
    I = Dy.T @ Dy
    II = -Dy.T @ Dn
    II = 0.5 * (II + II.T)
    L = np.linalg.solve(I, II)
    DTinv = np.linalg.inv(DT)
    A = np.column_stack([Dy, np.zeros(3)]) @ DTinv
    Q0, U0 = polar(DT)
    return SurfaceFrame(Dy, n, Dn, DT, I, II, L, A, float(np.linalg.det(DT)), Q0, U0)


def dtheta_thick(s: Surface, x, x3: float):
    """D_x Theta(x3) at (x1, x2); raises ThicknessError once its determinant is not positive."""
    M = frame_at(s, x).dtheta(x3)
    if np.linalg.det(M) <= 0:
        raise ThicknessError(f"det D Theta({x3}) <= 0 at {x}; thickness coordinate too large")
    return M


def decompose_tangent_normal(X, frame: SurfaceFrame):
    X = np.asarray(X, dtype=float)
    Xp = frame.A_y0 @ X
    return Xp, X - Xp
