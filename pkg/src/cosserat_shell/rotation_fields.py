"""SO(3)-valued fields on box domains and their spatial derivatives.

A :class:`RotationField` is either *analytic* (it carries an exact gradient)
or evaluated in finite-difference mode with central differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .tensor_core import EYE3, anti

DEFAULT_FD_STEP = 1e-5
_SMALL_ANGLE = 1e-4


class DomainError(ValueError):
    """Evaluation point outside the field's domain."""


def rodrigues(v):
    """exp(anti(v)) via Rodrigues' formula, Taylor series for small |v|."""
    v = np.asarray(v, dtype=float)
    theta = float(np.linalg.norm(v))
    K = anti(v)
    K2 = K @ K
    if theta < _SMALL_ANGLE:
        t2 = theta * theta
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / (theta * theta)
    return EYE3 + a * K + b * K2


@dataclass(frozen=True)
class Box:
    lower: np.ndarray = field(default_factory=lambda: np.full(3, -np.inf))
    upper: np.ndarray = field(default_factory=lambda: np.full(3, np.inf))

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower + margin) and np.all(x <= self.upper - margin))


def _as_point(x):
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 2:
        x = np.append(x, 0.0)
    if x.size != 3:
        raise ValueError(f"expected a point in R^2 or R^3, got {x.size} components")
    return x


@dataclass(frozen=True)
class AffineAngle:
    """theta(x) = theta0 + <grad, x>."""

    theta0: float
    grad: np.ndarray

    def __call__(self, x) -> float:
        return float(self.theta0 + np.dot(self.grad, _as_point(x)))


@dataclass(frozen=True)
class Vec3Field:
    evaluator: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = DEFAULT_FD_STEP

    def __call__(self, x):
        return np.asarray(self.evaluator(_as_point(x)), dtype=float)

    def jac(self, x):
        """3x3 Jacobian with column i equal to d/dx_i."""
        x = _as_point(x)
        if self.jacobian is not None:
            return np.asarray(self.jacobian(x), dtype=float)
        h = self.fd_step
        cols = []
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            cols.append((self(x + e) - self(x - e)) / (2 * h))
        return np.column_stack(cols)

    @classmethod
    def constant(cls, v) -> "Vec3Field":
        v = np.asarray(v, dtype=float)
        return cls(lambda x: v, lambda x: np.zeros((3, 3)))


@dataclass(frozen=True)
class RotationField:
    """Map x -> R(x) in SO(3).

    ``gradient(x)`` (optional) returns a (3, 3, 3) array whose entry ``[i]`` is
    dR/dx_i. Without it, derivatives use central differences with ``fd_step``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = DEFAULT_FD_STEP
    domain: Box = field(default_factory=Box)
    check: bool = True

    @property
    def mode(self) -> str:
        return "analytic" if self.gradient is not None else "finite_difference"

    def __call__(self, x):
        x = _as_point(x)
        if not self.domain.contains(x):
            raise DomainError(f"point {x} outside the field domain")
        R = np.asarray(self.evaluator(x), dtype=float)
        if self.check:
            err = np.linalg.norm(R.T @ R - EYE3)
            if err > 1e-10 or np.linalg.det(R) <= 0:
                raise ValueError(f"field value is not a rotation (|R^T R - I| = {err:.2e})")
        return R

    def derivatives(self, x):
        """All three partials, stacked as ``out[i] = dR/dx_i``."""
        x = _as_point(x)
        if self.gradient is not None:
            if not self.domain.contains(x):
                raise DomainError(f"point {x} outside the field domain")
            return np.asarray(self.gradient(x), dtype=float)
        h = self.fd_step
        if not self.domain.contains(x, margin=h):
            raise DomainError(f"point {x} closer than the FD step to the domain boundary")
        out = np.empty((3, 3, 3))
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            out[i] = (self.evaluator(x + e) - self.evaluator(x - e)) / (2 * h)
        return out

    def derivative(self, x, i: int):
        return self.derivatives(x)[i]

    def finite_difference(self, step: float = DEFAULT_FD_STEP) -> "RotationField":
        """Same values, derivatives by central differences."""
        return RotationField(self.evaluator, None, step, self.domain, self.check)

    def left_multiply(self, Q) -> "RotationField":
        """x -> Q R(x) for a constant rotation Q."""
        Q = np.asarray(Q, dtype=float)
        ev = self.evaluator
        grad = None
        if self.gradient is not None:
            g = self.gradient
            grad = lambda x: np.einsum("ab,ibc->iac", Q, g(x))
        return RotationField(lambda x: Q @ ev(x), grad, self.fd_step, self.domain, self.check)

    def right_multiply(self, Q) -> "RotationField":
        """x -> R(x) Q for a constant rotation Q."""
        Q = np.asarray(Q, dtype=float)
        ev = self.evaluator
        grad = None
        if self.gradient is not None:
            g = self.gradient
            grad = lambda x: np.einsum("iab,bc->iac", g(x), Q)
        return RotationField(lambda x: ev(x) @ Q, grad, self.fd_step, self.domain, self.check)

    def isotropy_transform(self, Q) -> "RotationField":
        """x -> R(Q x) Q, the change of material frame by a constant rotation Q."""
        Q = np.asarray(Q, dtype=float)
        ev = self.evaluator
        grad = None
        if self.gradient is not None:
            g = self.gradient
            # d/dx_i R(Qx) Q = sum_j dR/dy_j (Qx) Q_ji Q
            grad = lambda x: np.einsum("jab,ji,bc->iac", g(Q @ x), Q, Q)
        return RotationField(lambda x: ev(Q @ x) @ Q, grad, self.fd_step, Box(), self.check)


def constant_field(R) -> RotationField:
    R = np.asarray(R, dtype=float)
    return RotationField(lambda x: R, lambda x: np.zeros((3, 3, 3)))


def _unit(axis):
    a = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(a) - 1.0) > 1e-12:
        raise ValueError(f"rotation axis must be a unit vector, got norm {np.linalg.norm(a)}")
    return a


def make_exp_field(axis, angle, fd_step: float = DEFAULT_FD_STEP, domain: Box | None = None) -> RotationField:
    """R(x) = exp(anti(theta(x) * axis(x))).

    ``axis`` is a constant unit vector or a :class:`Vec3Field`; ``angle`` is an
    :class:`AffineAngle` or any callable. The field is analytic exactly when the
    axis is constant and the angle affine.
    """
    domain = domain or Box()
    if isinstance(axis, Vec3Field):
        def ev(x):
            a = axis(x)
            if abs(np.linalg.norm(a) - 1.0) > 1e-10:
                raise ValueError("axis field is not unit length")
            return rodrigues(angle(x) * a)
        return RotationField(ev, None, fd_step, domain)

    a = _unit(axis)
    A = anti(a)

    def ev(x):
        return rodrigues(angle(x) * a)

    if isinstance(angle, AffineAngle):
        grad_theta = np.asarray(angle.grad, dtype=float)

        def grad(x):
            AR = A @ ev(x)
            return grad_theta[:, None, None] * AR[None]

        return RotationField(ev, grad, fd_step, domain)
    return RotationField(ev, None, fd_step, domain)


def product_field(*fields: RotationField) -> RotationField:
    """Pointwise product R_1(x) R_2(x) ... R_n(x)."""
    if not fields:
        raise ValueError("product_field needs at least one factor")
    analytic = all(f.gradient is not None for f in fields)

    def ev(x):
        R = EYE3
        for f in fields:
            R = R @ f.evaluator(x)
        return R

    grad = None
    if analytic:
        def grad(x):
            vals = [f.evaluator(x) for f in fields]
            grads = [f.gradient(x) for f in fields]
            out = np.zeros((3, 3, 3))
            for k in range(len(fields)):
                left = EYE3
                for R in vals[:k]:
                    left = left @ R
                right = EYE3
                for R in vals[k + 1:]:
                    right = right @ R
                out += np.einsum("ab,ibc,cd->iad", left, grads[k], right)
            return out

    return RotationField(ev, grad, fields[0].fd_step, fields[0].domain)


def random_rotation(rng: np.random.Generator):
    """Uniformly distributed rotation (QR of a Gaussian matrix, sign-fixed)."""
    Z = rng.standard_normal((3, 3))
    Q, Rr = np.linalg.qr(Z)
    Q = Q @ np.diag(np.sign(np.diag(Rr)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_analytic_field(rng: np.random.Generator, factors: int = 3, scale: float = 1.0) -> RotationField:
    """Product of exp fields with random unit axes and random affine angles."""
    parts = []
    for _ in range(factors):
        a = rng.standard_normal(3)
        a /= np.linalg.norm(a)
        parts.append(make_exp_field(a, AffineAngle(rng.uniform(-np.pi, np.pi), scale * rng.uniform(-1, 1, 3))))
    return product_field(*parts)
