"""Quadratic isotropic strain and curvature energy densities.

Every curvature energy carries the prefactor mu * L_c^2 inside its terms, so
breakdowns from different parameter sets are directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import permute_A
from .tensor_core import EYE3, ThirdOrder, axl, dev, norm2, skew, sym


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class MaterialParams:
    """Isotropic Cosserat material constants.

    ``kappa`` is derived as (2 mu + 3 lambda) / 3. ``a1, a2, a3`` are the weights
    of the dev-sym curvature form; a3 = (b1 + 3 b3) / 3 makes it equal to the
    sym form (checked numerically in the test suite).
    """

    mu: float = 1.0
    lam: float = 1.0
    mu_c: float = 1.0
    L_c: float = 1.0
    b1: float = 1.0
    b2: float = 1.0
    b3: float = 1.0
    allow_degenerate: bool = False
    kappa: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "kappa", (2.0 * self.mu + 3.0 * self.lam) / 3.0)
        for name in ("mu", "lam", "mu_c", "L_c", "b1", "b2", "b3"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        checks = [("mu", self.mu > 0), ("mu_c", self.mu_c > 0), ("L_c", self.L_c > 0), ("kappa", self.kappa > 0)]
        if self.allow_degenerate:
            checks += [(n, getattr(self, n) >= 0) for n in ("b1", "b2", "b3")]
        else:
            checks += [(n, getattr(self, n) > 0) for n in ("b1", "b2", "b3")]
        for name, ok in checks:
            if not ok:
                raise ParameterError(f"{name} violates its positivity requirement")

    @property
    def a1(self) -> float:
        return self.b1

    @property
    def a2(self) -> float:
        return self.b2

    @property
    def a3(self) -> float:
        return a3_candidates(self.b1, self.b3)["expansion"]

    @property
    def curv_scale(self) -> float:
        return self.mu * self.L_c**2

    def replace(self, **kw) -> "MaterialParams":
        d = {k: getattr(self, k) for k in ("mu", "lam", "mu_c", "L_c", "b1", "b2", "b3", "allow_degenerate")}
        d.update(kw)
        return MaterialParams(**d)

    def as_dict(self) -> dict:
        return {
            "mu": self.mu, "lambda": self.lam, "mu_c": self.mu_c, "kappa": self.kappa, "L_c": self.L_c,
            "b1": self.b1, "b2": self.b2, "b3": self.b3, "a1": self.a1, "a2": self.a2, "a3": self.a3,
        }


def a3_candidates(b1: float, b3: float) -> dict:
    """The two competing trace weights for the dev-sym curvature form."""
    return {"printed": (12.0 * b3 - b1) / 3.0, "expansion": (b1 + 3.0 * b3) / 3.0}


@dataclass(frozen=True)
class EnergyBreakdown:
    sym_term: float
    skew_term: float
    trace_term: float
    normal_term: float = 0.0

    @property
    def total(self) -> float:
        return self.sym_term + self.skew_term + self.trace_term + self.normal_term

    def as_dict(self) -> dict:
        return {
            "sym": self.sym_term, "skew": self.skew_term, "trace": self.trace_term,
            "normal": self.normal_term, "total": self.total,
        }


def w_mp(U, p: MaterialParams) -> EnergyBreakdown:
    """mu |dev sym(U - 1)|^2 + mu_c |skew(U - 1)|^2 + kappa/2 tr(U - 1)^2."""
    X = np.asarray(U, dtype=float) - EYE3
    return EnergyBreakdown(
        p.mu * norm2(dev(sym(X))),
        p.mu_c * norm2(skew(X)),
        0.5 * p.kappa * np.trace(X) ** 2,
    )


def w_mp_lame(U, p: MaterialParams) -> EnergyBreakdown:
    """Same energy in the mu |sym|^2 + lambda/2 tr^2 form."""
    X = np.asarray(U, dtype=float) - EYE3
    return EnergyBreakdown(p.mu * norm2(sym(X)), p.mu_c * norm2(skew(X)), 0.5 * p.lam * np.trace(X) ** 2)


def w_curv_gamma(G, p: MaterialParams) -> EnergyBreakdown:
    G = np.asarray(G, dtype=float)
    s = p.curv_scale
    return EnergyBreakdown(s * p.b1 * norm2(sym(G)), s * p.b2 * norm2(skew(G)), s * p.b3 * np.trace(G) ** 2)


def w_curv_alpha(A, p: MaterialParams, b3: float | None = None) -> EnergyBreakdown:
    """mu L_c^2 (b1 |sym A|^2 + b2 |skew A|^2 + b3/4 tr(A)^2).

    ``b3`` overrides the trace weight; with b3 -> b3 - b1 the value coincides with
    :func:`w_curv_gamma` of the corresponding wryness.
    """
    A = np.asarray(A, dtype=float)
    s = p.curv_scale
    t = p.b3 if b3 is None else b3
    return EnergyBreakdown(s * p.b1 * norm2(sym(A)), s * p.b2 * norm2(skew(A)), s * 0.25 * t * np.trace(A) ** 2)


def w_curv_devsym(G, p: MaterialParams, a3: float | None = None) -> EnergyBreakdown:
    G = np.asarray(G, dtype=float)
    s = p.curv_scale
    a3 = p.a3 if a3 is None else a3
    return EnergyBreakdown(s * p.a1 * norm2(dev(sym(G))), s * p.a2 * norm2(skew(G)), s * a3 * np.trace(G) ** 2)


def w_curv_khat(K: ThirdOrder, weights, scale: float = 1.0 / 12.0, direction_weights=None) -> float:
    """scale * (w1 |sym K|^2 + w2 |skew K|^2 + w3 sum_k tr(K_k)^2), block-wise.

    ``scale`` should include mu L_c^2 / 12. ``direction_weights`` (shape (3, 3),
    row k for block k) replaces the common weights per material direction; with
    equal rows the energy is invariant under R(x) -> R(Qx) Q, otherwise not.
    """
    W = np.tile(np.asarray(weights, dtype=float), (3, 1)) if direction_weights is None else np.asarray(direction_weights, dtype=float)
    total = 0.0
    for k in range(3):
        B = K.blocks[k]
        total += W[k, 0] * norm2(sym(B)) + W[k, 1] * norm2(skew(B)) + W[k, 2] * np.trace(B) ** 2
    return float(scale * total)


def w_curv_khat_isotropic(K_hat: ThirdOrder, p: MaterialParams) -> EnergyBreakdown:
    """Gamma-form energy evaluated on axl(A.K_hat)."""
    G = permute_A(K_hat).axl(tol=1e-6)
    return w_curv_gamma(G, p)
