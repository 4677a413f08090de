"""Seeded verification suites comparing closed forms with brute-force oracles.

Each suite returns a :class:`SuiteResult`. Closed-form routines are looked up
on their modules at call time so that tests can substitute tampered versions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curvature as cm
from . import energies as en
from . import homogenization as hom
from . import oracle as orc
from .geometry import flat_frame
from .rotation_fields import random_analytic_field, random_rotation


@dataclass
class SuiteResult:
    name: str
    passed: bool
    instances: int
    max_residual: float
    tol: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.max_residual = float(self.max_residual)

    def as_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "instances": self.instances,
                "max_residual": self.max_residual, "tol": self.tol, "details": self.details}


def _rel(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + abs(b))


def _vec_rel(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / (1.0 + float(np.max(np.abs(b))))


def _mutated_completion(K, frame, p):
    """Deliberately wrong c* (trace weight b3/b1 instead of b3/(b1+b3)); negative control."""
    K = np.asarray(K, dtype=float)
    n0 = frame.n0
    return (p.b2 - p.b1) / (p.b1 + p.b2) * (K.T @ n0) - p.b3 / p.b1 * np.trace(K) * n0


def suite_curvature(rng, instances: int, tol: float, kind=None, thickness: bool = False,
                    name: str = "o4_curvature", mutation: str | None = None) -> SuiteResult:
    completion = _mutated_completion if mutation == "c_star" else hom.optimal_curvature_completion
    worst = {"value": 0.0, "argmin": 0.0, "intermediate": 0.0, "stationarity": 0.0}
    for _ in range(instances):
        inst = orc.random_instance(rng, kind)
        x3 = float(rng.uniform(-0.1, 0.1)) if thickness else 0.0
        K = np.column_stack([inst.G, np.zeros(3)]) @ np.linalg.inv(inst.frame.dtheta(x3))
        res = orc.minimize_quadratic(orc.curvature_objective(inst.G, inst.frame, inst.p, x3))
        c = completion(K, inst.frame, inst.p)
        val = hom.w_curv_hom(K, inst.frame, inst.p).total
        worst["value"] = max(worst["value"], _rel(val, res.value))
        worst["argmin"] = max(worst["argmin"], _vec_rel(c, res.v))
        worst["intermediate"] = max(worst["intermediate"], _rel(hom.w_curv_hom_intermediate(K, inst.frame, inst.p), res.value))
        st = hom.curvature_stationarity(K, c, inst.frame, inst.p)
        worst["stationarity"] = max(worst["stationarity"], float(np.linalg.norm(st)) / (1.0 + inst.p.curv_scale))
    m = max(worst.values())
    return SuiteResult(name, m <= tol, instances, m, tol, worst)


def suite_plate_worked(tol: float = 1e-12) -> SuiteResult:
    p = en.MaterialParams(mu=1.0, L_c=1.0, b1=1.0, b2=1.0, b3=1.0)
    G = np.zeros((3, 3))
    G[0, 0] = G[1, 1] = 1.0
    v_plate = hom.w_curv_hom_plate(G, p).total
    v_flat = hom.w_curv_hom(G, flat_frame(), p).total
    r = max(abs(v_plate - 4.0), abs(v_flat - 4.0))
    return SuiteResult("plate_worked_value", r <= tol, 1, r, tol, {"plate": v_plate, "flat_frame": v_flat, "expected": 4.0})


def suite_membrane(rng, instances: int, tol: float, kind=None) -> SuiteResult:
    worst = {"value": 0.0, "argmin": 0.0, "degenerate_mu_c": 0.0, "zero_strain": 0.0}
    for _ in range(instances):
        inst = orc.random_instance(rng, kind)
        E = inst.strain
        res = orc.minimize_quadratic(orc.o2_objective(inst.G, inst.frame, inst.Q, inst.p))
        d = hom.optimal_director(E, inst.frame, inst.p, inst.Q)
        worst["value"] = max(worst["value"], _rel(hom.w_mp_hom(E, inst.frame, inst.p).total, res.value))
        worst["argmin"] = max(worst["argmin"], _vec_rel(d, res.v))
    # degenerate parameter checks must hold exactly
    inst = orc.random_instance(rng, kind)
    p = inst.p.replace(mu_c=inst.p.mu)
    d = hom.optimal_director(inst.strain, inst.frame, p, inst.Q)
    a = 1.0 - p.lam / (2 * p.mu + p.lam) * np.trace(inst.strain)
    worst["degenerate_mu_c"] = float(np.max(np.abs(d - a * (inst.Q @ inst.frame.n0))))
    d0 = hom.optimal_director(np.zeros((3, 3)), inst.frame, inst.p, inst.Q)
    worst["zero_strain"] = float(np.max(np.abs(d0 - inst.Q @ inst.frame.n0))) + abs(hom.w_mp_hom(np.zeros((3, 3)), inst.frame, inst.p).total)
    ok = worst["value"] <= tol and worst["argmin"] <= tol and worst["degenerate_mu_c"] == 0.0 and worst["zero_strain"] == 0.0
    return SuiteResult("o2_membrane", ok, instances, max(worst.values()), tol, worst)


def suite_o1(rng, instances: int, tol: float) -> SuiteResult:
    worst = 0.0
    for _ in range(instances):
        inst = orc.random_instance(rng)
        res = orc.minimize_quadratic(orc.o1_objective(inst.G, inst.frame, inst.Q, inst.p, 0.0))
        worst = max(worst, _rel(hom.w_mp_hom(inst.strain, inst.frame, inst.p).total, res.value))
    return SuiteResult("o1_membrane_midsurface", worst <= tol, instances, worst, tol)


def suite_nye(rng, instances: int, tol: float = 1e-14) -> SuiteResult:
    worst = {"roundtrip": 0.0, "devsym": 0.0, "skew": 0.0, "trace": 0.0, "inverse_order": 0.0}
    for _ in range(instances):
        G = rng.uniform(-1, 1, (3, 3))
        r = cm.sym_skew_tr_correspondence(G).residuals()
        for k in ("roundtrip", "devsym", "skew", "trace"):
            worst[k] = max(worst[k], r[k])
        A = rng.uniform(-1, 1, (3, 3))
        worst["inverse_order"] = max(worst["inverse_order"], float(np.linalg.norm(cm.nye_gamma_to_alpha(cm.nye_alpha_to_gamma(A)) - A)))
    m = max(worst.values())
    return SuiteResult("nye", m <= tol, instances, m, tol, worst)


def alpha_gamma_residuals(rng, instances: int) -> dict:
    """Relative gap between the alpha form (after Nye) and the Gamma form, for two trace-weight maps."""
    same, shifted = 0.0, 0.0
    for _ in range(instances):
        p = orc.random_params(rng)
        G = rng.uniform(-1, 1, (3, 3))
        A = cm.nye_gamma_to_alpha(G)
        ref = en.w_curv_gamma(G, p).total
        same = max(same, abs(en.w_curv_alpha(A, p).total - ref) / max(1e-300, abs(ref)))
        shifted = max(shifted, abs(en.w_curv_alpha(A, p, b3=p.b3 - p.b1).total - ref) / max(1e-300, abs(ref)))
    return {"same_b": same, "b3_minus_b1": shifted}


def suite_alpha_gamma_probe(rng, instances: int, tol: float = 1e-12) -> SuiteResult:
    """Adjudicates which trace-weight map makes the alpha form equal the Gamma form."""
    r = alpha_gamma_residuals(rng, instances)
    verified = [k for k, v in r.items() if v < tol]
    return SuiteResult("alpha_gamma_form_probe", len(verified) == 1, instances, min(r.values()), tol,
                       {**r, "verified": verified})


def suite_khat_isotropic(rng, samples: int, tol: float = 1e-12) -> SuiteResult:
    worst = 0.0
    for _ in range(samples):
        f = random_analytic_field(rng)
        x = rng.uniform(-1, 1, 3)
        p = orc.random_params(rng)
        a = en.w_curv_khat_isotropic(cm.k_hat_tensor(f, x), p).total
        b = en.w_curv_gamma(cm.wryness(f, x), p).total
        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return SuiteResult("khat_isotropic_form", worst <= tol, samples, worst, tol)


def suite_a3(rng, instances: int = 1000, pairs: int = 10, tol: float = 1e-12) -> SuiteResult:
    res = {"printed": 0.0, "expansion": 0.0}
    for _ in range(pairs):
        b1, b3 = orc.log_uniform(rng, size=2)
        p = en.MaterialParams(b1=float(b1), b2=1.0, b3=float(b3))
        cands = en.a3_candidates(p.b1, p.b3)
        for _ in range(instances):
            G = rng.uniform(-1, 1, (3, 3))
            ref = en.w_curv_gamma(G, p).total
            for k, a3 in cands.items():
                res[k] = max(res[k], abs(en.w_curv_devsym(G, p, a3=a3).total - ref) / max(1.0, abs(ref)))
    verified = [k for k, v in res.items() if v < tol]
    return SuiteResult("a3_adjudication", len(verified) == 1, instances * pairs, min(res.values()), tol,
                       {**res, "verified": verified})


DR_CANDIDATES = {"printed": (1.0, 1.0, 1.0 / 12.0), "expansion": (2.0, 2.0, 1.0 / 6.0)}


def suite_dr_identity(rng, samples: int = 1000, tol: float = 1e-12) -> SuiteResult:
    res = {k: 0.0 for k in DR_CANDIDATES}
    for _ in range(samples):
        f = random_analytic_field(rng)
        x = rng.uniform(-1, 1, 3)
        ref = cm.grad_norm2(f, x)
        A = cm.dislocation_density(f, x)
        for k, c in DR_CANDIDATES.items():
            res[k] = max(res[k], abs(cm.drnorm_from_alpha(A, c) - ref) / max(1.0, ref))
    verified = [k for k, v in res.items() if v < tol]
    return SuiteResult("dr_norm_identity", len(verified) == 1, samples, min(res.values()), tol,
                       {**res, "verified": verified})


def suite_invariance(rng, samples: int = 100, tol: float = 1e-10) -> SuiteResult:
    worst = {"frame_gamma": 0.0, "frame_alpha": 0.0, "frame_k": 0.0, "conjugation": 0.0, "isotropy_energy": 0.0}
    for _ in range(samples):
        f = random_analytic_field(rng)
        x = rng.uniform(-1, 1, 3)
        Qb = random_rotation(rng)
        g = f.left_multiply(Qb)
        worst["frame_gamma"] = max(worst["frame_gamma"], float(np.max(np.abs(cm.wryness(g, x) - cm.wryness(f, x)))))
        worst["frame_alpha"] = max(worst["frame_alpha"], float(np.max(np.abs(cm.dislocation_density(g, x) - cm.dislocation_density(f, x)))))
        worst["frame_k"] = max(worst["frame_k"], float(np.max(np.abs(cm.k_tensor(g, x).blocks - cm.k_tensor(f, x).blocks))))
        Q = random_rotation(rng)
        t = f.isotropy_transform(Q)
        Gt = cm.wryness(t, x)
        G = cm.wryness(f, Q @ x)
        worst["conjugation"] = max(worst["conjugation"], float(np.max(np.abs(Gt - Q.T @ G @ Q))))
        p = orc.random_params(rng)
        e0 = en.w_curv_gamma(G, p).total
        worst["isotropy_energy"] = max(worst["isotropy_energy"], abs(en.w_curv_gamma(Gt, p).total - e0) / max(1.0, e0))
    w = anisotropy_witness_record()
    worst_frame = max(worst["frame_gamma"], worst["frame_alpha"], worst["frame_k"])
    ok = worst_frame <= 1e-12 and worst["conjugation"] <= tol and worst["isotropy_energy"] <= tol and w["relative_change"] > 1e-2
    return SuiteResult("invariance", ok, samples, max(worst.values()), tol, {**worst, "witness": w})


def witness_field(t: float = 1.0):
    from .rotation_fields import AffineAngle, make_exp_field
    return make_exp_field([0.0, 0.0, 1.0], AffineAngle(0.0, np.array([t, 0.0, 0.0])))


def anisotropy_witness_record(t: float = 1.0) -> dict:
    """Documented witness: R = exp(anti(t x1 e3)), Q = (e1 | e3 | -e2), direction e3."""
    f = witness_field(t)
    x = np.array([0.3, -0.2, 0.1])
    w = cm.anisotropy_witness(f, x)
    p = en.MaterialParams()
    moved = f.right_multiply(cm.WITNESS_ROTATION)
    w["w_curv_gamma_before"] = en.w_curv_gamma(cm.wryness(f, x), p).total
    w["w_curv_gamma_after"] = en.w_curv_gamma(cm.wryness(moved, x), p).total
    w["khat_isotropic_before"] = en.w_curv_khat_isotropic(cm.k_hat_tensor(f, x), p).total
    w["khat_isotropic_after"] = en.w_curv_khat_isotropic(cm.k_hat_tensor(moved, x), p).total
    return w


def suite_flat_corollary(rng, instances: int) -> SuiteResult:
    frame = flat_frame()
    mismatches = 0
    for _ in range(instances):
        p = orc.random_params(rng)
        G = np.zeros((3, 3))
        G[:, :2] = rng.uniform(-1, 1, (3, 2))
        a = hom.w_curv_hom(G, frame, p)
        b = hom.w_curv_hom_plate(G, p)
        if (a.sym_term, a.skew_term, a.trace_term, a.normal_term) != (b.sym_term, b.skew_term, b.trace_term, b.normal_term):
            mismatches += 1
    return SuiteResult("flat_corollary_bitwise", mismatches == 0, instances, float(mismatches), 0.0)


def suite_grid_fallback(rng, instances: int = 10, tol: float = 1e-6) -> SuiteResult:
    worst = 0.0
    for _ in range(instances):
        inst = orc.random_instance(rng)
        f = orc.o2_objective(inst.G, inst.frame, inst.Q, inst.p)
        _, v = orc.grid_refine_min(f)
        worst = max(worst, abs(v - orc.minimize_quadratic(f).value))
    return SuiteResult("grid_fallback", worst <= tol, instances, worst, tol)


def suite_positive_definite(rng, instances: int) -> SuiteResult:
    worst = np.inf
    for _ in range(instances):
        inst = orc.random_instance(rng)
        lam = float(np.min(np.linalg.eigvalsh(hom.curvature_normal_matrix(inst.frame, inst.p))))
        worst = min(worst, lam)
    return SuiteResult("normal_matrix_positive", worst > 0, instances, worst, 0.0)


def run_all(seed: int, instances: int = 1000, tol: float = 1e-10, mutation: str | None = None) -> list[SuiteResult]:
    """All suites; each draws from its own generator spawned from ``seed``."""
    rngs = iter(np.random.default_rng(seed).spawn(16))
    n = instances
    return [
        suite_curvature(next(rngs), n, tol, None, False, "o4_curvature", mutation),
        suite_curvature(next(rngs), n, tol, None, True, "o3_curvature", mutation),
        suite_curvature(next(rngs), n, tol, "plane", False, "plate_curvature", mutation),
        suite_plate_worked(),
        suite_membrane(next(rngs), n, tol),
        suite_o1(next(rngs), max(1, n // 5), tol),
        suite_nye(next(rngs), n),
        suite_alpha_gamma_probe(next(rngs), n),
        suite_khat_isotropic(next(rngs), max(1, n // 10)),
        suite_a3(next(rngs), n, 10),
        suite_dr_identity(next(rngs), n),
        suite_invariance(next(rngs), max(1, n // 10), tol),
        suite_flat_corollary(next(rngs), n),
        suite_grid_fallback(next(rngs), max(1, min(10, n // 100))),
        suite_positive_definite(next(rngs), n),
    ]


def degenerate_probe() -> dict:
    """b1 = b3 = 0 leaves the trace direction of the completion unpenalized."""
    p = en.MaterialParams(b1=0.0, b2=1.0, b3=0.0, allow_degenerate=True)
    G = np.array([[1.0, 0.2], [0.1, 0.5], [0.3, -0.4]])
    try:
        orc.minimize_quadratic(orc.curvature_objective(G, flat_frame(), p))
    except orc.DegenerateObjectiveError as exc:
        return {"degenerate_detected": True, "message": str(exc)}
    return {"degenerate_detected": False, "message": ""}
