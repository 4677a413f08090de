"""Command-line interface: ``energy``, ``verify``, ``thinlimit`` and ``report-schema``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import curvature as cm
from . import energies as en
from . import homogenization as hom
from . import oracle as orc
from . import thin_limit as tl
from . import verification as ver
from .config import SCHEMA, ConfigError, RunConfig, load_config
from .geometry import frame_at

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


# ---------------------------------------------------------------- serialization

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """Compact JSON with every float written to 17 significant digits."""
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class Report:
    """Collects JSON-lines records and CSV tables, stamping each record."""

    def __init__(self, command: str, cfg: RunConfig, seed: int):
        self.command, self.hash, self.seed = command, cfg.config_hash, seed
        self.records: list[dict] = []
        self.tables: dict[str, tuple[list, list]] = {}

    def add(self, kind: str, **payload):
        self.records.append({"command": self.command, "config_hash": self.hash, "seed": self.seed, "kind": kind, **payload})

    def table(self, name: str, columns: list, rows: list):
        self.tables[name] = (columns, rows)

    def write(self, out: Path):
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.jsonl", "w") as fh:
            for r in self.records:
                fh.write(dumps(r) + "\n")
        if self.tables:
            (out / "tables").mkdir(exist_ok=True)
        for name, (cols, rows) in self.tables.items():
            with open(out / "tables" / f"{name}.csv", "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(cols)
                for row in rows:
                    w.writerow([_fmt_float(v) if isinstance(v, float) else v for v in row])


# ---------------------------------------------------------------- commands

def _curvature_forms(G, p: en.MaterialParams) -> dict:
    A = cm.nye_gamma_to_alpha(G)
    return {
        "w_curv_gamma": en.w_curv_gamma(G, p).as_dict(),
        "w_curv_alpha": en.w_curv_alpha(A, p).as_dict(),
        "w_curv_devsym": en.w_curv_devsym(G, p).as_dict(),
        # A is an involution, so K-hat = A.K
        "w_curv_khat_isotropic": en.w_curv_khat_isotropic(cm.permute_A(cm.k_from_gamma(G)), p).as_dict(),
    }


def cmd_energy(cfg: RunConfig, seed: int) -> Report:
    rep = Report("energy", cfg, seed)
    p = cfg.material
    block = cfg.raw.get("energy", {})
    lo, hi = np.asarray(cfg.surface.lower), np.asarray(cfg.surface.upper)
    centre = np.where(np.isfinite(lo) & np.isfinite(hi), 0.5 * (lo + hi), 0.0)
    frame = frame_at(cfg.surface, centre)
    rows = []
    for i, s in enumerate(block.get("strains", [])):
        rec = {"index": i}
        if "U" in s:
            rec["w_mp"] = en.w_mp(np.asarray(s["U"], dtype=float), p).as_dict()
        if "gamma" in s:
            rec.update(_curvature_forms(np.asarray(s["gamma"], dtype=float), p))
        if "plate_gamma" in s:
            try:
                rec["w_curv_hom_plate"] = hom.w_curv_hom_plate(np.asarray(s["plate_gamma"], dtype=float), p).as_dict()
            except hom.PlateStrainError as exc:
                raise ConfigError(f"energy.strains.{i}.plate_gamma: {exc}") from exc
        if "E" in s:
            rec["w_mp_hom"] = hom.w_mp_hom(np.asarray(s["E"], dtype=float), frame, p).as_dict()
        if "K" in s:
            rec["w_curv_hom"] = hom.w_curv_hom(np.asarray(s["K"], dtype=float), frame, p).as_dict()
        rep.add("strain_energy", **rec)
        for key in ("w_mp", "w_curv_gamma", "w_curv_hom_plate", "w_mp_hom", "w_curv_hom"):
            if key in rec:
                rows.append([i, key, rec[key]["total"]])
    name = block.get("rotation")
    for j, x in enumerate(block.get("points", [])):
        x = np.asarray(x, dtype=float)
        rec = {"point": x}
        if name is not None:
            R = cfg.fields[name]
            G = cm.wryness(R, x)
            rec["gamma"] = G
            rec["alpha"] = cm.nye_gamma_to_alpha(G)
            rec.update(_curvature_forms(G, p))
            st = hom.strain_assembly(cfg.deformation(), R, cfg.surface, x)
            rec["E"], rec["K"] = st.E, st.K
            rec["w_mp_hom"] = hom.w_mp_hom(st.E, st.frame, p).as_dict()
            rec["w_curv_hom"] = hom.w_curv_hom(st.K, st.frame, p).as_dict()
            rows.append([f"p{j}", "w_mp_hom", rec["w_mp_hom"]["total"]])
            rows.append([f"p{j}", "w_curv_hom", rec["w_curv_hom"]["total"]])
        rep.add("point_energy", **rec)
    rep.add("material", **p.as_dict())
    rep.table("energy", ["item", "energy", "total"], rows)
    return rep


def config_material_suite(cfg: RunConfig, seed: int, instances: int, tol: float) -> ver.SuiteResult:
    """Oracle comparison with the configured material on random strains and frames."""
    rng = np.random.default_rng([seed, 7])
    p = cfg.material
    worst = 0.0
    try:
        for _ in range(instances):
            inst = orc.random_instance(rng)
            K = inst.strain
            r = orc.minimize_quadratic(orc.curvature_objective(inst.G, inst.frame, p))
            worst = max(worst, abs(hom.w_curv_hom(K, inst.frame, p).total - r.value) / (1 + abs(r.value)))
            r = orc.minimize_quadratic(orc.o2_objective(inst.G, inst.frame, inst.Q, p))
            worst = max(worst, abs(hom.w_mp_hom(K, inst.frame, p).total - r.value) / (1 + abs(r.value)))
    except orc.DegenerateObjectiveError as exc:
        return ver.SuiteResult("configured_material", False, instances, float("inf"), tol, {"error": str(exc)})
    return ver.SuiteResult("configured_material", worst <= tol, instances, worst, tol)


def cmd_verify(cfg: RunConfig, seed: int, instances: int, tol: float) -> tuple[Report, bool]:
    rep = Report("verify", cfg, seed)
    mutation = cfg.raw.get("verify", {}).get("mutation", "none")
    results = ver.run_all(seed, instances, tol, None if mutation == "none" else mutation)
    results.append(config_material_suite(cfg, seed, max(1, instances // 10), tol))
    for r in results:
        rep.add("suite", **r.as_dict())
    rep.add("a3_candidates", **en.a3_candidates(cfg.material.b1, cfg.material.b3))
    rep.add("dr_candidates", **{k: list(v) for k, v in ver.DR_CANDIDATES.items()})
    ok = all(r.passed for r in results)
    rep.add("summary", passed=ok, suites=len(results), failed=[r.name for r in results if not r.passed])
    rep.table("verify", ["suite", "passed", "instances", "max_residual", "tol"],
              [[r.name, r.passed, r.instances, r.max_residual, r.tol] for r in results])
    return rep, ok


def _ansatz(cfg: RunConfig) -> tl.AnsatzPair:
    block = cfg.raw.get("thinlimit", {})
    family = block.get("family", "cylinder_identity")
    h = tuple(block.get("h_list", tl.DEFAULT_H_LIST))
    if family == "custom":
        name = block.get("rotation")
        if name is None:
            raise ConfigError("thinlimit.rotation: required for the custom family")
        return tl.AnsatzPair(cfg.deformation(), cfg.fields[name], cfg.surface, h, "custom")
    return tl.DOCUMENTED_FAMILIES[family](h_list=h)


def cmd_thinlimit(cfg: RunConfig, seed: int) -> Report:
    rep = Report("thinlimit", cfg, seed)
    a = _ansatz(cfg)
    cells = cfg.raw.get("thinlimit", {}).get("cells", 4)
    table = tl.convergence_study(a, cfg.material, tl.default_grid(a.surface, cells))
    for row in table.rows:
        rep.add("convergence_row", family=a.name, **row)
    rep.add("convergence_fit", family=a.name, limit=table.limit, slope=table.slope, monotone=table.monotone)
    rep.table("thinlimit", table.columns(), [[r[c] for c in table.columns()] for r in table.rows])
    return rep


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cosserat-shell", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("energy", "verify", "thinlimit"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON configuration file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--instances", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None)
    sub.add_parser("report-schema")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "report-schema":
        print(json.dumps(SCHEMA, indent=2))
        return EXIT_OK
    try:
        cfg = load_config(args.config, {"seed": args.seed, "instances": args.instances, "tol": args.tol})
        if args.command == "energy":
            rep, ok = cmd_energy(cfg, cfg.seed), True
        elif args.command == "verify":
            rep, ok = cmd_verify(cfg, cfg.seed, cfg.instances, cfg.tol)
        else:
            rep, ok = cmd_thinlimit(cfg, cfg.seed), True
    except (ConfigError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rep.write(Path(args.out))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
