"""JSON run configuration: schema, validation and construction of library objects."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from . import geometry as geo
from .energies import MaterialParams, ParameterError
from .rotation_fields import AffineAngle, RotationField, Vec3Field, constant_field, make_exp_field, product_field


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field path."""


_NUM = {"type": "number"}
_VEC2 = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_VEC3 = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}
_MAT3 = {"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3}

_FIELD = {
    "type": "object",
    "required": ["generator"],
    "properties": {
        "generator": {"enum": ["constant", "exp_affine", "product", "surface_frame"]},
        "rotation": _MAT3,
        "axis": _VEC3,
        "theta0": _NUM,
        "grad": _VEC3,
        "factors": {"type": "array", "items": {"type": "string"}, "minItems": 1},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cosserat-shell run configuration",
    "type": "object",
    "required": ["material", "surface"],
    "additionalProperties": False,
    "properties": {
        "material": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mu": _NUM, "lambda": _NUM, "mu_c": _NUM, "L_c": _NUM,
                "b1": _NUM, "b2": _NUM, "b3": _NUM,
                "allow_degenerate": {"type": "boolean"},
            },
        },
        "surface": {
            "type": "object",
            "required": ["type"],
            "additionalProperties": False,
            "properties": {
                "type": {"enum": ["plane", "cylinder", "sphere", "graph"]},
                "radius": {"type": "number", "exclusiveMinimum": 0},
                "expression": {"type": "string"},
                "domain": {
                    "type": "object",
                    "required": ["lower", "upper"],
                    "additionalProperties": False,
                    "properties": {"lower": _VEC2, "upper": _VEC2},
                },
                "fd_step": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "fields": {"type": "object", "additionalProperties": _FIELD},
        "deformation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"matrix": _MAT3, "offset": _VEC3},
        },
        "seed": {"type": "integer", "minimum": 0},
        "instances": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "energy": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "points": {"type": "array", "items": _VEC2},
                "rotation": {"type": "string"},
                "strains": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {"U": _MAT3, "gamma": _MAT3, "plate_gamma": _MAT3, "E": _MAT3, "K": _MAT3},
                    },
                },
            },
        },
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"mutation": {"enum": ["none", "c_star"]}},
        },
        "thinlimit": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "family": {"enum": ["trivial", "flat_shear_rotation", "cylinder_identity", "sphere_rotation", "custom"]},
                "h_list": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
                "cells": {"type": "integer", "minimum": 1},
                "rotation": {"type": "string"},
            },
        },
    },
}


def _path(err: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in err.absolute_path) or "<root>"


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    material: MaterialParams
    surface: geo.Surface
    fields: dict
    seed: int
    instances: int
    tol: float

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)

    def deformation(self) -> Vec3Field:
        """m = A y0 + b (defaults: A = identity, b = 0)."""
        d = self.raw.get("deformation", {})
        A = np.asarray(d.get("matrix", np.eye(3)), dtype=float)
        b = np.asarray(d.get("offset", np.zeros(3)), dtype=float)
        s = self.surface
        return Vec3Field(lambda x: A @ s.position(x[:2]) + b,
                         lambda x: np.column_stack([A @ s.first(x[:2]), np.zeros(3)]))


def config_hash(raw: dict) -> str:
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _surface(block: dict) -> geo.Surface:
    kind = block["type"]
    dom = block.get("domain")
    kw = {}
    if dom is not None:
        lo, hi = dom["lower"], dom["upper"]
        if not (lo[0] < hi[0] and lo[1] < hi[1]):
            raise ConfigError("surface.domain: lower must be strictly below upper")
        kw = {"lower": tuple(lo), "upper": tuple(hi)}
    try:
        if kind == "plane":
            s = geo.plane(**kw)
        elif kind == "cylinder":
            s = geo.cylinder(block.get("radius", 2.0), **kw)
        elif kind == "sphere":
            s = geo.sphere(block.get("radius", 2.0), **kw)
        else:
            if "expression" not in block:
                raise ConfigError("surface.expression: required for graph surfaces")
            s = geo.graph(block["expression"], **kw)
    except geo.GeometryError as exc:
        raise ConfigError(f"surface: {exc}") from exc
    if "fd_step" in block:
        from dataclasses import replace
        s = replace(s, fd_step=block["fd_step"])
    return s


def _fields(block: dict, surface: geo.Surface) -> dict:
    out: dict[str, RotationField] = {}
    pending = dict(block)
    # resolve in dependency order; products refer to earlier names
    for _ in range(len(pending) + 1):
        progressed = False
        for name, entry in list(pending.items()):
            gen = entry["generator"]
            try:
                if gen == "constant":
                    out[name] = constant_field(entry.get("rotation", np.eye(3)))
                    out[name](np.zeros(3))
                elif gen == "exp_affine":
                    out[name] = make_exp_field(entry.get("axis", [0.0, 0.0, 1.0]),
                                               AffineAngle(entry.get("theta0", 0.0), np.asarray(entry.get("grad", [0.0] * 3), dtype=float)))
                elif gen == "surface_frame":
                    out[name] = RotationField(lambda x, s=surface: geo.frame_at(s, x[:2]).Q0)
                else:
                    missing = [f for f in entry.get("factors", []) if f not in out]
                    if any(f not in block for f in missing):
                        raise ConfigError(f"fields.{name}.factors: unknown field(s) {missing}")
                    if missing:
                        continue
                    if "factors" not in entry:
                        raise ConfigError(f"fields.{name}.factors: required for product fields")
                    out[name] = product_field(*[out[f] for f in entry["factors"]])
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(f"fields.{name}: {exc}") from exc
            del pending[name]
            progressed = True
        if not pending:
            break
        if not progressed:
            raise ConfigError(f"fields: circular product definitions among {sorted(pending)}")
    return out


def load_config(source, overrides: dict | None = None) -> RunConfig:
    """Parse and validate a config (path, JSON text or dict). Raises ConfigError."""
    if isinstance(source, dict):
        raw = json.loads(json.dumps(source))
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"<json>: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = v
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = _path(e)
        if e.validator == "required":
            missing = e.message.split("'")[1]
            where = f"{where}.{missing}" if where != "<root>" else missing
        raise ConfigError(f"{where}: {e.message}")
    m = raw.get("material", {})
    try:
        material = MaterialParams(
            mu=m.get("mu", 1.0), lam=m.get("lambda", 1.0), mu_c=m.get("mu_c", 1.0), L_c=m.get("L_c", 1.0),
            b1=m.get("b1", 1.0), b2=m.get("b2", 1.0), b3=m.get("b3", 1.0),
            allow_degenerate=m.get("allow_degenerate", False),
        )
    except ParameterError as exc:
        raise ConfigError(f"material: {exc}") from exc
    surface = _surface(raw["surface"])
    fields = _fields(raw.get("fields", {}), surface)
    for section in ("energy", "thinlimit"):
        ref = raw.get(section, {}).get("rotation")
        if ref is not None and ref not in fields:
            raise ConfigError(f"{section}.rotation: unknown field {ref!r}")
    h = raw.get("thinlimit", {}).get("h_list")
    if h is not None and any(b >= a for a, b in zip(h, h[1:])):
        raise ConfigError("thinlimit.h_list: values must be strictly decreasing")
    return RunConfig(raw, material, surface, fields, int(raw.get("seed", 42)), int(raw.get("instances", 1000)),
                     float(raw.get("tol", 1e-10)))
