"""Run configuration: JSON schema, validation and per-point parameter resolution."""

from __future__ import annotations

import copy
import itertools
import json
import math
import re
from dataclasses import dataclass

import jsonschema
import numpy as np

from .model import (
    STRONG_MODES,
    WEAK_MODES,
    Case,
    DomainError,
    StrongPumpParams,
    WeakPumpParams,
)
from .witnesses import STRONG_CLOSED_FORMS, WEAK_CLOSED_FORMS

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration; carries a field path and, when known, a line."""

    def __init__(self, message, path="", line=None, kind="schema"):
        super().__init__(message)
        self.path = path
        self.line = line
        self.kind = kind

    def as_dict(self) -> dict:
        out = {"error": str(self), "kind": self.kind}
        if self.path:
            out["path"] = self.path
        if self.line is not None:
            out["line"] = self.line
        return out


WEAK_DEFAULTS = {
    "g": 0.1,
    "g_phase": 0.0,
    "p": 1.0,
    "chi_phase": 0.0,
    "t": 1.0,
    "case": 1,
    "delta": 0.0,
    **{f"I_{m}": 0.0 for m in "LSVA"},
    **{f"xi_phase_{m}": 0.0 for m in "LSVA"},
    **{f"omega_{m}": 0.0 for m in "LSVA"},
    **{f"phi_{m}": 0.0 for m in "LSVA"},
}
WEAK_OPTIONAL = ("delta1", "delta2", "IA_over_IS")

STRONG_DEFAULTS = {
    "g": 1.0,
    "g_phase": 0.0,
    "p": 1.0,
    "chi_phase": 0.0,
    "t": 1.0,
    "Phi_L": 0.0,
    **{f"omega_{m}": 0.0 for m in "SVA"},
    **{f"phi_{m}": 0.0 for m in "SVA"},
}

GRID_DEFAULTS = {"samples": 720, "psi_samples": 720, "pole_width": 1e-3}


def _param_props(names):
    return {n: {"type": "number"} for n in names}


_WEAK_NAMES = tuple(WEAK_DEFAULTS) + WEAK_OPTIONAL
_STRONG_NAMES = tuple(STRONG_DEFAULTS)

_AXIS = {
    "oneOf": [
        {
            "type": "object",
            "required": ["name", "start", "stop", "count"],
            "properties": {
                "name": {"type": "string"},
                "start": {"type": "number"},
                "stop": {"type": "number"},
                "count": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["name", "values"],
            "properties": {
                "name": {"type": "string"},
                "values": {"type": "array", "items": {"type": "number"}, "minItems": 1},
            },
            "additionalProperties": False,
        },
    ]
}

_OUTPUT_RE = r"^(moments|witness:(s_[LSVA]|q_[LSVA]{2})|closed:\w+|region:[LSVA]{2}|theta:[LSVA]{1,2})$"

SCHEMA = {
    "type": "object",
    "required": ["schema_version", "regime", "outputs"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "pattern": r"^[A-Za-z0-9_.-]+$"},
        "regime": {"enum": ["weak", "strong"]},
        "params": {"type": "object"},
        "sweep": {"type": "array", "items": _AXIS},
        "outputs": {"type": "array", "items": {"type": "string", "pattern": _OUTPUT_RE}, "minItems": 1},
        "grid": {
            "type": "object",
            "properties": {
                "samples": {"type": "integer", "minimum": 8, "multipleOf": 2},
                "psi_samples": {"type": "integer", "minimum": 2},
                "pole_width": {"type": "number", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "output_dir": {"type": "string"},
        "notes": {"type": "object"},
    },
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"regime": {"const": "weak"}}},
            "then": {
                "properties": {
                    "params": {
                        "properties": {**_param_props(_WEAK_NAMES), "case": {"enum": [1, 2]}},
                        "additionalProperties": False,
                    }
                }
            },
        },
        {
            "if": {"properties": {"regime": {"const": "strong"}}},
            "then": {
                "properties": {
                    "params": {"properties": _param_props(_STRONG_NAMES), "additionalProperties": False}
                }
            },
        },
    ],
}


def _line_of(text: str | None, path) -> int | None:
    """Best-effort line number of the last key in ``path`` within ``text``."""
    if not text:
        return None
    keys = [p for p in path if isinstance(p, str)]
    if not keys:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(keys[-1]), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def load_document(path) -> tuple[dict, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", kind="io") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", line=exc.lineno, kind="parse") from None
    if isinstance(doc, dict) and "resolved_config" in doc:
        # sidecar written by a previous run
        doc = doc["resolved_config"]
    return doc, text


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple


def _axes(cfg) -> list[Axis]:
    out = []
    for i, ax in enumerate(cfg.get("sweep", [])):
        if "values" in ax:
            vals = sorted(set(float(v) for v in ax["values"]))
        else:
            if not ax["start"] < ax["stop"]:
                raise ConfigError("sweep start must be < stop", path=f"sweep.{i}")
            vals = np.linspace(ax["start"], ax["stop"], ax["count"]).tolist()
        out.append(Axis(ax["name"], tuple(vals)))
    return out


def _defaults(regime):
    return WEAK_DEFAULTS if regime == "weak" else STRONG_DEFAULTS


def resolve(cfg: dict) -> dict:
    """Fill defaults and return the fully resolved config (a new dict)."""
    cfg = copy.deepcopy(cfg)
    cfg.setdefault("name", "run")
    cfg.setdefault("params", {})
    cfg.setdefault("sweep", [])
    cfg.setdefault("output_dir", ".")
    cfg["grid"] = {**GRID_DEFAULTS, **cfg.get("grid", {})}
    cfg["params"] = {**_defaults(cfg["regime"]), **cfg["params"]}
    return cfg


def validate(cfg, text: str | None = None) -> dict:
    """Schema and physics validation; returns the resolved config."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        path = list(err.absolute_path)
        if err.validator == "additionalProperties":
            extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
            path += extra[:1]
        raise ConfigError(err.message, path=".".join(map(str, path)), line=_line_of(text, path))
    res = resolve(cfg)
    regime = res["regime"]
    names = set(_WEAK_NAMES if regime == "weak" else _STRONG_NAMES)
    seen = set()
    for i, ax in enumerate(res["sweep"]):
        if ax["name"] not in names or ax["name"] == "case":
            raise ConfigError(f"unknown sweep parameter {ax['name']!r} for {regime} regime",
                              path=f"sweep.{i}.name", line=_line_of(text, ["name"]))
        if ax["name"] in seen:
            raise ConfigError(f"axis {ax['name']!r} repeated", path=f"sweep.{i}.name")
        seen.add(ax["name"])
    modes = "".join(str(m) for m in (WEAK_MODES if regime == "weak" else STRONG_MODES))
    closed = WEAK_CLOSED_FORMS if regime == "weak" else STRONG_CLOSED_FORMS
    for i, spec in enumerate(res["outputs"]):
        kind, _, arg = spec.partition(":")
        letters = arg.split("_", 1)[-1] if kind == "witness" else arg
        if kind == "closed":
            if arg not in closed:
                raise ConfigError(f"unknown closed form {arg!r} for {regime} regime", path=f"outputs.{i}")
        elif kind != "moments":
            if any(c not in modes for c in letters) or len(set(letters)) != len(letters):
                raise ConfigError(f"bad modes {letters!r} for {regime} regime", path=f"outputs.{i}")
    axes = _axes(res)
    # physics: every sweep corner must build valid parameters
    for combo in itertools.product(*[(a.values[0], a.values[-1]) for a in axes]):
        point = dict(res["params"], **{a.name: v for a, v in zip(axes, combo)})
        try:
            build_params(regime, point)
        except DomainError as exc:
            raise ConfigError(str(exc), path="params", kind="physics") from None
    return res


def _polar(mod, phase):
    return complex(mod * math.cos(phase), mod * math.sin(phase))


def build_params(regime: str, point: dict):
    """Turn a flat parameter dict into model parameters."""
    g = _polar(point["g"], point["g_phase"])
    if point["g"] <= 0:
        raise DomainError("Stokes coupling g must be nonzero")
    if point["p"] < 0:
        raise DomainError("p must be >= 0")
    chi = _polar(point["p"] * point["g"], point["chi_phase"])
    if regime == "strong":
        return StrongPumpParams(
            g, chi, point["t"], point["Phi_L"], {m: point[f"omega_{m}"] for m in "SVA"}
        )
    case = Case(int(point["case"]))
    d1, d2 = point.get("delta1"), point.get("delta2")
    active = point["delta"]
    if case is Case.ONE:
        if d2 not in (None, 0, 0.0):
            raise DomainError("Case 1 requires delta2 == 0")
        if d1 is not None and active and d1 != active:
            raise DomainError("delta and delta1 disagree")
        active = d1 if d1 is not None else active
    else:
        if d1 not in (None, 0, 0.0):
            raise DomainError("Case 2 requires delta1 == 0")
        if d2 is not None and active and d2 != active:
            raise DomainError("delta and delta2 disagree")
        active = d2 if d2 is not None else active
    intens = {m: point[f"I_{m}"] for m in "LSVA"}
    if point.get("IA_over_IS") is not None:
        if intens["A"]:
            raise DomainError("give either I_A or IA_over_IS, not both")
        intens["A"] = point["IA_over_IS"] * intens["S"]
    if any(v < 0 for v in intens.values()):
        raise DomainError("intensities must be >= 0")
    phases = {m: point[f"xi_phase_{m}"] for m in "LSVA"}
    return WeakPumpParams.from_intensities(
        g, chi, point["t"], intens, phases, case, active, {m: point[f"omega_{m}"] for m in "LSVA"}
    )


def sweep_points(res: dict):
    """Ordered ``(axis_values, point_params)`` over the sweep grid (first axis slowest)."""
    axes = _axes(res)
    for combo in itertools.product(*[a.values for a in axes]):
        yield combo, dict(res["params"], **{a.name: v for a, v in zip(axes, combo)})


def axis_names(res: dict) -> list[str]:
    return [ax["name"] for ax in res["sweep"]]


def apply_overrides(cfg: dict, assignments) -> dict:
    """Apply ``key=value`` strings; bare keys go to ``params``.

    Fixing a parameter that is currently swept removes its axis.
    Dotted keys address nested fields, e.g. ``grid.samples=64``.
    """
    cfg = copy.deepcopy(cfg)
    for item in assignments or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not key=value", path="--set", kind="usage")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        if "." not in key:
            cfg.setdefault("params", {})[key] = value
            cfg["sweep"] = [ax for ax in cfg.get("sweep", []) if ax["name"] != key]
            continue
        node = cfg
        *head, last = key.split(".")
        for part in head:
            node = node[int(part)] if isinstance(node, list) else node.setdefault(part, {})
        if isinstance(node, list):
            node[int(last)] = value
        else:
            node[last] = value
    return cfg
