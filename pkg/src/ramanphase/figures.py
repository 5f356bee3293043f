"""Preset run configs for the standard figure data sets.

Fixed parameters are part of each preset; axis ranges are declared defaults and can be
overridden with ``--set``.
"""

from __future__ import annotations

import copy

from .config import SCHEMA_VERSION

# fixed preset values
STIMULATED = {"I_L": 10.0, "I_S": 6.0, "I_A": 1.0}
SPONTANEOUS = {"I_L": 10.0, "I_S": 0.0, "I_V": 0.0, "I_A": 0.0}
DELTAS = [0.5, 1.0, 1.5, 2.0]


def _lin(name, start, stop, count):
    return {"name": name, "start": start, "stop": stop, "count": count}


def _weak(name, case, params, sweep, outputs, note):
    return {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "regime": "weak",
        "params": {"case": case, "g": 0.1, **params},
        "sweep": sweep,
        "outputs": outputs,
        "notes": {"description": note},
    }


PRESETS = {
    "fig1a": _weak(
        "fig1a", 1, {**STIMULATED, "p": 1.0},
        [_lin("delta", 0.0, 2.0, 21), _lin("t", 0.0, 3.0, 31)],
        ["closed:sL1", "witness:s_L"],
        "pump bound arccos(s_L1) against detuning and time",
    ),
    "fig1b": _weak(
        "fig1b", 1, {**STIMULATED, "t": 1.0},
        [_lin("delta", 0.0, 2.0, 21), _lin("p", 0.0, 2.0, 21)],
        ["closed:sL1", "witness:s_L"],
        "pump bound arccos(s_L1) against detuning and coupling ratio",
    ),
    "fig1c": _weak(
        "fig1c", 2, dict(STIMULATED),
        [_lin("t", 0.0, 3.0, 31), _lin("p", 0.0, 2.0, 21)],
        ["closed:sL2", "witness:s_L"],
        "s_L2 against time and coupling ratio",
    ),
    "fig2a": _weak(
        "fig2a", 2, dict(STIMULATED),
        [_lin("t", 0.0, 10.0, 51), _lin("p", 0.0, 2.0, 21)],
        ["closed:sL2", "witness:s_L"],
        "pump bound arccos(s_L2) against time and coupling ratio",
    ),
    "fig2b": _weak(
        "fig2b", 1, {**STIMULATED, "p": 1.0},
        [{"name": "delta", "values": DELTAS}, _lin("t", 0.0, 3.0, 31)],
        ["closed:sL1", "witness:s_L"],
        "s_L1 against time for several detunings",
    ),
    "fig2c": _weak(
        "fig2c", 1, {"I_L": 10.0, "I_S": 6.0, "p": 1.0, "t": 1.0},
        [{"name": "delta", "values": DELTAS}, _lin("IA_over_IS", 0.0, 1.0, 21)],
        ["closed:sL1", "witness:s_L"],
        "s_L1 against the anti-Stokes to Stokes intensity ratio for several detunings",
    ),
    "fig3": _weak(
        "fig3", 1, {**SPONTANEOUS, "p": 1.0, "t": 1.0},
        [_lin("delta", 0.0, 2.0, 41)],
        ["witness:q_SV", "closed:qSV_approx"],
        "full against approximate q_SV in the spontaneous case",
    ),
    "fig4": {
        "schema_version": SCHEMA_VERSION,
        "name": "fig4",
        "regime": "strong",
        "params": {"g": 1.0},
        "sweep": [{"name": "p", "values": [0.0, 0.5, 1.0, 1.5]}, _lin("t", 0.0, 10.0, 101)],
        "outputs": ["witness:q_SV", "witness:q_SA", "closed:qSV"],
        "notes": {"description": "time evolution of the allowed Psi_SV band for several p"},
    },
}

GROUPS = {
    "fig1": ("fig1a", "fig1b", "fig1c"),
    "fig2": ("fig2a", "fig2b", "fig2c"),
}


def expand(name: str) -> list[str]:
    if name in GROUPS:
        return list(GROUPS[name])
    if name in PRESETS:
        return [name]
    raise KeyError(name)


def preset(name: str) -> dict:
    return copy.deepcopy(PRESETS[name])


def names() -> list[str]:
    return sorted(PRESETS) + sorted(GROUPS)
