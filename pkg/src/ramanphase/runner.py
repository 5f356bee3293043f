"""Evaluate a resolved run config over its sweep and write CSV + JSON sidecar."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import SCHEMA_VERSION, axis_names, build_params, sweep_points
from .model import DomainError, NoiseMoments
from .noise_strong import strong_moments
from .noise_weak import weak_moments
from .quasidist import filter_map, theta_single, theta_two
from .witnesses import (
    PhaseRegion,
    closed_form_weak,
    cos_bound,
    cos_region,
    q_witness,
    s_witness,
    sin2_bound,
    sin2_region,
    strong_closed_form,
    two_mode_filter,
)

THREADS_ENV = "RAMANPHASE_THREADS"
NAN = math.nan


def thread_count(override: int | None = None) -> int:
    if override is not None:
        return max(1, int(override))
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return min(8, os.cpu_count() or 1)


def output_slug(spec: str) -> str:
    return spec.replace(":", "_")


# ---------------------------------------------------------------------------
# columns
# ---------------------------------------------------------------------------


def _split(name, value):
    if isinstance(value, complex):
        return [(f"{name}.re", value.real), (f"{name}.im", value.imag)]
    return [(name, value)]


def _region_cols(prefix, bound, region: PhaseRegion, psi_samples):
    return [
        (f"{prefix}.bound", bound),
        (f"{prefix}.region_measure", region.measure),
        (f"{prefix}.scan_fraction", region.scan_fraction(psi_samples)),
    ]


def _s_cols(prefix, s, angle, psi_samples):
    if s is None or not math.isfinite(s):
        return [(prefix, NAN), (f"{prefix}.angle", NAN), (f"{prefix}.nonclassical", False),
                (f"{prefix}.bound", NAN), (f"{prefix}.region_measure", NAN), (f"{prefix}.scan_fraction", NAN)]
    return [(prefix, s), (f"{prefix}.angle", angle), (f"{prefix}.nonclassical", s < 1)] + _region_cols(
        prefix, cos_bound(s), cos_region(s), psi_samples
    )


def _q_region(prefix, q, psi_samples):
    if q is None or not math.isfinite(q):
        return [(f"{prefix}.bound", NAN), (f"{prefix}.region_measure", NAN), (f"{prefix}.scan_fraction", NAN)]
    return _region_cols(prefix, sin2_bound(q), sin2_region(q), psi_samples)


def _moments(regime, params):
    return weak_moments(params) if regime == "weak" else strong_moments(params)


def _witness(spec_arg, m: NoiseMoments, point, psi_samples):
    kind, letters = spec_arg.split("_", 1)
    prefix = spec_arg
    if kind == "s":
        try:
            rep = s_witness(m, letters)
            return _s_cols(prefix, rep.value, rep.angle, psi_samples)
        except DomainError:
            return _s_cols(prefix, None, None, psi_samples)
    j, k = letters
    pj, pk = point[f"phi_{j}"], point[f"phi_{k}"]
    d, db = m.d(j, k), m.dbar(j, k)
    psi = float(np.mod(np.angle(d) - pj - pk, 2 * math.pi)) if d else NAN
    psib = float(np.mod(np.angle(db) + pj - pk, 2 * math.pi)) if db else NAN
    try:
        rep = q_witness(m, j, k, pj, pk)
        q, allowed = rep.value, bool(two_mode_filter(m, j, k, pj, pk))
    except DomainError:
        q, allowed = NAN, True
    cols = [(prefix, q), (f"{prefix}.psi", psi), (f"{prefix}.psibar", psib),
            (f"{prefix}.nonclassical", bool(q < 1)), (f"{prefix}.allowed", allowed)]
    return cols + _q_region(prefix, q, psi_samples)


def _closed(which, regime, params, psi_samples):
    try:
        if regime == "weak":
            v = closed_form_weak(params, which)
        else:
            v = strong_closed_form(params, which)
    except DomainError:
        v = NAN
    if not which.startswith("s"):
        return [(which, v)] + _q_region(which, v, psi_samples)
    if not math.isfinite(v):
        return [(which, v), (f"{which}.bound", NAN), (f"{which}.region_measure", NAN),
                (f"{which}.scan_fraction", NAN)]
    return [(which, v)] + _region_cols(which, cos_bound(v), cos_region(v), psi_samples)


def _theta_rows(letters, m, grid):
    samples, width = grid["samples"], grid["pole_width"]
    if len(letters) == 1:
        tg = theta_single(m, letters, samples=samples, pole_width=width)
        cols = [f"phi_{letters}"]
    else:
        tg = theta_two(m, tuple(letters), samples=samples, pole_width=width)
        cols = [f"phi_{letters[0]}", f"phi_{letters[1]}"]
    integral = tg.integral
    norm = tg.values / integral if math.isfinite(integral) and integral > 0 else np.full(tg.values.shape, NAN)
    mesh = np.meshgrid(*tg.axes, indexing="ij")
    flat = [a.ravel() for a in mesh]
    header = cols + ["theta", "theta_normalized", "error", "diverged"]
    rows = [
        [*(f[i] for f in flat), v, n, e, bool(dv)]
        for i, (v, n, e, dv) in enumerate(
            zip(tg.values.ravel(), norm.ravel(), tg.error.ravel(), tg.diverged.ravel())
        )
    ]
    return header, rows


def evaluate_point(res: dict, point: dict) -> dict:
    """All requested outputs at one sweep point: ``spec -> (header, rows)``."""
    regime, grid = res["regime"], res["grid"]
    params = build_params(regime, point)
    m = None
    out = {}
    for spec in res["outputs"]:
        kind, _, arg = spec.partition(":")
        if kind != "closed" and m is None:
            m = _moments(regime, params)
        if kind == "theta":
            out[spec] = _theta_rows(arg, m, grid)
            continue
        if kind == "moments":
            cols = [c for name, v in m.entries().items() for c in _split(name, v)]
        elif kind == "witness":
            cols = _witness(arg, m, point, grid["psi_samples"])
        elif kind == "closed":
            cols = _closed(arg, regime, params, grid["psi_samples"])
        elif kind == "region":
            try:
                frac = filter_map(m, tuple(arg), samples=grid["samples"]).fraction
            except DomainError:
                frac = 1.0
            cols = [(f"region_{arg}.fraction", frac)]
        else:  # pragma: no cover - schema forbids it
            raise ValueError(spec)
        out[spec] = ([c for c, _ in cols], [[v for _, v in cols]])
    return out


# ---------------------------------------------------------------------------
# formatting and writing
# ---------------------------------------------------------------------------


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def compute(res: dict, threads: int = 1) -> dict:
    """Evaluate every sweep point; returns ``spec -> csv text``."""
    points = list(sweep_points(res))
    axes = axis_names(res)

    def work(item):
        return evaluate_point(res, item[1])

    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, points))
    else:
        results = [work(p) for p in points]

    texts = {}
    for spec in res["outputs"]:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = None
        for (combo, _), result in zip(points, results):
            cols, rows = result[spec]
            if header is None:
                header = axes + cols
                writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in (*combo, *row)])
        texts[spec] = buf.getvalue()
    return texts


def sidecar(res: dict, files: list[str]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "resolved_config": res,
        "files": files,
    }


def write(res: dict, out_dir=None, threads: int = 1) -> list[Path]:
    """Compute and write all CSVs plus the sidecar; returns written paths."""
    out = Path(out_dir if out_dir is not None else res["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    texts = compute(res, threads)
    paths = []
    for spec, text in texts.items():
        path = out / f"{res['name']}.{output_slug(spec)}.csv"
        path.write_text(text, encoding="utf-8", newline="")
        paths.append(path)
    meta = out / f"{res['name']}.json"
    meta.write_text(
        json.dumps(sidecar(res, [p.name for p in paths]), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return paths + [meta]


__all__ = ["compute", "write", "evaluate_point", "thread_count", "fmt"]
