"""Render experiment CSVs into figures.

All measured numbers come from the CSV; the only derived quantity is the
dashed bound overlay, evaluated from the published bound formulas with the
parameters recorded in the CSV rows. Output is deterministic for fixed
inputs (fixed figure size, no timestamps).
"""

from __future__ import annotations

import csv
import json
import sys
import warnings
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from spikestab.bounds import BoundParams, thm1_bound, thm2_bound

# published CSV schemas this package accepts, pinned per plot kind
ENS_HEADER = [
    "kind", "n", "L", "T", "theta", "beta", "alphabet",
    "model", "nu_or_h", "t", "trials", "flips", "ties",
    "estimate", "std_error", "seed",
]
SPECTRUM_EXPORT_HEADER = ["bitmask", "degree", "coefficient"]
NH_HEADER = [
    "kind", "n", "L", "T", "theta", "beta", "alphabet", "draws",
    "h", "expected_count", "seed",
]
BOUND_HEADER = ["kind", "bound", "n", "L", "T", "theta", "nu", "t", "C", "c", "value"]

EXPECTED_HEADERS = {
    "ens_vs_n": ENS_HEADER,
    "degree_profile": SPECTRUM_EXPORT_HEADER,
    "nh_profile": NH_HEADER,
    "bound_overlay": BOUND_HEADER,
}

FIGSIZE = (6.4, 4.8)
ERROR_BAR_SIGMAS = 3.0


class SchemaError(Exception):
    """CSV header does not match the published schema for the plot kind."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    csv: str
    out: str
    log_x: bool = True
    log_y: bool = False
    overlay_C: float | None = None

    def __post_init__(self):
        if self.kind not in EXPECTED_HEADERS:
            raise ValueError(
                f"kind must be one of {sorted(EXPECTED_HEADERS)}, got {self.kind!r}"
            )

    @classmethod
    def from_json(cls, path) -> "PlotSpec":
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        known = {"kind", "csv", "out", "log_x", "log_y", "overlay_C"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown PlotSpec fields: {sorted(unknown)}")
        return cls(**data)


def _header_diff(expected, found):
    lines = [f"expected: {','.join(expected)}", f"found:    {','.join(found)}"]
    missing = [c for c in expected if c not in found]
    extra = [c for c in found if c not in expected]
    if missing:
        lines.append(f"missing columns: {missing}")
    if extra:
        lines.append(f"unexpected columns: {extra}")
    return "\n".join(lines)


def load_rows(path, kind):
    """Read and schema-check a CSV; returns a list of dict rows."""
    expected = EXPECTED_HEADERS[kind]
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, no header\n"
                              f"expected: {','.join(expected)}") from None
        if header != expected:
            raise SchemaError(f"{path}: header mismatch\n{_header_diff(expected, header)}")
        return [dict(zip(header, row)) for row in reader]


def _blank_figure(spec, message):
    warnings.warn(message, stacklevel=2)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.set_title(f"{spec.kind} (no data)")
    return fig


def _render_ens_vs_n(spec, rows):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    series = {}
    for row in rows:
        key = (row["model"], row["nu_or_h"], row["t"])
        series.setdefault(key, []).append(row)
    for (model, nu_or_h, t), pts in sorted(series.items()):
        pts.sort(key=lambda r: float(r["n"]))
        ns = np.array([float(r["n"]) for r in pts])
        est = np.array([float(r["estimate"]) for r in pts])
        err = ERROR_BAR_SIGMAS * np.array([float(r["std_error"]) for r in pts])
        label = f"{model} nu_or_h={float(nu_or_h):.4g}"
        ax.errorbar(ns, est, yerr=err, fmt="o-", capsize=3, label=label)
        if spec.overlay_C is not None:
            params = BoundParams(C=spec.overlay_C)
            bound = []
            for r in pts:
                theta, T, L = float(r["theta"]), int(r["T"]), int(r["L"])
                n, nu = int(float(r["n"])), float(r["nu_or_h"])
                if L == 1:
                    t_step = int(r["t"]) if int(r["t"]) > 0 else T
                    bound.append(thm1_bound(theta, t_step, nu, n, params))
                else:
                    bound.append(thm2_bound(theta, T, L, n, 2, nu, params))
            ax.plot(ns, bound, "--", label=f"scaled bound (C={spec.overlay_C:g})")
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("expected noise sensitivity")
    ax.legend()
    return fig


def _render_degree_profile(spec, rows):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    weights = {}
    for row in rows:
        k = int(row["degree"])
        weights[k] = weights.get(k, 0.0) + float(row["coefficient"]) ** 2
    degrees = sorted(weights)
    ax.bar(degrees, [weights[k] for k in degrees])
    ax.set_xlabel("degree")
    ax.set_ylabel("Fourier weight")
    return fig


def _render_nh_profile(spec, rows):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    series = {}
    for row in rows:
        series.setdefault(row["n"], []).append(row)
    for n, pts in sorted(series.items(), key=lambda kv: float(kv[0])):
        pts.sort(key=lambda r: int(r["h"]))
        ax.plot(
            [int(r["h"]) for r in pts],
            [float(r["expected_count"]) for r in pts],
            "o-",
            label=f"n={n}",
        )
    ax.set_xlabel("Hamming distance h")
    ax.set_ylabel("expected disagreement count E[N_h]")
    ax.legend()
    return fig


def _render_bound_overlay(spec, rows):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    series = {}
    for row in rows:
        series.setdefault(row["bound"], []).append(row)
    for bound, pts in sorted(series.items()):
        pts.sort(key=lambda r: (float(r["n"]), int(r["t"])))
        ax.plot(
            [float(r["n"]) for r in pts],
            [float(r["value"]) for r in pts],
            "--o",
            label=bound,
        )
    if spec.log_x:
        ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("bound value")
    ax.legend()
    return fig


_RENDERERS = {
    "ens_vs_n": _render_ens_vs_n,
    "degree_profile": _render_degree_profile,
    "nh_profile": _render_nh_profile,
    "bound_overlay": _render_bound_overlay,
}


def render(spec: PlotSpec) -> str:
    """Render the figure described by `spec`; returns the output path."""
    rows = load_rows(spec.csv, spec.kind)
    if not rows:
        fig = _blank_figure(spec, f"{spec.csv}: no data rows, rendering blank axes")
    else:
        fig = _RENDERERS[spec.kind](spec, rows)
    try:
        fig.savefig(spec.out, format="png", dpi=100)
    finally:
        plt.close(fig)
    return spec.out
