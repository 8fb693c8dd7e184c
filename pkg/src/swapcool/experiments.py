"""Experiment orchestration: the sweep datasets behind the flow curves, the
coefficient scaling study and the network-error diagnostic, plus manifest
bookkeeping.

Every emitter is a pure function from a config to text, so outputs are
byte-reproducible; the CLI wraps these in atomic file writes.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import Spectrum, build_model, double, min_m_bound, spectral_stats
from .flow import flow_series, t_c_bounds
from .network import (
    CoefficientMatrix,
    build_improved_schedule,
    check_scaling_law,
    propagate_coefficients,
    xi_result,
)
from .quantum import energy_moments, uniform_state

DEFAULT_DT_FACTOR = 0.01     # protocol step in units of the inverse gap
DEFAULT_M_LIST = (16, 32, 64, 128)
XI_BASE_M = 128


@dataclass
class ExperimentConfig:
    models: list[str] = field(default_factory=lambda: ["a", "b", "c", "d"])
    dims: list[int] = field(default_factory=lambda: [2 ** p for p in range(3, 10)])
    delta: float = 1.0
    dt: float | None = None          # None: 0.01 / gap per spectrum
    t_max: float | None = None       # None: 2 * t_c(0.99)
    target_c: float = 0.99
    alphas: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    m_list: list[int] = field(default_factory=lambda: list(DEFAULT_M_LIST))
    out_dir: str = "out"
    seed: int = 0
    use_double: bool = False
    jobs: int = 1

    def to_json(self) -> dict:
        return {
            "models": self.models, "dims": self.dims, "delta": self.delta,
            "dt": self.dt, "t_max": self.t_max, "target_c": self.target_c,
            "alphas": self.alphas, "m_list": self.m_list, "out_dir": self.out_dir,
            "seed": self.seed, "double": self.use_double, "jobs": self.jobs,
        }


def make_spectrum(kind: str, dim: int, delta: float, use_double: bool = False) -> Spectrum:
    spec = build_model(kind, dim, delta)
    return double(spec) if use_double else spec


def resolve_dt(spec: Spectrum, dt: float | None) -> float:
    if dt is not None:
        return dt
    return DEFAULT_DT_FACTOR / spectral_stats(spec).gap


# --- flow dataset -------------------------------------------------------------

def flow_csv(kind: str, dim: int, delta: float, dt: float | None = None,
             t_max: float | None = None, target_c: float = 0.99,
             use_double: bool = False) -> str:
    """One trajectory CSV on a uniform time grid reaching past t_c(target_c)."""
    spec = make_spectrum(kind, dim, delta, use_double)
    stats = spectral_stats(spec)
    step = resolve_dt(spec, dt)
    if t_max is None:
        _, upper = t_c_bounds(spec.dim, stats.gap, stats.span, target_c,
                              stats.ground_degeneracy)
        t_max = 2.0 * upper
    n_steps = int(np.ceil(t_max / step))
    times = step * np.arange(n_steps + 1)
    phi0 = uniform_state(spec.dim)
    return flow_series(phi0, spec, times).to_csv()


# --- coefficient dataset ------------------------------------------------------

@dataclass
class CoeffsDataset:
    matrices: dict                  # m -> CoefficientMatrix
    step_stars: dict                # m -> step_star
    reports: list                   # ScalingReport per (m_small, m_large)
    cuts: dict                      # cut name -> csv text

    def step_star_csv(self) -> str:
        lines = ["m,step_star,step_star_over_m2"]
        for m in sorted(self.step_stars):
            s = self.step_stars[m]
            lines.append(f"{m},{s},{repr(s / m ** 2)}")
        return "\n".join(lines) + "\n"


def _cut_csvs(matrices: dict[int, CoefficientMatrix]) -> dict[str, str]:
    """Eight cross-sections (four rows, four columns at quarter positions of
    the smallest matrix), every larger matrix rescaled into its frame."""
    ms = sorted(matrices)
    m0 = ms[0]
    base = matrices[m0]
    cuts: dict[str, str] = {}
    row_positions = [m0 // 2, m0, 3 * m0 // 2, 2 * m0]
    col_positions = [-m0 // 2, 0, m0 // 2, m0 - 1]
    for idx, j0 in enumerate(row_positions, start=1):
        header = "kprime," + ",".join(f"m{m}" for m in ms)
        lines = [header]
        for kp in range(-m0, m0 + 1):
            vals = []
            for m in ms:
                lam = m // m0
                big = matrices[m]
                bkp = lam * kp
                v = big.k[lam * j0 - 1][bkp + m] / lam if abs(bkp) <= m else 0.0
                vals.append(v)
            lines.append(repr(float(kp)) + "," + ",".join(repr(float(v)) for v in vals))
        cuts[f"cut_row{idx}_j{j0}"] = "\n".join(lines) + "\n"
    for idx, kp0 in enumerate(col_positions, start=1):
        header = "j," + ",".join(f"m{m}" for m in ms)
        lines = [header]
        for j in range(1, 2 * m0 + 1):
            vals = []
            for m in ms:
                lam = m // m0
                big = matrices[m]
                bkp = lam * kp0
                v = big.k[lam * j - 1][bkp + m] / lam if abs(bkp) <= m else 0.0
                vals.append(v)
            lines.append(str(j) + "," + ",".join(repr(float(v)) for v in vals))
        cuts[f"cut_col{idx}_k{kp0}"] = "\n".join(lines) + "\n"
    return cuts


def coeffs_dataset(m_list=DEFAULT_M_LIST) -> CoeffsDataset:
    m_list = sorted(m_list)
    matrices = {}
    step_stars = {}
    for m in m_list:
        sched = build_improved_schedule(m)
        step_stars[m] = sched.step_star
        matrices[m] = propagate_coefficients(sched)
    m0 = m_list[0]
    reports = []
    for m in m_list[1:]:
        if m % m0 == 0:
            reports.append(check_scaling_law(matrices[m0], matrices[m], m // m0))
    return CoeffsDataset(matrices, step_stars, reports, _cut_csvs(matrices))


# --- network-error diagnostic (xi) sweep ---------------------------------------

@dataclass
class XiRow:
    model: str
    dim: int
    alpha: int
    m_alpha: int
    xi: float
    m_bound: float
    constraint_violated: bool
    reference_only: bool


XI_CSV_HEADER = "model,dim,alpha,m_alpha,xi,m_bound,constraint_violated,reference_only"


def xi_sweep(models, dims, alphas, k_base: CoefficientMatrix, delta: float = 1.0,
             dt: float | None = None, use_double: bool = False) -> list[XiRow]:
    """The xi diagnostic per (model, dim, alpha), coefficients rescaled from
    the base matrix.  Model (a) rows are reference-only; every row carries the
    total-energy bound check on its m_alpha."""
    rows = []
    for kind in models:
        for dim in dims:
            spec = make_spectrum(kind, dim, delta, use_double)
            step = resolve_dt(spec, dt)
            phi0 = uniform_state(spec.dim)
            e0, _ = energy_moments(phi0, spec)
            bound = min_m_bound(spec, e0)
            for alpha in alphas:
                point = xi_result(spec, phi0, step, alpha, k_base)
                rows.append(XiRow(kind, dim, alpha, point.m_alpha, point.xi,
                                  bound, point.m_alpha <= bound, kind == "a"))
    return rows


def xi_rows_to_csv(rows: list[XiRow]) -> str:
    lines = [XI_CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.model, str(r.dim), str(r.alpha), str(r.m_alpha), repr(float(r.xi)),
            repr(float(r.m_bound)), str(r.constraint_violated).lower(),
            str(r.reference_only).lower(),
        ]))
    return "\n".join(lines) + "\n"


def base_coefficient_matrix(m: int = XI_BASE_M) -> CoefficientMatrix:
    return propagate_coefficients(build_improved_schedule(m))


# --- manifest & atomic output ---------------------------------------------------

@dataclass
class RunManifest:
    config: dict
    version: str
    stages: list = field(default_factory=list)
    files: list = field(default_factory=list)

    def add_stage(self, name: str, seconds: float) -> None:
        self.stages.append({"name": name, "seconds": seconds})

    def add_file(self, path: str, content: bytes) -> None:
        self.files.append({"path": path, "sha256": hashlib.sha256(content).hexdigest()})

    def to_json(self) -> dict:
        return {"config": self.config, "version": self.version,
                "stages": self.stages, "files": self.files}


class StageTimer:
    def __init__(self, manifest: RunManifest, name: str):
        self.manifest = manifest
        self.name = name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.manifest.add_stage(self.name, time.perf_counter() - self.t0)
        return False


def write_atomic(path: str, content: str | bytes, manifest: RunManifest | None = None) -> None:
    data = content.encode() if isinstance(content, str) else content
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    tmp = os.path.join(directory, f".{os.path.basename(path)}.tmp-{os.getpid()}")
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    if manifest is not None:
        manifest.add_file(os.path.basename(path), data)


def write_manifest(out_dir: str, manifest: RunManifest) -> None:
    payload = json.dumps(manifest.to_json(), indent=1, sort_keys=True) + "\n"
    write_atomic(os.path.join(out_dir, "manifest.json"), payload)
