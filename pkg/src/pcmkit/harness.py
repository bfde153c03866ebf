"""Experiment orchestration: error metric, parameter sweeps, reports.

A sweep runs one algorithm over an (alpha, sigma_v) grid, one run per
grid cell per seed.  To isolate the effect of the two parameters, the
FCM initialization is computed once per seed and shared by every cell.
Cells are independent and may execute in parallel; aggregation is
ordered by (alpha index, sigma index, seed index) regardless of
completion order, so a sweep is deterministic for a fixed spec.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dataset import DataMatrix, as_points
from .errors import PcmkitError
from .fcm import FcmConfig, fcm_cluster, init_eta
from . import apcm as apcm_mod
from . import upcm as upcm_mod

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1

CSV_COLUMNS = ("alpha", "sigma_v", "seed", "final_clusters", "center_error",
               "iterations", "converged")

__all__ = [
    "CSV_COLUMNS",
    "DEFAULT_GRIDS",
    "REPORT_SCHEMA_VERSION",
    "CellResult",
    "SweepResult",
    "SweepSpec",
    "center_estimation_error",
    "emit_report",
    "load_sweep_result",
    "run_sweep",
]


def center_estimation_error(estimated, truth) -> float:
    """Total distance between estimated and true centers.

    With matching counts this is the minimum over assignments of
    ``sum_j ||estimated_pi(j) - truth_j||``.  With fewer estimates than
    truths, the estimates are first assigned to distinct truths and each
    unmatched truth then contributes its distance to the nearest
    estimate (for a single estimate this reduces to summing its distance
    to every truth).  With more estimates than truths, every estimate
    contributes its distance to the nearest truth.
    """
    est = np.atleast_2d(np.asarray(estimated, dtype=np.float64))
    tru = np.atleast_2d(np.asarray(truth, dtype=np.float64))
    if est.shape[0] < 1 or est.size == 0:
        raise ValueError("need at least one estimated center")
    if est.shape[1] != tru.shape[1]:
        raise ValueError("estimated and truth centers must share a dimension")
    dist = np.linalg.norm(est[:, None, :] - tru[None, :, :], axis=2)  # (k, c*)
    k, c_true = dist.shape
    if k > c_true:
        return float(dist.min(axis=1).sum())
    rows, cols = linear_sum_assignment(dist)
    total = float(dist[rows, cols].sum())
    if k < c_true:
        unmatched = np.setdiff1d(np.arange(c_true), cols, assume_unique=True)
        total += float(dist[:, unmatched].min(axis=0).sum())
    return total


@dataclass(frozen=True)
class SweepSpec:
    """Grid description for one sweep.

    ``alpha_values`` are UPCM noise levels (or APCM scaling values when
    ``algorithm = "apcm"``, in which case the sigma axis must be the
    single value 0).  ``seeds`` drive the shared FCM initialization.
    """

    data: DataMatrix
    m_ini: int
    alpha_values: tuple
    sigma_v_values: tuple
    seeds: tuple
    algorithm: str = "upcm"
    cut_rule: str = "exp_neg"
    tol: float = 1e-4
    max_iter: int = 200
    fcm_q: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300

    def __post_init__(self):
        object.__setattr__(self, "alpha_values", tuple(float(a) for a in self.alpha_values))
        object.__setattr__(self, "sigma_v_values", tuple(float(s) for s in self.sigma_v_values))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.alpha_values or not self.sigma_v_values or not self.seeds:
            raise ValueError("alpha_values, sigma_v_values and seeds must be nonempty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.algorithm not in ("upcm", "apcm"):
            raise ValueError("algorithm must be 'upcm' or 'apcm'")
        if self.algorithm == "apcm" and tuple(self.sigma_v_values) != (0.0,):
            raise ValueError("apcm sweeps take sigma_v_values == (0,)")
        if self.algorithm == "upcm":
            for a in self.alpha_values:
                upcm_mod.threshold_from(a, self.cut_rule)


@dataclass(frozen=True)
class CellResult:
    alpha: float
    sigma_v: float
    seed: int
    final_clusters: int
    center_error: float
    iterations: int
    converged: bool
    cluster_counts: tuple = ()
    error: str = None

    def to_dict(self):
        d = {
            "alpha": self.alpha,
            "sigma_v": self.sigma_v,
            "seed": self.seed,
            "final_clusters": self.final_clusters,
            "center_error": self.center_error,
            "iterations": self.iterations,
            "converged": self.converged,
            "cluster_counts": list(self.cluster_counts),
        }
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class SweepResult:
    spec_summary: dict
    records: list = field(default_factory=list)   # ordered by (alpha, sigma, seed)

    def cell(self, alpha_idx: int, sigma_idx: int, seed_idx: int) -> CellResult:
        n_sigma = len(self.spec_summary["sigma_v_values"])
        n_seed = len(self.spec_summary["seeds"])
        return self.records[(alpha_idx * n_sigma + sigma_idx) * n_seed + seed_idx]


def _run_cell(points, theta0, eta0, truth_centers, algorithm, alpha, sigma_v,
              threshold, tol, max_iter, seed, data=None, apcm_config=None):
    try:
        if algorithm == "upcm":
            model = upcm_mod.upcm_iterate(
                points, theta0, eta0, sigma_v=sigma_v, threshold=threshold,
                tol=tol, max_iter=max_iter,
            )
        else:
            model = apcm_mod.apcm_run(data, apcm_config)
        err = (
            center_estimation_error(model.prototypes, truth_centers)
            if truth_centers is not None
            else float("nan")
        )
        return CellResult(
            alpha=alpha, sigma_v=sigma_v, seed=seed,
            final_clusters=model.n_clusters, center_error=err,
            iterations=model.n_iter, converged=model.converged,
            cluster_counts=tuple(model.cluster_counts()),
        )
    except PcmkitError as exc:
        return CellResult(
            alpha=alpha, sigma_v=sigma_v, seed=seed,
            final_clusters=0, center_error=float("nan"),
            iterations=0, converged=False, error=str(exc),
        )


def _cell_args(spec: SweepSpec):
    points = as_points(spec.data)
    truth = spec.data.truth.centers if isinstance(spec.data, DataMatrix) and spec.data.truth else None
    inits = {}
    for seed in spec.seeds:
        fcm = fcm_cluster(
            spec.data,
            FcmConfig(c=spec.m_ini, q=spec.fcm_q, tol=spec.fcm_tol,
                      max_iter=spec.fcm_max_iter, seed=seed),
        )
        inits[seed] = (fcm.prototypes, init_eta(spec.data, fcm))
    tasks = []
    for alpha in spec.alpha_values:
        for sigma_v in spec.sigma_v_values:
            for seed in spec.seeds:
                theta0, eta0 = inits[seed]
                if spec.algorithm == "upcm":
                    threshold = upcm_mod.threshold_from(alpha, spec.cut_rule)
                    tasks.append((points, theta0, eta0, truth, "upcm", alpha,
                                  sigma_v, threshold, spec.tol, spec.max_iter,
                                  seed, None, None))
                else:
                    cfg = apcm_mod.ApcmConfig(
                        m_ini=spec.m_ini, alpha_apcm=alpha, tol=spec.tol,
                        max_iter=spec.max_iter, seed=seed, fcm_q=spec.fcm_q,
                        fcm_tol=spec.fcm_tol, fcm_max_iter=spec.fcm_max_iter,
                    )
                    tasks.append((points, theta0, eta0, truth, "apcm", alpha,
                                  0.0, 0.0, spec.tol, spec.max_iter, seed,
                                  spec.data, cfg))
    return tasks


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Execute every grid cell; per-cell failures are recorded, not raised."""
    tasks = _cell_args(spec)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_cell_star, tasks, chunksize=1))
    else:
        records = [_run_cell(*t) for t in tasks]
    summary = {
        "algorithm": spec.algorithm,
        "m_ini": spec.m_ini,
        "cut_rule": spec.cut_rule,
        "alpha_values": list(spec.alpha_values),
        "sigma_v_values": list(spec.sigma_v_values),
        "seeds": list(spec.seeds),
        "tol": spec.tol,
        "max_iter": spec.max_iter,
    }
    return SweepResult(spec_summary=summary, records=records)


def _run_cell_star(args):
    return _run_cell(*args)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _cells_nested(result: SweepResult):
    s = result.spec_summary
    n_sigma, n_seed = len(s["sigma_v_values"]), len(s["seeds"])
    nested = []
    for ai in range(len(s["alpha_values"])):
        per_alpha = []
        for si in range(n_sigma):
            base = (ai * n_sigma + si) * n_seed
            per_alpha.append([result.records[base + k].to_dict() for k in range(n_seed)])
        nested.append(per_alpha)
    return nested


def emit_report(result: SweepResult, out_base, formats=("csv", "json", "long")):
    """Write report files next to ``out_base`` (suffixes added per format).

    ``csv``: one row per cell with columns ``alpha,sigma_v,seed,
    final_clusters,center_error,iterations,converged``.  ``json``: the
    nested grid with a schema_version field.  ``long``: melted rows
    ``alpha,sigma_v,seed,metric,value`` ready for heatmaps and curves.
    """
    if not result.records:
        raise ValueError("empty sweep result")
    base = Path(out_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        path = base.with_suffix(".csv")
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in result.records:
                writer.writerow([
                    _fmt(rec.alpha), _fmt(rec.sigma_v), rec.seed,
                    rec.final_clusters, _fmt(rec.center_error),
                    rec.iterations, _fmt(rec.converged),
                ])
        written.append(path)
    if "json" in formats:
        path = base.with_suffix(".json")
        payload = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "spec": result.spec_summary,
            "grid": _cells_nested(result),
        }
        path.write_text(json.dumps(payload, indent=2) + "\n")
        written.append(path)
    if "long" in formats:
        path = base.with_name(base.stem + "_long.csv")
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "sigma_v", "seed", "metric", "value"])
            for rec in result.records:
                for metric, value in (
                    ("final_clusters", rec.final_clusters),
                    ("center_error", rec.center_error),
                    ("iterations", rec.iterations),
                ):
                    writer.writerow([
                        _fmt(rec.alpha), _fmt(rec.sigma_v), rec.seed, metric, _fmt(value),
                    ])
        written.append(path)
    return written


def load_sweep_result(path) -> SweepResult:
    """Read back a JSON report written by :func:`emit_report`."""
    payload = json.loads(Path(path).read_text())
    if payload.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {payload.get('schema_version')!r}")
    records = []
    for per_alpha in payload["grid"]:
        for per_sigma in per_alpha:
            for cell in per_sigma:
                records.append(CellResult(
                    alpha=cell["alpha"], sigma_v=cell["sigma_v"], seed=cell["seed"],
                    final_clusters=cell["final_clusters"],
                    center_error=cell["center_error"],
                    iterations=cell["iterations"], converged=cell["converged"],
                    cluster_counts=tuple(cell.get("cluster_counts", ())),
                    error=cell.get("error"),
                ))
    return SweepResult(spec_summary=payload["spec"], records=records)


# Default experiment grids: calibrated configuration for the preset
# datasets, not universal constants.  Alpha is on the exp_neg scale
# (threshold = exp(-alpha), i.e. log-spaced effective thresholds).
DEFAULT_GRIDS = {
    # Dataset 1, m_ini = 2: sharp split between a 2-cluster low-error
    # region and a merged single-cluster region.
    "exp1": {
        "preset": "dataset1",
        "m_ini": 2,
        "cut_rule": "exp_neg",
        "alpha_values": tuple(round(0.5 * k, 2) for k in range(1, 13)),     # 0.5 .. 6.0
        "sigma_v_values": tuple(round(0.8 * k, 2) for k in range(12)),      # 0 .. 8.8
    },
    # Dataset 1, m_ini = 10: over-specified start, correct count is 2.
    "exp2_d1": {
        "preset": "dataset1",
        "m_ini": 10,
        "cut_rule": "exp_neg",
        "alpha_values": tuple(round(0.5 * k, 2) for k in range(1, 13)),
        "sigma_v_values": tuple(round(0.8 * k, 2) for k in range(12)),
    },
    # Dataset 2, m_ini = 10: three tight clusters, two of them close;
    # sigma axis scaled to the smaller data extent.
    "exp2_d2": {
        "preset": "dataset2",
        "m_ini": 10,
        "cut_rule": "exp_neg",
        "alpha_values": tuple(round(0.5 * k, 2) for k in range(1, 13)),
        "sigma_v_values": tuple(round(0.05 * k, 2) for k in range(12)),     # 0 .. 0.55
    },
}
