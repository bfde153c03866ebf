"""Fuzzy c-means, used to initialize the possibilistic algorithms.

Runs standard FCM (fuzzifier ``q``, membership rows summing to 1) and
derives the two per-cluster bandwidth statistics every downstream
algorithm starts from: ``gamma`` (membership-weighted mean squared
distance) and ``eta`` (membership-weighted mean distance).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .dataset import as_points
from .errors import DegenerateDataError
from . import kernels

log = logging.getLogger(__name__)

__all__ = ["FcmConfig", "FcmResult", "fcm_cluster", "init_gamma_pcm", "init_eta"]


@dataclass(frozen=True)
class FcmConfig:
    """FCM settings.  Defaults: q = 2, tol 1e-6 on max prototype
    displacement, 300 iterations."""

    c: int
    q: float = 2.0
    tol: float = 1e-6
    max_iter: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("cluster count c must be >= 1")
        if not self.q > 1:
            raise ValueError("fuzzifier q must be > 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class FcmResult:
    prototypes: np.ndarray        # (c, D)
    memberships: np.ndarray       # (N, c), rows sum to 1
    n_iter: int = 0
    converged: bool = False
    objective_history: list = field(default_factory=list)
    row_sum_dev_history: list = field(default_factory=list)


def _fcm_memberships(dist, q):
    """Row-normalized inverse-distance memberships.

    Computed as w_ij = (d_min_i / d_ij)^(2/(q-1)) then normalized, which
    is algebraically the textbook update but immune to overflow for tiny
    distances.  Rows containing an exact zero distance get crisp
    membership 1 on the lowest-index zero-distance cluster.
    """
    n, c = dist.shape
    u = np.empty_like(dist)
    zero_rows = (dist == 0.0).any(axis=1)
    safe = np.where(dist == 0.0, 1.0, dist)
    d_min = safe.min(axis=1, keepdims=True)
    w = (d_min / safe) ** (2.0 / (q - 1.0))
    u[:] = w / w.sum(axis=1, keepdims=True)
    if zero_rows.any():
        idx = np.flatnonzero(zero_rows)
        u[idx] = 0.0
        u[idx, np.argmax(dist[idx] == 0.0, axis=1)] = 1.0
    return u


def fcm_cluster(data, config: FcmConfig) -> FcmResult:
    """Run FCM to convergence.

    Initial prototypes are c distinct data points sampled without
    replacement from a PCG64 stream seeded with ``config.seed``, so the
    run is fully reproducible.
    """
    points = as_points(data)
    n, _ = points.shape
    if config.c > n:
        raise DegenerateDataError(f"c={config.c} exceeds the number of points {n}")
    if config.c > 1 and np.all(points == points[0]):
        raise DegenerateDataError("all points identical; cannot form more than one cluster")

    rng = np.random.Generator(np.random.PCG64(config.seed))
    theta = points[rng.choice(n, size=config.c, replace=False)].copy()

    result = FcmResult(prototypes=theta, memberships=np.zeros((n, config.c)))
    for it in range(1, config.max_iter + 1):
        dist = kernels.distance_matrix(points, theta)
        u = _fcm_memberships(dist, config.q)
        result.row_sum_dev_history.append(float(np.abs(u.sum(axis=1) - 1.0).max()))

        uq = u**config.q
        num = np.einsum("ij,ik->jk", uq, points)
        den = uq.sum(axis=0)
        theta_new = theta.copy()
        mask = den > 0.0
        theta_new[mask] = num[mask] / den[mask, None]

        dist_new = kernels.distance_matrix(points, theta_new)
        result.objective_history.append(float(np.sum(uq * dist_new * dist_new)))

        shift = float(np.linalg.norm(theta_new - theta, axis=1).max())
        theta = theta_new
        result.prototypes = theta
        result.memberships = u
        result.n_iter = it
        if shift < config.tol:
            result.converged = True
            break
    return result


def _weighted_moment(points, fcm: FcmResult, power):
    dist = kernels.distance_matrix(points, fcm.prototypes)
    u = fcm.memberships
    den = u.sum(axis=0)
    if np.any(den <= 0.0):
        raise DegenerateDataError("a cluster has zero total membership")
    return np.einsum("ij,ij->j", u, dist**power) / den


def init_gamma_pcm(data, fcm: FcmResult):
    """Per-cluster weighted mean squared distance from the FCM result.

    Raises if any cluster's weighted second moment is zero (all its mass
    sits exactly on the prototype): a zero bandwidth cannot seed PCM.
    """
    gamma = _weighted_moment(as_points(data), fcm, 2)
    if np.any(gamma <= 0.0):
        raise DegenerateDataError("zero weighted second moment; bandwidth would vanish")
    return gamma


def init_eta(data, fcm: FcmResult):
    """Per-cluster weighted mean distance (first absolute moment).

    A zero entry is permitted here; runners treat eta = 0 as an
    immediately eliminated cluster and warn.
    """
    return _weighted_moment(as_points(data), fcm, 1)
