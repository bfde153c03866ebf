"""Classic possibilistic c-means with fixed bandwidths.

The objective couples a weighted distance term with the penalty
``f(u) = u*log(u) - u`` per cluster:

    J = sum_j [ sum_i u_ij * d_ij^2 + gamma_j * sum_i (u_ij*log(u_ij) - u_ij) ]

Alternating minimization gives ``u_ij = exp(-d_ij^2 / gamma_j)`` and the
membership-weighted mean for the prototypes.  The gamma vector comes
from an FCM run and stays fixed; there is no cluster elimination here,
so over-specified runs end with coincident prototypes, which are
reported rather than merged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataset import as_points
from .errors import DegenerateDataError
from .fcm import FcmConfig, fcm_cluster, init_gamma_pcm
from .model import ClusterModel, IterationRecord

log = logging.getLogger(__name__)

__all__ = [
    "PcmConfig",
    "PcmState",
    "coincident_prototype_pairs",
    "pcm_membership_update",
    "pcm_objective",
    "pcm_prototype_update",
    "pcm_run",
    "run",
]


@dataclass(frozen=True)
class PcmConfig:
    c: int
    tol: float = 1e-4
    max_iter: int = 200
    seed: int = 0
    fcm_q: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300


@dataclass
class PcmState:
    """Prototypes, memberships and the fixed bandwidth vector."""

    prototypes: np.ndarray     # (c, D)
    memberships: np.ndarray    # (N, c), entries in (0, 1]
    gamma: np.ndarray          # (c,), positive

    def __post_init__(self):
        if np.any(np.asarray(self.gamma) <= 0.0):
            raise ValueError("gamma entries must be positive")


def pcm_objective(state: PcmState, data) -> float:
    """Evaluate the penalized objective; requires strictly positive memberships."""
    points = as_points(data)
    u = np.asarray(state.memberships, dtype=np.float64)
    if np.any(u <= 0.0):
        raise ValueError("objective undefined for memberships <= 0")
    dist = kernels.distance_matrix(points, np.asarray(state.prototypes, float))
    fit = np.einsum("ij,ij->j", u, dist * dist)
    penalty = np.asarray(state.gamma) * np.sum(u * np.log(u) - u, axis=0)
    return float(np.sum(fit + penalty))


def _objective_tolerant(points, theta, u, gamma) -> float:
    # Same sum, but entries flushed to u = 0 contribute their limit value 0.
    dist = kernels.distance_matrix(points, theta)
    fit = np.einsum("ij,ij->j", u, dist * dist)
    f = np.where(u > 0.0, u * np.log(np.where(u > 0.0, u, 1.0)) - u, 0.0)
    return float(np.sum(fit + gamma * f.sum(axis=0)))


def pcm_membership_update(data, theta, gamma):
    """u_ij = exp(-d_ij^2 / gamma_j); sub-flush exponents give exact 0."""
    gamma = np.asarray(gamma, dtype=np.float64)
    if np.any(gamma <= 0.0):
        raise ValueError("gamma entries must be positive")
    dist = kernels.distance_matrix(as_points(data), np.asarray(theta, float))
    return kernels.pcm_membership(dist, gamma)


def pcm_prototype_update(data, memberships):
    """Membership-weighted mean per cluster; zero total mass is an error."""
    points = as_points(data)
    u = np.asarray(memberships, dtype=np.float64)
    theta, updated = kernels.cut_weighted_means(points, u, np.zeros((u.shape[1], points.shape[1])), 0.0)
    if not updated.all():
        bad = np.flatnonzero(~updated)
        raise DegenerateDataError(f"zero membership mass for cluster(s) {bad.tolist()}")
    return theta


def coincident_prototype_pairs(theta, tol: float):
    """Index pairs of prototypes closer than ``tol``."""
    theta = np.asarray(theta, float)
    pairs = []
    for a in range(theta.shape[0]):
        for b in range(a + 1, theta.shape[0]):
            if np.linalg.norm(theta[a] - theta[b]) < tol:
                pairs.append((a, b))
    return pairs


def pcm_run(data, theta, gamma, tol: float = 1e-4, max_iter: int = 200) -> ClusterModel:
    """Alternate membership and prototype updates with gamma held fixed.

    Stops when the largest prototype displacement drops below ``tol``.
    The recorded objective history treats flushed-to-zero memberships as
    contributing their limit value 0 to the penalty term.
    """
    points = as_points(data)
    theta = np.array(theta, dtype=np.float64, copy=True)
    gamma = np.asarray(gamma, dtype=np.float64)
    if np.any(gamma <= 0.0):
        raise ValueError("gamma entries must be positive")

    history = []
    objective_history = []
    u = kernels.pcm_membership(kernels.distance_matrix(points, theta), gamma)
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        u = kernels.pcm_membership(kernels.distance_matrix(points, theta), gamma)
        theta_new, updated = kernels.cut_weighted_means(points, u, theta, 0.0)
        if not updated.all():
            bad = np.flatnonzero(~updated)
            raise DegenerateDataError(f"zero membership mass for cluster(s) {bad.tolist()}")
        shift = float(np.linalg.norm(theta_new - theta, axis=1).max())
        theta = theta_new
        history.append(IterationRecord(clusters=theta.shape[0], max_shift=shift))
        objective_history.append(_objective_tolerant(points, theta, u, gamma))
        if shift < tol:
            converged = True
            break

    pairs = coincident_prototype_pairs(theta, max(tol, 1e-6))
    if pairs:
        log.warning("coincident prototypes (not merged): %s", pairs)

    labels = np.argmax(u, axis=1)
    return ClusterModel(
        algorithm="pcm",
        prototypes=theta,
        memberships=u,
        bandwidths=gamma,
        bandwidth_kind="gamma",
        labels=labels,
        history=history,
        converged=converged,
        n_iter=n_iter,
        objective=objective_history[-1] if objective_history else None,
        objective_history=objective_history,
    )


def run(data, config: PcmConfig) -> ClusterModel:
    """FCM-initialized PCM: prototypes and gamma from an FCM run, then iterate."""
    fcm = fcm_cluster(
        data,
        FcmConfig(
            c=config.c,
            q=config.fcm_q,
            tol=config.fcm_tol,
            max_iter=config.fcm_max_iter,
            seed=config.seed,
        ),
    )
    gamma = init_gamma_pcm(data, fcm)
    return pcm_run(data, fcm.prototypes, gamma, tol=config.tol, max_iter=config.max_iter)
