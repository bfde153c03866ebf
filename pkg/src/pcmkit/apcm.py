"""Adaptive possibilistic c-means with cluster elimination.

The bandwidth is rescaled by a user parameter instead of being trusted:
``gamma_j = (eta_hat / alpha) * eta_j`` where ``eta_hat`` is the minimum
of the initial eta values and stays frozen.  After each membership and
prototype pass, eta is re-estimated as the mean absolute deviation of
each cluster's most compatible points about their own mean vector, and
clusters that attract no points (or whose eta collapses to zero) are
eliminated, never merged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataset import as_points
from .errors import TotalEliminationError
from .fcm import FcmConfig, fcm_cluster, init_eta
from .model import ClusterModel, IterationRecord

log = logging.getLogger(__name__)

__all__ = [
    "ApcmConfig",
    "apcm_eta_update",
    "apcm_gamma",
    "apcm_run",
    "most_compatible_sets",
]


@dataclass(frozen=True)
class ApcmConfig:
    """``alpha_apcm`` is the positive bandwidth-scaling parameter; it is
    unrelated to the UPCM noise level of the same letter."""

    m_ini: int
    alpha_apcm: float
    tol: float = 1e-4
    max_iter: int = 200
    seed: int = 0
    fcm_q: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300

    def __post_init__(self):
        if not self.alpha_apcm > 0:
            raise ValueError("alpha_apcm must be positive")
        if self.m_ini < 1:
            raise ValueError("m_ini must be >= 1")


def apcm_gamma(eta, eta_hat: float, alpha_apcm: float):
    """gamma_j = (eta_hat / alpha_apcm) * eta_j."""
    eta = np.asarray(eta, dtype=np.float64)
    if np.any(eta <= 0.0) or not eta_hat > 0 or not alpha_apcm > 0:
        raise ValueError("eta entries, eta_hat and alpha_apcm must be positive")
    return (eta_hat / alpha_apcm) * eta


def most_compatible_sets(memberships):
    """Index arrays A_j of the points whose largest membership is at j.

    Ties go to the lowest cluster index; empty sets are allowed.
    """
    u = np.asarray(memberships, dtype=np.float64)
    labels = np.argmax(u, axis=1)
    return [np.flatnonzero(labels == j) for j in range(u.shape[1])]


def apcm_eta_update(data, sets):
    """Mean absolute deviation of each compatible set about its own mean.

    Empty sets produce eta_j = 0, which the run loop treats as an
    elimination trigger, as does a single-point (or coincident) set.
    """
    points = as_points(data)
    eta = np.zeros(len(sets), dtype=np.float64)
    for j, idx in enumerate(sets):
        if len(idx) == 0:
            continue
        members = points[idx]
        mu = members.mean(axis=0)
        eta[j] = float(np.mean(np.linalg.norm(members - mu, axis=1)))
    return eta


def _compact(theta, u, eta, keep):
    return theta[keep], u[:, keep], eta[keep]


def apcm_run(data, config: ApcmConfig) -> ClusterModel:
    """FCM-initialized adaptive PCM.

    Loop order per iteration: memberships, prototypes, label-based
    elimination, eta update, zero-eta elimination.  Convergence requires
    an iteration with no eliminations and max prototype shift < tol.
    """
    points = as_points(data)
    fcm = fcm_cluster(
        data,
        FcmConfig(
            c=config.m_ini,
            q=config.fcm_q,
            tol=config.fcm_tol,
            max_iter=config.fcm_max_iter,
            seed=config.seed,
        ),
    )
    eta = init_eta(data, fcm)
    theta = fcm.prototypes.copy()

    alive = eta > 0.0
    if not alive.all():
        log.warning(
            "eliminating %d cluster(s) with zero initial bandwidth", int((~alive).sum())
        )
        theta, eta = theta[alive], eta[alive]
    if eta.size == 0:
        raise TotalEliminationError("every cluster had zero initial bandwidth")
    eta_hat = float(eta.min())   # frozen for the whole run

    history = []
    converged = False
    u = np.zeros((points.shape[0], eta.size))
    labels = np.zeros(points.shape[0], dtype=np.int64)
    n_iter = 0
    for n_iter in range(1, config.max_iter + 1):
        m_before = eta.size
        gamma = apcm_gamma(eta, eta_hat, config.alpha_apcm)
        dist = kernels.distance_matrix(points, theta)
        u = kernels.pcm_membership(dist, gamma)

        theta_new, _ = kernels.cut_weighted_means(points, u, theta, 0.0)
        shift = float(np.linalg.norm(theta_new - theta, axis=1).max())
        theta = theta_new

        labels = np.argmax(u, axis=1)
        present = np.zeros(eta.size, dtype=bool)
        present[np.unique(labels)] = True
        if not present.all():
            theta, u, eta = _compact(theta, u, eta, present)
            labels = np.argmax(u, axis=1)

        sets = most_compatible_sets(u)
        eta = apcm_eta_update(points, sets)

        positive = eta > 0.0
        if not positive.all():
            theta, u, eta = _compact(theta, u, eta, positive)
            if eta.size == 0:
                raise TotalEliminationError("all clusters eliminated")
            labels = np.argmax(u, axis=1)

        history.append(IterationRecord(clusters=eta.size, max_shift=shift))
        if eta.size == m_before and shift < config.tol:
            converged = True
            break

    return ClusterModel(
        algorithm="apcm",
        prototypes=theta,
        memberships=u,
        bandwidths=eta,
        bandwidth_kind="eta",
        labels=labels,
        history=history,
        converged=converged,
        n_iter=n_iter,
    )
