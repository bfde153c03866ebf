"""Unified possibilistic c-means: noise-level cut plus bandwidth uncertainty.

Two user parameters steer the run.  The noise level ``alpha`` restricts
the prototype update to points whose membership clears a threshold, and
``sigma_v`` folds bandwidth-estimation uncertainty into the membership
function via the corrected bandwidth

    gamma_ij = (0.5*eta_j + 0.5*sqrt(eta_j^2 + 4*sigma_v*d_ij))^2.

With a permissive cut and large sigma_v the behavior is PCM-like
(clusters wander and merge); with strict cuts and small sigma_v it is
APCM-like (clusters stay confined and elimination prunes the rest).

Because memberships live in (0, 1] while noise levels are often quoted
as numbers >= 1, two cut rules ship:

* ``direct``:  threshold = alpha, requiring 0 <= alpha < 1 (the literal
  reading of "membership >= alpha");
* ``exp_neg``: threshold = exp(-alpha) for alpha >= 0, which maps large
  noise levels to permissive cuts.

Neither is asserted to be the canonical transform; the default is
``direct`` and the experiment harness uses ``exp_neg``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataset import as_points
from .errors import TotalEliminationError
from .fcm import FcmConfig, fcm_cluster, init_eta
from .model import ClusterModel, IterationRecord

log = logging.getLogger(__name__)

__all__ = [
    "CUT_RULES",
    "UpcmConfig",
    "assign_labels",
    "eliminate_clusters",
    "threshold_from",
    "upcm_eta_update",
    "upcm_iterate",
    "upcm_membership_update",
    "upcm_prototype_update",
    "upcm_run",
]

CUT_RULES = ("direct", "exp_neg")


def threshold_from(alpha: float, cut_rule: str) -> float:
    """Map a noise level to the membership threshold of the prototype cut."""
    if cut_rule == "direct":
        if not 0.0 <= alpha < 1.0:
            raise ValueError("direct rule needs alpha in [0, 1)")
        return float(alpha)
    if cut_rule == "exp_neg":
        if alpha < 0.0:
            raise ValueError("exp_neg rule needs alpha >= 0")
        return math.exp(-alpha)
    raise ValueError(f"unknown cut rule {cut_rule!r}; choose from {CUT_RULES}")


@dataclass(frozen=True)
class UpcmConfig:
    m_ini: int
    alpha: float = 0.0
    sigma_v: float = 0.0
    cut_rule: str = "direct"
    tol: float = 1e-4
    max_iter: int = 200
    seed: int = 0
    fcm_q: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300

    def __post_init__(self):
        if self.m_ini < 1:
            raise ValueError("m_ini must be >= 1")
        if self.sigma_v < 0:
            raise ValueError("sigma_v must be >= 0")
        threshold_from(self.alpha, self.cut_rule)   # validates the pair


def upcm_membership_update(data, theta, eta, sigma_v: float):
    """Membership matrix under the corrected per-point bandwidth.

    Same closed form as ``fuzzy.corrected_bandwidth`` with v0 = eta_j;
    sigma_v = 0 reduces exactly to ``exp(-d^2 / eta_j^2)``.
    """
    eta = np.asarray(eta, dtype=np.float64)
    if np.any(eta <= 0.0):
        raise ValueError("eta entries must be positive")
    if sigma_v < 0:
        raise ValueError("sigma_v must be >= 0")
    dist = kernels.distance_matrix(as_points(data), np.asarray(theta, float))
    return kernels.marginal_membership_matrix(dist, eta, sigma_v)


def upcm_prototype_update(data, memberships, theta, alpha: float = 0.0,
                          cut_rule: str = "direct"):
    """Weighted mean over the points whose membership clears the cut.

    A cluster whose cut is empty keeps its previous prototype; getting
    rid of dead clusters is the label step's job, not this one's.
    """
    threshold = threshold_from(alpha, cut_rule)
    points = as_points(data)
    theta_new, _ = kernels.cut_weighted_means(
        points, np.asarray(memberships, float), np.asarray(theta, float), threshold
    )
    return theta_new


def upcm_eta_update(data, labels, theta):
    """Mean absolute deviation about the prototype over each label set."""
    points = as_points(data)
    theta = np.asarray(theta, dtype=np.float64)
    eta, _ = kernels.label_mean_abs_dev(
        points, np.asarray(labels, np.int64), theta, theta.shape[0]
    )
    return eta


def assign_labels(memberships):
    """Row argmax with lowest-index tie-break."""
    u = np.asarray(memberships, dtype=np.float64)
    if u.shape[1] < 1:
        raise ValueError("need at least one active cluster")
    return np.argmax(u, axis=1)


def eliminate_clusters(model: ClusterModel) -> ClusterModel:
    """Drop clusters that attract no labels or whose bandwidth is zero.

    Surviving columns keep their relative order; labels are recomputed
    over the surviving memberships.  Raises if nothing survives.
    """
    labels = np.asarray(model.labels)
    m = model.prototypes.shape[0]
    keep = np.zeros(m, dtype=bool)
    keep[np.unique(labels)] = True
    keep &= np.asarray(model.bandwidths) > 0.0
    if not keep.any():
        raise TotalEliminationError("all clusters eliminated")
    u = model.memberships[:, keep]
    return ClusterModel(
        algorithm=model.algorithm,
        prototypes=model.prototypes[keep],
        memberships=u,
        bandwidths=np.asarray(model.bandwidths)[keep],
        bandwidth_kind=model.bandwidth_kind,
        labels=np.argmax(u, axis=1),
        history=model.history,
        converged=model.converged,
        n_iter=model.n_iter,
    )


def upcm_iterate(data, theta, eta, *, sigma_v: float, threshold: float,
                 tol: float = 1e-4, max_iter: int = 200) -> ClusterModel:
    """Core loop from a prepared initialization (prototypes plus eta).

    Per iteration: memberships, cut prototypes, labels, eliminate
    unlabeled clusters, eta update about the new prototypes, eliminate
    zero-eta clusters.  Convergence requires an iteration without
    eliminations whose max prototype shift is below ``tol``.
    """
    points = as_points(data)
    theta = np.array(theta, dtype=np.float64, copy=True)
    eta = np.array(eta, dtype=np.float64, copy=True)

    alive = eta > 0.0
    if not alive.all():
        log.warning(
            "eliminating %d cluster(s) with zero initial bandwidth", int((~alive).sum())
        )
        theta, eta = theta[alive], eta[alive]
    if eta.size == 0:
        raise TotalEliminationError("every cluster had zero initial bandwidth")

    history = []
    converged = False
    u = np.zeros((points.shape[0], eta.size))
    labels = np.zeros(points.shape[0], dtype=np.int64)
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        m_before = eta.size
        dist = kernels.distance_matrix(points, theta)
        u = kernels.marginal_membership_matrix(dist, eta, sigma_v)

        theta_new, _ = kernels.cut_weighted_means(points, u, theta, threshold)
        shift = float(np.linalg.norm(theta_new - theta, axis=1).max())
        theta = theta_new

        labels = np.argmax(u, axis=1)
        present = np.zeros(eta.size, dtype=bool)
        present[np.unique(labels)] = True
        if not present.all():
            theta, u, eta = theta[present], u[:, present], eta[present]
            labels = np.argmax(u, axis=1)

        eta, _ = kernels.label_mean_abs_dev(points, labels, theta, eta.size)

        positive = eta > 0.0
        if not positive.all():
            theta, u, eta = theta[positive], u[:, positive], eta[positive]
            if eta.size == 0:
                raise TotalEliminationError("all clusters eliminated")
            labels = np.argmax(u, axis=1)

        history.append(IterationRecord(clusters=eta.size, max_shift=shift))
        if eta.size == m_before and shift < tol:
            converged = True
            break

    return ClusterModel(
        algorithm="upcm",
        prototypes=theta,
        memberships=u,
        bandwidths=eta,
        bandwidth_kind="eta",
        labels=labels,
        history=history,
        converged=converged,
        n_iter=n_iter,
    )


def upcm_run(data, config: UpcmConfig) -> ClusterModel:
    """FCM-initialized run: eta from the FCM partition, then iterate."""
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
    return upcm_iterate(
        data,
        fcm.prototypes,
        eta,
        sigma_v=config.sigma_v,
        threshold=threshold_from(config.alpha, config.cut_rule),
        tol=config.tol,
        max_iter=config.max_iter,
    )
