"""Pure NumPy implementations of the hot per-iteration kernels.

This backend is the import-time fallback when the compiled extension is
unavailable and the reference the extension is tested against.  BLAS
calls are avoided on purpose (einsum/bincount reductions only) so that
repeated runs on one machine are bit-reproducible regardless of the
thread count the linked BLAS would pick.
"""

from __future__ import annotations

import numpy as np

EXP_FLUSH = -700.0


def distance_matrix(points, theta):
    """Euclidean distances, shape (N, m)."""
    diff = points[:, None, :] - theta[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def _flush_exp(exponents):
    out = np.exp(np.maximum(exponents, EXP_FLUSH))
    out[exponents < EXP_FLUSH] = 0.0
    return out


def pcm_membership(dist, gamma):
    """u_ij = exp(-d_ij^2 / gamma_j) with sub-flush exponents set to 0."""
    return _flush_exp(-(dist * dist) / gamma[None, :])


def marginal_membership_matrix(dist, eta, sigma_v):
    """Membership under bandwidth uncertainty.

    gamma_ij = (0.5*eta_j + 0.5*sqrt(eta_j^2 + 4*sigma_v*d_ij))^2; the
    sigma_v = 0 case short-circuits to the crisp gamma_j = eta_j^2.
    """
    if sigma_v == 0.0:
        return pcm_membership(dist, eta * eta)
    root = 0.5 * eta[None, :] + 0.5 * np.sqrt(eta[None, :] * eta[None, :] + 4.0 * sigma_v * dist)
    return _flush_exp(-(dist * dist) / (root * root))


def cut_weighted_means(points, memberships, theta_old, threshold):
    """Membership-weighted means over points with u_ij >= threshold.

    Returns (theta_new, updated): rows whose cut is empty or has zero
    total weight keep their old prototype and get updated[j] = False.
    """
    weights = np.where(memberships >= threshold, memberships, 0.0)
    num = np.einsum("ij,ik->jk", weights, points)
    den = weights.sum(axis=0)
    updated = den > 0.0
    theta_new = theta_old.copy()
    theta_new[updated] = num[updated] / den[updated, None]
    return theta_new, updated


def label_mean_abs_dev(points, labels, theta, m):
    """Per-cluster mean Euclidean deviation of the points labelled to it.

    Returns (eta, counts); clusters with no labelled points get eta 0.
    """
    diff = points - theta[labels]
    norms = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    counts = np.bincount(labels, minlength=m)
    sums = np.bincount(labels, weights=norms, minlength=m)
    eta = np.divide(sums, counts, out=np.zeros(m, dtype=np.float64), where=counts > 0)
    return eta, counts
