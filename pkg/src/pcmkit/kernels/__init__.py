"""Backend selection for the per-iteration numerical kernels.

Two interchangeable backends exist: ``_core`` (Cython extension) and
``_pure`` (NumPy).  The compiled one is used when importable, unless the
environment variable ``PCMKIT_BACKEND`` forces a choice (``cython`` or
``pure``).  Both are deterministic run-to-run; bit-identity *between*
backends is not promised (they may differ in the last ulp), so golden
files are always produced with the pure backend.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pure

try:
    from . import _core
except ImportError:
    _core = None

_BACKENDS = {"pure": _pure}
if _core is not None:
    _BACKENDS["cython"] = _core


def _initial_backend():
    forced = os.environ.get("PCMKIT_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(
                f"PCMKIT_BACKEND={forced!r} requested but that backend is unavailable"
            )
        return forced
    return "cython" if _core is not None else "pure"


_active_name = _initial_backend()
_active = _BACKENDS[_active_name]


def available_backends():
    return tuple(sorted(_BACKENDS))


def backend_name() -> str:
    return _active_name


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previous name."""
    global _active, _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    previous = _active_name
    _active_name = name
    _active = _BACKENDS[name]
    return previous


def get_backend(name: str):
    """Return a backend module directly (used by parity tests and benchmarks)."""
    return _BACKENDS[name]


def _c(arr, dtype=np.float64):
    return np.ascontiguousarray(arr, dtype=dtype)


def distance_matrix(points, theta):
    return _active.distance_matrix(_c(points), _c(theta))


def pcm_membership(dist, gamma):
    return _active.pcm_membership(_c(dist), _c(gamma))


def marginal_membership_matrix(dist, eta, sigma_v):
    return _active.marginal_membership_matrix(_c(dist), _c(eta), float(sigma_v))


def cut_weighted_means(points, memberships, theta_old, threshold):
    return _active.cut_weighted_means(
        _c(points), _c(memberships), _c(theta_old), float(threshold)
    )


def label_mean_abs_dev(points, labels, theta, m):
    return _active.label_mean_abs_dev(
        _c(points), _c(labels, np.int64), _c(theta), int(m)
    )
