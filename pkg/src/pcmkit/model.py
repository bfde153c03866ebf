"""Shared clustering result container and its JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

MODEL_SCHEMA_VERSION = 1

__all__ = ["ClusterModel", "IterationRecord", "MODEL_SCHEMA_VERSION"]


@dataclass(frozen=True)
class IterationRecord:
    """One loop pass: surviving cluster count and largest prototype move."""

    clusters: int
    max_shift: float


@dataclass
class ClusterModel:
    """Final state of a clustering run over the active clusters only.

    ``bandwidths`` holds gamma (squared units) for PCM and eta (distance
    units) for APCM/UPCM, as recorded in ``bandwidth_kind``.  ``labels``
    index active clusters.  ``history`` has one record per iteration.
    """

    algorithm: str
    prototypes: np.ndarray          # (m, D)
    memberships: np.ndarray         # (N, m)
    bandwidths: np.ndarray          # (m,)
    bandwidth_kind: str             # "gamma" or "eta"
    labels: np.ndarray              # (N,)
    history: list = field(default_factory=list)
    converged: bool = False
    n_iter: int = 0
    objective: float = None
    objective_history: list = field(default_factory=list)

    @property
    def n_clusters(self) -> int:
        return int(self.prototypes.shape[0])

    def cluster_counts(self):
        """Cluster count per iteration, from the history."""
        return [rec.clusters for rec in self.history]

    def to_dict(self) -> dict:
        payload = {
            "schema_version": MODEL_SCHEMA_VERSION,
            "algorithm": self.algorithm,
            "n_clusters": self.n_clusters,
            "prototypes": [[float(v) for v in row] for row in self.prototypes],
            "bandwidths": [float(v) for v in self.bandwidths],
            "bandwidth_kind": self.bandwidth_kind,
            "labels": [int(v) for v in self.labels],
            "converged": bool(self.converged),
            "n_iter": int(self.n_iter),
            "history": [
                {"clusters": rec.clusters, "max_shift": rec.max_shift}
                for rec in self.history
            ],
        }
        if self.objective is not None:
            payload["objective"] = float(self.objective)
        return payload

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent) + "\n"

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
