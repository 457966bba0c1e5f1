"""Node label assignment from angular proximity to class centroids.

Each class has a centroid angle on the circle. A node picks its label from
a softmax over centroids with weight distance**(-alpha), so positive alpha
pulls nodes toward their nearest centroid and negative alpha pushes them
away. Weights are computed in log space with a per-row maximum subtraction.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .model import LabelParams, angular_distance
from .sampling import SeedSpec, sample_angles

# Distances below this are treated as this, except exact zero which has
# dedicated semantics (certain assignment for alpha > 0, zero weight for
# alpha < 0).
_MIN_DISTANCE = 1e-12


@dataclass(frozen=True)
class LabelAssignment:
    """Per-node integer labels plus the centroid angles that produced them."""

    labels: np.ndarray
    centroid_angles: np.ndarray

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        centroids = np.asarray(self.centroid_angles, dtype=np.float64)
        if centroids.ndim != 1 or centroids.size < 1:
            raise ValueError("centroid_angles must be a non-empty 1-d array")
        if labels.size and (labels.min() < 0 or labels.max() >= centroids.size):
            raise ValueError("label out of range")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "centroid_angles", centroids)

    def __len__(self) -> int:
        return len(self.labels)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(self.centroid_angles))


def label_probabilities(node_angles: np.ndarray, centroid_angles: np.ndarray,
                        alpha: float) -> np.ndarray:
    """Per-node class probabilities, rows summing to one.

    alpha = 0 is exactly uniform. A node exactly on a centroid is assigned
    there with certainty when alpha > 0 (uniformly among coincident
    centroids) and never when alpha < 0; a node exactly on every centroid
    with alpha < 0 has no valid class and raises ValueError.
    """
    angles = np.asarray(node_angles, dtype=np.float64)
    centroids = np.asarray(centroid_angles, dtype=np.float64)
    n, k = angles.size, centroids.size
    if k < 1:
        raise ValueError("need at least one centroid")
    if alpha == 0.0:
        return np.full((n, k), 1.0 / k)
    dist = angular_distance(angles[:, None], centroids[None, :])
    zero = dist == 0.0
    logw = -alpha * np.log(np.maximum(dist, _MIN_DISTANCE))
    zero_rows = zero.any(axis=1)
    if zero_rows.any():
        if alpha > 0.0:
            logw[zero_rows] = np.where(zero[zero_rows], 0.0, -np.inf)
        else:
            logw[zero_rows & zero.all(axis=1)] = np.nan
            if np.isnan(logw).any():
                raise ValueError(
                    "node at zero distance from every centroid has no valid "
                    "class when alpha < 0"
                )
            logw[zero] = -np.inf
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    return w / w.sum(axis=1, keepdims=True)


def assign_labels_from_centroids(node_angles: np.ndarray, centroid_angles: np.ndarray,
                                 params: LabelParams, stream: SeedSpec) -> LabelAssignment:
    """Draw one label per node for fixed centroid angles."""
    centroids = np.asarray(centroid_angles, dtype=np.float64)
    if centroids.size != params.n_labels:
        raise ValueError(
            f"expected {params.n_labels} centroid angles, got {centroids.size}"
        )
    probs = label_probabilities(node_angles, centroids, params.alpha)
    cum = np.cumsum(probs, axis=1)
    u = stream.generator("label-draws").random(len(probs))
    # smallest j with u < cum[j]; <= keeps zero-probability classes
    # unreachable even at u == 0
    labels = (cum <= u[:, None]).sum(axis=1)
    np.clip(labels, 0, params.n_labels - 1, out=labels)
    return LabelAssignment(labels=labels, centroid_angles=centroids)


def assign_labels(node_angles: np.ndarray, params: LabelParams,
                  stream: SeedSpec) -> LabelAssignment:
    """Draw centroid angles uniformly, then one label per node.

    The stream must be on the centroid stage; the label draws use the same
    seed scope on the label stage so centroid and label randomness stay
    independent.
    """
    if stream.stage != "centroids":
        raise ValueError("assign_labels expects a 'centroids' stage stream")
    centroids = sample_angles(params.n_labels, stream)
    label_stream = dataclasses.replace(stream, stage="labels")
    return assign_labels_from_centroids(node_angles, centroids, params, label_stream)


def max_intracluster_distance(assignment: LabelAssignment,
                              node_angles: np.ndarray) -> dict[int, float]:
    """Largest pairwise angular distance within each non-empty class."""
    angles = np.asarray(node_angles, dtype=np.float64)
    if angles.size != len(assignment):
        raise ValueError("node_angles length must match assignment")
    out: dict[int, float] = {}
    for label in np.unique(assignment.labels):
        members = angles[assignment.labels == label]
        if members.size < 2:
            out[int(label)] = 0.0
            continue
        d = angular_distance(members[:, None], members[None, :])
        out[int(label)] = float(d.max())
    return out
