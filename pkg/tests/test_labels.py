"""Label assignment from centroid proximity."""

import dataclasses
import math

import numpy as np
import pytest

from hypbench.labels import (
    LabelAssignment,
    assign_labels,
    assign_labels_from_centroids,
    label_probabilities,
    max_intracluster_distance,
)
from hypbench.model import LabelParams
from hypbench.sampling import SeedSpec


def test_probabilities_hand_case():
    # distances 0.1 and 0.2 at alpha=1: weights 10 and 5, probabilities 2/3, 1/3
    probs = label_probabilities(np.array([0.0]), np.array([0.1, 2 * np.pi - 0.2]), 1.0)
    assert probs[0] == pytest.approx([2 / 3, 1 / 3], rel=1e-12)


def test_alpha_zero_is_exactly_uniform():
    probs = label_probabilities(np.array([0.0, 1.0, 4.0]), np.array([0.5, 2.0]), 0.0)
    assert np.all(probs == 0.5)
    # exact uniformity holds even when a node sits on a centroid
    on_centroid = label_probabilities(np.array([0.5]), np.array([0.5, 2.0]), 0.0)
    assert np.all(on_centroid == 0.5)


def test_zero_distance_semantics():
    centroids = np.array([1.0, 2.0, 3.0])
    pull = label_probabilities(np.array([2.0]), centroids, 2.0)
    assert pull[0] == pytest.approx([0.0, 1.0, 0.0], abs=0.0)
    push = label_probabilities(np.array([2.0]), centroids, -2.0)
    assert push[0, 1] == 0.0
    assert push[0].sum() == pytest.approx(1.0, rel=1e-12)
    # coincident centroids share the certain assignment uniformly
    twin = label_probabilities(np.array([2.0]), np.array([2.0, 2.0, 0.5]), 3.0)
    assert twin[0] == pytest.approx([0.5, 0.5, 0.0], abs=0.0)


def test_all_centroids_at_zero_distance_with_negative_alpha_raises():
    with pytest.raises(ValueError):
        label_probabilities(np.array([1.0]), np.array([1.0, 1.0]), -1.0)


def test_extreme_alpha_stays_finite():
    probs = label_probabilities(np.array([0.0]), np.array([1e-13, 0.5]), 10.0)
    assert not np.any(np.isnan(probs))
    assert probs[0, 0] > 0.999999
    probs = label_probabilities(np.array([0.0]), np.array([1e-13, 0.5]), -10.0)
    assert probs[0, 1] > 0.999999
    ratio = label_probabilities(np.array([0.0]), np.array([0.5, 1.0]), 10.0)
    assert ratio[0, 0] / ratio[0, 1] == pytest.approx(2.0**10, rel=1e-9)


def test_assignment_determinism_and_stage_contract():
    params = LabelParams(n_labels=4, alpha=3.0)
    angles = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    spec = SeedSpec(5, "lbl", 0, "centroids")
    a1 = assign_labels(angles, params, spec)
    a2 = assign_labels(angles, params, spec)
    assert np.array_equal(a1.labels, a2.labels)
    assert np.array_equal(a1.centroid_angles, a2.centroid_angles)
    assert len(a1.centroid_angles) == 4
    with pytest.raises(ValueError):
        assign_labels(angles, params, SeedSpec(5, "lbl", 0, "labels"))


def test_assignment_empirical_frequencies():
    # two centroids at distance ratio 1:2 and alpha=1 give P = 2/3 for the
    # nearer one; check the sampler against the binomial 3-sigma band
    params = LabelParams(n_labels=2, alpha=1.0)
    centroids = np.array([0.1, 2 * np.pi - 0.2])
    angles = np.zeros(4000)
    spec = SeedSpec(9, "freq", 0, "labels")
    out = assign_labels_from_centroids(angles, centroids, params, spec)
    frac = np.mean(out.labels == 0)
    sigma = math.sqrt((2 / 3) * (1 / 3) / 4000)
    assert abs(frac - 2 / 3) <= 3 * sigma


def test_deterministic_rows_never_miss():
    params = LabelParams(n_labels=3, alpha=2.0)
    centroids = np.array([1.0, 2.0, 3.0])
    angles = np.full(500, 2.0)
    out = assign_labels_from_centroids(angles, centroids, params,
                                       SeedSpec(1, "det", 0, "labels"))
    assert np.all(out.labels == 1)


def test_assignment_validation():
    params = LabelParams(n_labels=3, alpha=1.0)
    with pytest.raises(ValueError):
        assign_labels_from_centroids(np.zeros(5), np.array([0.1, 0.2]), params,
                                     SeedSpec(0, "x", 0, "labels"))
    with pytest.raises(ValueError):
        LabelAssignment(labels=np.array([0, 3]), centroid_angles=np.array([0.1, 0.2]))


def test_class_counts():
    a = LabelAssignment(labels=np.array([0, 2, 2, 0]),
                        centroid_angles=np.array([0.1, 0.2, 0.3]))
    assert np.array_equal(a.class_counts(), [2, 0, 2])


def test_max_intracluster_distance():
    angles = np.array([0.1, 2 * np.pi - 0.1, 1.0, 1.5, 3.0])
    labels = np.array([0, 0, 1, 1, 2])
    a = LabelAssignment(labels=labels, centroid_angles=np.array([0.0, 1.2, 3.0]))
    out = max_intracluster_distance(a, angles)
    assert out[0] == pytest.approx(0.2, rel=1e-12)  # wraparound pair
    assert out[1] == pytest.approx(0.5, rel=1e-12)
    assert out[2] == 0.0  # singleton class
    # empty classes are absent, not zero
    b = LabelAssignment(labels=np.array([0, 0]), centroid_angles=np.array([0.1, 0.9]))
    out = max_intracluster_distance(b, np.array([0.0, 0.4]))
    assert set(out) == {0}


def test_label_stream_differs_from_centroid_stream():
    spec = SeedSpec(5, "lbl", 0, "centroids")
    derived = dataclasses.replace(spec, stage="labels")
    assert not np.allclose(spec.generator().random(4), derived.generator().random(4))
