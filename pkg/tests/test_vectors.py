import math

import numpy as np
import pytest
from hypothesis import given, settings

from pdmetric import PersistenceDiagram
from pdmetric.features import euclidean_distance, persistence_image, topological_vector

from conftest import diagrams


def test_image_empty_and_zero_weight():
    assert np.array_equal(persistence_image(PersistenceDiagram(), 4), np.zeros(16))
    # diagonal points are not diagrams; near the diagonal the image vanishes with the weight
    img = persistence_image(PersistenceDiagram([(0.5, 0.5 + 1e-12)]), 3)
    assert np.all((img >= 0) & (img < 1e-12))


def test_image_single_pixel():
    img = persistence_image(PersistenceDiagram([(0.0, 1.0)]), resolution=1, sigma=1.0)
    assert img.shape == (1,)
    assert img[0] == pytest.approx(math.exp(-0.25) / (2 * math.pi), rel=1e-14)


def test_image_layout_and_direct_sum():
    D = PersistenceDiagram([(0.1, 0.3), (0.6, 0.7)], [1, 2])
    res, sigma = 5, 0.2
    img = persistence_image(D, res, sigma).reshape(res, res)
    centers = (np.arange(res) + 0.5) / res
    expected = np.zeros((res, res))
    for (b, d), m in zip(D.points, D.multiplicities):
        for r, y in enumerate(centers):
            for c, x in enumerate(centers):
                g = math.exp(-((x - b) ** 2 + (y - (d - b)) ** 2) / (2 * sigma**2)) / (2 * math.pi * sigma**2)
                expected[r, c] += m * (d - b) * g
    assert np.allclose(img, expected, rtol=1e-13, atol=0)


def test_image_invalid_params():
    with pytest.raises(ValueError):
        persistence_image(PersistenceDiagram(), 0)
    with pytest.raises(ValueError):
        persistence_image(PersistenceDiagram(), 3, sigma=0)


def test_tv_examples():
    assert np.array_equal(topological_vector(PersistenceDiagram([(0, 1)]), 3), np.zeros(3))
    assert topological_vector(PersistenceDiagram([(0, 1), (0, 2)]), 3).tolist() == [0.5, 0.0, 0.0]


def test_tv_truncates_to_largest():
    D = PersistenceDiagram([(0, 10), (0, 11), (0, 13), (0, 16)])
    # l-inf gaps 1, 3, 6, 2, 5, 3; the (0,10)-(0,16) pair is capped by diag(0,10) = 5
    assert topological_vector(D, 4).tolist() == [5.0, 5.0, 3.0, 3.0]
    assert topological_vector(D, 8).tolist() == [5.0, 5.0, 3.0, 3.0, 2.0, 1.0, 0.0, 0.0]


def test_euclidean_distance():
    assert euclidean_distance([0, 0], [3, 4]) == 5.0
    v = np.arange(5.0)
    assert euclidean_distance(v, v) == 0.0
    assert euclidean_distance([1, 0, 0], [0, 1, 0]) == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        euclidean_distance([1, 2], [1, 2, 3])


@settings(max_examples=50, deadline=None)
@given(diagrams(6))
def test_permutation_invariance(D):
    pts = D.expanded()
    perm = np.random.default_rng(0).permutation(len(pts))
    shuffled = PersistenceDiagram(pts[perm])
    assert np.array_equal(persistence_image(D, 4, 0.5), persistence_image(shuffled, 4, 0.5))
    assert np.array_equal(topological_vector(D, 5), topological_vector(shuffled, 5))
