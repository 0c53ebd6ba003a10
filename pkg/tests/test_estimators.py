import numpy as np
import pytest
from hypothesis import given, settings
from sklearn.base import clone
from sklearn.neighbors import KNeighborsClassifier
from sklearn.pipeline import make_pipeline

from pdmetric import (
    DiagramDistance,
    Landscape,
    PersistenceDiagram,
    PersistenceImage,
    PersistenceScaleSpace,
    PersistenceWeightedGaussian,
    SlicedWasserstein,
    TopologicalVector,
    diagram_distance,
    sample_uniform_diagram,
)

from conftest import diagrams

MAPS = [
    Landscape(k_max=3),
    PersistenceWeightedGaussian(sigma=0.5),
    PersistenceScaleSpace(sigma=0.5),
    PersistenceImage(resolution=4, sigma=0.3),
    TopologicalVector(length=6),
]


@pytest.fixture(scope="module")
def corpus():
    return [sample_uniform_diagram(8, s) for s in range(6)]


@pytest.mark.parametrize("est", MAPS, ids=lambda e: type(e).__name__)
def test_clone_and_params(est):
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert twin is not est
    key = next(iter(est.get_params()))
    twin.set_params(**{key: est.get_params()[key]})


@pytest.mark.parametrize("est", MAPS, ids=lambda e: type(e).__name__)
def test_pairwise_distances_symmetric(est, corpus):
    M = est.fit(corpus).pairwise_distances(corpus)
    assert M.shape == (6, 6)
    assert np.array_equal(M, M.T)
    assert np.all(np.diag(M) == 0)
    assert M[0, 1] == est.hilbert_distance(corpus[0], corpus[1])
    R = est.pairwise_distances(corpus[:2], corpus[2:])
    assert R.shape == (2, 4)
    assert R[1, 2] == pytest.approx(M[1, 4], abs=1e-12)


def test_vector_transform_shapes(corpus):
    assert PersistenceImage(resolution=3).fit_transform(corpus).shape == (6, 9)
    assert TopologicalVector(length=4).fit_transform(corpus).shape == (6, 4)
    assert TopologicalVector(length=4).transform([]).shape == (0, 4)
    assert len(Landscape().fit_transform(corpus)) == 6


@pytest.mark.parametrize(
    "est",
    [Landscape(k_max=0), PersistenceWeightedGaussian(sigma=-1), PersistenceWeightedGaussian(weight="x"),
     PersistenceScaleSpace(sigma=0), PersistenceImage(resolution=2.5), TopologicalVector(length=True)],
    ids=repr,
)
def test_invalid_params_rejected_at_fit(est, corpus):
    with pytest.raises(ValueError):
        est.fit(corpus)


def test_input_validation():
    est = Landscape(k_max=1)
    # point arrays are coerced, a bare diagram is not a sample set
    assert est.fit_transform([[(0, 1)]])[0] == est.embed(PersistenceDiagram([(0, 1)]))
    with pytest.raises(TypeError):
        est.fit(PersistenceDiagram([(0, 1)]))
    with pytest.raises(ValueError):
        est.fit([[(1, 0)]])


@settings(max_examples=40, deadline=None)
@given(diagrams(6, with_multiplicity=True))
def test_all_maps_permutation_invariant(D):
    pts = D.expanded()
    perm = np.random.default_rng(1).permutation(len(pts))
    shuffled = PersistenceDiagram(pts[perm])
    for est in MAPS:
        assert est.hilbert_distance(D, shuffled) == 0.0


def test_distance_transformers(corpus):
    dd = DiagramDistance(p=2).fit(corpus[:3])
    M = dd.transform(corpus)
    assert M.shape == (6, 3)
    assert M[4, 1] == diagram_distance(corpus[4], corpus[1], 2)
    assert np.all(DiagramDistance(p="inf").fit(corpus).transform(corpus).diagonal() == 0)
    sw = SlicedWasserstein(n_directions=10, sqrt=True).fit(corpus)
    S = sw.transform(corpus)
    assert np.allclose(S, S.T)
    with pytest.raises(ValueError):
        DiagramDistance(p=0.5).fit(corpus)


def test_precomputed_pipeline(corpus):
    y = [0, 0, 0, 1, 1, 1]
    model = make_pipeline(DiagramDistance(p=1), KNeighborsClassifier(n_neighbors=1, metric="precomputed"))
    model.fit(corpus, y)
    assert model.predict(corpus).tolist() == y
