import math

import numpy as np
import pytest
from hypothesis import given, settings

from pdmetric import (
    PartialMatching,
    PersistenceDiagram,
    bottleneck_distance,
    brute_force_distance,
    diagram_distance,
    matching_cost,
    optimal_matching,
)
from pdmetric.matching import BruteForceTooLarge, MatchingError
from pdmetric.theory import assouad_packing, s_diagram

from conftest import diagrams, random_diagram

EMPTY = PersistenceDiagram()
UNIT = PersistenceDiagram([(0.0, 1.0)])
INNER = PersistenceDiagram([(0.1, 0.9)])


def test_matching_cost_everything_to_diagonal():
    m = PartialMatching((), (0,), ())
    assert matching_cost(UNIT, EMPTY, m, 1) == 0.5


def test_matching_cost_matched_p2():
    m = PartialMatching(((0, 0),), (), ())
    assert matching_cost(UNIT, INNER, m, 2) == pytest.approx(0.01, abs=1e-15)


def test_matching_cost_identity_is_zero():
    d = PersistenceDiagram([(0, 1), (0.2, 0.7)])
    m = PartialMatching(((0, 0), (1, 1)), (), ())
    for p in (1, 2, 3, math.inf):
        assert matching_cost(d, d, m, p) == 0.0


def test_matching_must_cover_points():
    with pytest.raises(MatchingError):
        matching_cost(UNIT, INNER, PartialMatching((), (0,), ()), 1)
    with pytest.raises(MatchingError):
        matching_cost(UNIT, INNER, PartialMatching(((0, 0),), (0,), ()), 1)


def test_diagram_distance_examples():
    assert diagram_distance(UNIT, EMPTY, 1) == 0.5
    assert diagram_distance(EMPTY, EMPTY, 2) == 0.0
    assert diagram_distance(UNIT, INNER, 2) == pytest.approx(0.1, abs=1e-12)
    a, b = s_diagram([1, 2]).diagram, s_diagram([1, 2, 3, 4]).diagram
    assert diagram_distance(a, b, 1) == pytest.approx(7.0 / 24.0, abs=1e-12)
    assert brute_force_distance(a, b, 1) == pytest.approx(7.0 / 24.0, abs=1e-12)


def test_packing_pair_values():
    fam = assouad_packing(2, 1, 1)
    a, b = fam.diagrams[0], fam.diagrams[3]
    assert diagram_distance(a, b, 1) == pytest.approx(0.4, abs=1e-12)
    assert diagram_distance(a, b, 2) == pytest.approx(math.sqrt(2) * 0.2, abs=1e-12)
    assert bottleneck_distance(a, b) == pytest.approx(0.2, abs=1e-12)


def test_bottleneck_examples():
    d = PersistenceDiagram([(0, 1), (0.3, 0.4)])
    assert bottleneck_distance(d, d) == 0.0
    assert bottleneck_distance(UNIT, INNER) == pytest.approx(0.1, abs=1e-15)
    assert bottleneck_distance(EMPTY, EMPTY) == 0.0
    assert diagram_distance(UNIT, INNER, math.inf) == bottleneck_distance(UNIT, INNER)


def test_optimal_matching_cost_agrees():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = random_diagram(rng, 6), random_diagram(rng, 6)
        for p in (1, 2):
            value, m = optimal_matching(a, b, p)
            m.validate(len(a.expanded()), len(b.expanded()))
            assert matching_cost(a, b, m, p) ** (1.0 / p) == pytest.approx(value, abs=1e-12)


def test_multiplicity_counts():
    double = PersistenceDiagram([(0, 1)], [2])
    assert diagram_distance(double, EMPTY, 1) == 1.0
    assert diagram_distance(double, EMPTY, 2) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert bottleneck_distance(double, UNIT) == 0.5


def test_brute_force_refuses_large():
    big = PersistenceDiagram([(i, i + 1.0) for i in range(6)])
    with pytest.raises(BruteForceTooLarge):
        brute_force_distance(big, big, 1)


@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_oracle_random_corpus(p):
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = random_diagram(rng), random_diagram(rng)
        assert diagram_distance(a, b, p) == pytest.approx(brute_force_distance(a, b, p), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(diagrams(4), diagrams(4), diagrams(4))
def test_metric_axioms(a, b, c):
    for p in (1, 2, math.inf):
        dab = diagram_distance(a, b, p)
        assert dab >= 0
        assert diagram_distance(a, a, p) == 0
        assert dab == diagram_distance(b, a, p)
        assert dab <= diagram_distance(a, c, p) + diagram_distance(c, b, p) + 1e-9


@settings(max_examples=40, deadline=None)
@given(diagrams(5), diagrams(5))
def test_scale_equivariance(a, b):
    for s in (0.5, 3.0):
        for p in (1, 2, math.inf):
            assert diagram_distance(a.scaled(s), b.scaled(s), p) == pytest.approx(
                s * diagram_distance(a, b, p), rel=1e-9, abs=1e-9
            )


@settings(max_examples=40, deadline=None)
@given(diagrams(5), diagrams(5))
def test_translation_invariance(a, b):
    for p in (1, math.inf):
        assert diagram_distance(a.translated(2.5), b.translated(2.5), p) == pytest.approx(
            diagram_distance(a, b, p), abs=1e-9
        )


@settings(max_examples=40, deadline=None)
@given(diagrams(5), diagrams(5))
def test_near_diagonal_point_does_not_increase(a, b):
    # a point hugging the diagonal costs almost nothing to drop
    eps = 1e-9
    extra = a.union(PersistenceDiagram([(0.3, 0.3 + eps)]))
    for p in (1, 2, math.inf):
        assert diagram_distance(extra, b, p) <= diagram_distance(a, b, p) + eps + 1e-9
