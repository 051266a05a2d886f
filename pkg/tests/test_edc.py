"""Tests for the error-versus-discard curves."""

import random

import pytest

from shoulderscore import ScoredSample, ValidationError, edc_curve, oracle_curve
from shoulderscore.edc import (
    CurveKind,
    EdcPoint,
    curve_to_csv,
    parse_curve_points,
)
from shoulderscore.metrics import ScoreMetric, classify, rates

# hand-enumerated dataset, tau = 0.8:
#   a (1.0, 0.9)  TP     b (0.9, 0.3)  FN     c (0.2, 0.1)  TN
#   d (0.85, 0.7) FN     e (0.3, 0.95) FP
FIVE = [
    ScoredSample("a", 1.0, 0.9),
    ScoredSample("b", 0.9, 0.3),
    ScoredSample("c", 0.2, 0.1),
    ScoredSample("d", 0.85, 0.7),
    ScoredSample("e", 0.3, 0.95),
]


def brute_force_points(samples, order, tau):
    """Independent oracle: recount FN/TP over the survivors at every k."""
    n = len(order)
    points = []
    for k in range(n):
        survivors = order[k:]
        fn = sum(1 for s in survivors if s.label >= tau and s.score < tau)
        tp = sum(1 for s in survivors if s.label >= tau and s.score >= tau)
        fnr = fn / (fn + tp) if fn + tp else None
        points.append(EdcPoint(k, k / n, fnr))
    return tuple(points)


def brute_force_empirical(samples, tau):
    order = sorted(samples, key=lambda s: (s.score, s.image_id))
    return brute_force_points(samples, order, tau)


def brute_force_oracle(samples, tau):
    fns = sorted(
        (s for s in samples if s.label >= tau and s.score < tau),
        key=lambda s: s.image_id,
    )
    rest = sorted(
        (s for s in samples if not (s.label >= tau and s.score < tau)),
        key=lambda s: (s.score, s.image_id),
    )
    return brute_force_points(samples, fns + rest, tau)


def random_dataset(rng, size):
    grid = rng.random() < 0.5
    samples = []
    for i in range(size):
        label = rng.randrange(11) / 10.0 if grid else rng.random()
        score = rng.choice([0.0, 0.3, 0.8, 1.0]) if rng.random() < 0.3 else rng.random()
        samples.append(ScoredSample(f"img-{i:03d}", label, score))
    return samples


class TestEmpiricalCurve:
    def test_hand_enumerated(self):
        curve = edc_curve(FIVE, tau=0.8)
        assert curve.kind is CurveKind.EMPIRICAL
        expected = (
            EdcPoint(0, 0.0, 2.0 / 3.0),
            EdcPoint(1, 0.2, 2.0 / 3.0),  # c (TN) discarded
            EdcPoint(2, 0.4, 0.5),        # b (FN) discarded
            EdcPoint(3, 0.6, 0.0),        # d (FN) discarded
            EdcPoint(4, 0.8, None),       # a (TP) discarded: no compliant left
        )
        assert curve.points == expected

    def test_first_point_matches_full_population_fnr(self):
        curve = edc_curve(FIVE, tau=0.8)
        full = rates(classify(FIVE, tau=0.8))
        assert curve.points[0].fnr_remaining == full.fnr

    def test_permutation_invariance(self):
        shuffled = list(FIVE)
        random.Random(3).shuffle(shuffled)
        assert edc_curve(shuffled, tau=0.8) == edc_curve(FIVE, tau=0.8)

    def test_undefined_tail_is_none_not_zero(self):
        # one compliant sample, misclassified: once it is discarded the
        # rate is undefined, not a spurious zero
        samples = [ScoredSample("x", 0.9, 0.1), ScoredSample("y", 0.1, 0.9)]
        curve = edc_curve(samples, tau=0.8)
        assert curve.points[0].fnr_remaining == 1.0
        assert curve.points[1].fnr_remaining is None

    def test_matches_brute_force_on_random_data(self):
        rng = random.Random(2024)
        for _ in range(50):
            samples = random_dataset(rng, rng.randrange(1, 13))
            curve = edc_curve(samples, tau=0.8)
            assert curve.points == brute_force_empirical(samples, 0.8)

    def test_empty_input(self):
        with pytest.raises(ValidationError):
            edc_curve([], tau=0.8)

    def test_invalid_tau(self):
        with pytest.raises(ValidationError):
            edc_curve(FIVE, tau=-0.1)


class TestOracleCurve:
    def test_hand_enumerated(self):
        curve = oracle_curve(FIVE, tau=0.8)
        assert curve.kind is CurveKind.ORACLE
        expected = (
            EdcPoint(0, 0.0, 2.0 / 3.0),
            EdcPoint(1, 0.2, 0.5),   # b (FN) discarded first
            EdcPoint(2, 0.4, 0.0),   # d (FN) discarded: error-free at k = FN
            EdcPoint(3, 0.6, 0.0),   # c (TN) discarded
            EdcPoint(4, 0.8, None),  # a (TP) discarded
        )
        assert curve.points == expected

    def test_reaches_zero_at_fn_count(self):
        cm = classify(FIVE, tau=0.8)
        curve = oracle_curve(FIVE, tau=0.8)
        assert cm.fn == 2
        assert curve.points[cm.fn].fnr_remaining == 0.0

    def test_zero_false_negatives_stays_at_zero(self):
        samples = [
            ScoredSample("a", 1.0, 1.0),
            ScoredSample("b", 0.9, 0.85),
            ScoredSample("c", 0.2, 0.1),
        ]
        for curve in (edc_curve(samples, tau=0.8), oracle_curve(samples, tau=0.8)):
            defined = [p.fnr_remaining for p in curve.points if p.fnr_remaining is not None]
            assert defined and all(v == 0.0 for v in defined)

    def test_pointwise_at_most_empirical(self):
        rng = random.Random(77)
        for _ in range(50):
            samples = random_dataset(rng, rng.randrange(1, 13))
            emp = edc_curve(samples, tau=0.8).points
            orc = oracle_curve(samples, tau=0.8).points
            for e, o in zip(emp, orc):
                if e.fnr_remaining is not None and o.fnr_remaining is not None:
                    assert o.fnr_remaining <= e.fnr_remaining + 1e-12

    def test_matches_brute_force_on_random_data(self):
        rng = random.Random(4096)
        for _ in range(50):
            samples = random_dataset(rng, rng.randrange(1, 13))
            curve = oracle_curve(samples, tau=0.8)
            assert curve.points == brute_force_oracle(samples, 0.8)


class TestCurveSerialization:
    def test_round_trip(self):
        curve = edc_curve(FIVE, tau=0.8)
        text = curve_to_csv(curve)
        assert text.splitlines()[0] == "discarded_count,discard_fraction,fnr_remaining"
        points = parse_curve_points(text)
        assert tuple(points) == curve.points

    def test_undefined_rate_written_as_empty_field(self):
        curve = edc_curve(FIVE, tau=0.8)
        last = curve_to_csv(curve).splitlines()[-1]
        assert last == "4,0.8,"

    def test_bad_header_rejected(self):
        with pytest.raises(ValidationError, match="header"):
            parse_curve_points("a,b,c\n1,2,3\n")

    def test_headers_only_rejected(self):
        with pytest.raises(ValidationError, match="no points"):
            parse_curve_points("discarded_count,discard_fraction,fnr_remaining\n")

    def test_metadata_preserved(self):
        curve = oracle_curve(FIVE, tau=0.7, metric_used=ScoreMetric.COMBINED)
        assert curve.tau == 0.7
        assert curve.metric_used is ScoreMetric.COMBINED
