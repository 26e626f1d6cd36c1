"""Rosette assembly, polygon padding, density verdicts."""

from fractions import Fraction as F

import pytest

from halving_lab.artifact import PointSetArtifact
from halving_lab.exact import pt
from halving_lab.oracle import count_halving_lines_sweep, is_halving
from halving_lab.recursive import build, finalize_lemma1
from halving_lab.rosette import (
    assemble_rosette,
    build_rosette,
    default_epsilon,
    density_check,
    lift,
    normalize_width,
    pad_regular_polygon,
    verify_rosette,
)


@pytest.fixture(scope="module")
def base6():
    artifact, _ = finalize_lemma1(build(1, 1))
    return artifact


@pytest.fixture(scope="module")
def rosette42(base6):
    artifact, report = build_rosette(base6)
    assert report.passed
    return artifact


class TestLift:
    def test_normalized_range_required(self, base6):
        with pytest.raises(ValueError):
            lift(base6, F(1, 10))  # not normalized yet

    def test_direct_example(self):
        art = PointSetArtifact(dimension=2, points=[pt(F(1, 2), 1), pt(F(-1, 2), 0)])
        lifted = lift(art, F(1, 10))
        assert lifted.points[0] == pt(2, F(1, 100))
        assert lifted.points[1] == pt(1, 0)

    def test_epsilon_one_is_translation(self):
        art = PointSetArtifact(dimension=2, points=[pt(0, F(7, 3)), pt(F(1, 4), F(-2))])
        lifted = lift(art, F(1))
        assert [p[1] for p in lifted.points] == [F(7, 3), F(-2)]
        assert [p[0] for p in lifted.points] == [F(3, 2), F(7, 4)]

    def test_halving_count_invariant(self, base6):
        normalized = normalize_width(base6)
        lifted = lift(normalized, default_epsilon(base6.count))
        before = count_halving_lines_sweep(base6.points)
        after = count_halving_lines_sweep(lifted.points)
        assert before.halving_count == after.halving_count

    def test_x_lands_in_band(self, base6):
        lifted = lift(normalize_width(base6), F(1, 64))
        assert all(1 <= x <= 2 for x, _ in lifted.points)


class TestAssemble:
    def test_counts(self, rosette42):
        assert rosette42.count == 42
        assert len(rosette42.claimed_halving) == 7 * 5

    def test_zeroth_copy_is_the_base(self, base6):
        lifted = lift(normalize_width(base6), default_epsilon(6))
        rosette = assemble_rosette(lifted)
        assert rosette.points[:6] == list(lifted.points)

    def test_every_transplant_certified(self, rosette42):
        for pair in rosette42.claimed_halving:
            ok, _ = is_halving([rosette42.points[pair[0]], rosette42.points[pair[1]]], rosette42.points)
            assert ok

    def test_copy_balance(self, rosette42):
        report = verify_rosette(rosette42)
        assert report.passed and report.violation_count == 0

    def test_total_count_at_least_family(self, rosette42):
        res = count_halving_lines_sweep(rosette42.points)
        assert res.halving_count >= 35


class TestPolygonPadding:
    def test_identity(self, rosette42):
        padded, report = pad_regular_polygon(rosette42, 42)
        assert padded.count == 42 and report.passed

    def test_pad_to_44(self, rosette42):
        padded, report = pad_regular_polygon(rosette42, 44)
        assert padded.count == 44
        assert report.passed
        for x, y in padded.points[-2:]:
            assert x * x + y * y == 9  # exactly on the radius-3 circle
        for i, j in padded.claimed_halving:
            ok, _ = is_halving([padded.points[i], padded.points[j]], padded.points)
            assert ok

    def test_oversized_padding_rejected(self, rosette42):
        with pytest.raises(ValueError):
            pad_regular_polygon(rosette42, 42 + 4 * 6 + 6)

    def test_odd_target_rejected(self, rosette42):
        with pytest.raises(ValueError):
            pad_regular_polygon(rosette42, 43)


UNIT_SQUARE = PointSetArtifact(dimension=2, points=[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])


class TestDensity:
    def test_unit_square_dense_at_one(self):
        report = density_check(UNIT_SQUARE, F(1))
        assert report.passed
        assert report.details["max_sq_dist"] == 2

    def test_two_points_not_dense_at_half(self):
        art = PointSetArtifact(dimension=2, points=[pt(0, 0), pt(1, 0)])
        report = density_check(art, F(1, 2))
        assert not report.passed

    def test_desk_scale_rosette_not_four_dense(self, rosette42):
        # the construction is only dense asymptotically; at this scale the
        # spread/gap ratio exceeds the gamma*sqrt(n) budget by two orders
        report = density_check(rosette42, F(4))
        assert not report.passed
        assert report.details["achieved_gamma_approx"] > 100

    def test_verdict_scale_invariant(self, rosette42):
        scaled = rosette42.with_points([(x * 7, y * 7) for x, y in rosette42.points])
        a = density_check(rosette42, F(4))
        b = density_check(scaled, F(4))
        assert a.passed == b.passed
