"""Kernel predicates, strips and rational rotations."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halving_lab.exact import (
    DimensionMismatch,
    HorizontalSegmentError,
    Rotation2,
    Segment,
    Strip,
    extension,
    horizontal_distance,
    in_alpha_strip,
    orientation,
    pt,
    rational_rotation,
    squared_distance,
)

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=997
)


class TestOrientation:
    def test_ccw_unit_triangle(self):
        assert orientation(pt(0, 0), pt(1, 0), pt(0, 1)) == 1

    def test_collinear(self):
        assert orientation(pt(0, 0), pt(1, 1), pt(2, 2)) == 0

    def test_cw(self):
        assert orientation(pt(0, 0), pt(1, 0), pt(1, -1)) == -1

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            orientation(pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0))

    @given(st.tuples(rationals, rationals), st.tuples(rationals, rationals), st.tuples(rationals, rationals))
    @settings(max_examples=200)
    def test_antisymmetric_under_swaps(self, a, b, c):
        assert orientation(a, b, c) == -orientation(b, a, c)
        assert orientation(a, b, c) == -orientation(a, c, b)


class TestExtension:
    def test_diagonal_quarter_segment(self):
        s = Segment(pt(F(1, 4), F(1, 4)), pt(F(3, 4), F(3, 4)))
        e = extension(s)
        assert e == Segment(pt(0, 0), pt(1, 1))

    def test_already_spanning(self):
        s = Segment(pt(0, 0), pt(1, 1))
        assert extension(s) == s

    def test_hand_extrapolated(self):
        s = Segment(pt(F(1, 2), 0), pt(F(1, 2) + F(1, 8), F(1, 2)))
        e = extension(s)
        assert e == Segment(pt(F(1, 2), 0), pt(F(1, 2) + F(1, 4), 1))

    def test_horizontal_rejected(self):
        with pytest.raises(HorizontalSegmentError):
            extension(Segment(pt(0, 0), pt(1, 0)))

    @given(
        st.tuples(rationals, st.fractions(min_value=0, max_value=1, max_denominator=64)),
        st.tuples(rationals, st.fractions(min_value=0, max_value=1, max_denominator=64)),
    )
    @settings(max_examples=200)
    def test_extension_collinear_with_input(self, a, b):
        if a == b or a[1] == b[1]:
            return
        e = extension(Segment(a, b))
        assert orientation(a, b, e.a) == 0
        assert orientation(a, b, e.b) == 0


class TestHorizontalDistance:
    def test_diagonal_line(self):
        line = Segment(pt(0, 0), pt(1, 1))
        assert horizontal_distance(line, pt(F(1, 2), 0)) == F(1, 2)

    def test_point_on_line(self):
        line = Segment(pt(0, 0), pt(1, 1))
        assert horizontal_distance(line, pt(F(1, 3), F(1, 3))) == 0

    def test_steeper_line(self):
        line = Segment(pt(0, 0), pt(1, 2))
        assert horizontal_distance(line, pt(1, 1)) == F(1, 2)


class TestStrip:
    def strip(self, half_width):
        return Strip.around(Segment(pt(0, 0), pt(1, 1)), half_width)

    def test_inside(self):
        assert in_alpha_strip(self.strip(F(1, 4)), pt(F(1, 8), F(1, 4)))

    def test_too_far(self):
        assert not in_alpha_strip(self.strip(F(1, 4)), pt(F(1, 8), F(1, 2)))

    def test_outside_slab(self):
        assert not in_alpha_strip(self.strip(F(1, 4)), pt(F(1, 2), 2))

    def test_monotone_in_half_width(self):
        narrow = self.strip(F(1, 8))
        wide = self.strip(F(1, 2))
        for q in [pt(F(1, 8), F(1, 4)), pt(F(3, 8), F(1, 4)), pt(F(9, 16), F(1, 2))]:
            if in_alpha_strip(narrow, q):
                assert in_alpha_strip(wide, q)


class TestRotation:
    def test_identity(self):
        r = rational_rotation(0)
        assert (r.cos, r.sin) == (1, 0)

    def test_quarter_turn(self):
        r = rational_rotation(1)
        assert r.apply(pt(1, 0)) == pt(0, 1)

    def test_half_tangent_one_half(self):
        r = rational_rotation(F(1, 2))
        assert r.apply(pt(1, 0)) == pt(F(3, 5), F(4, 5))

    @given(st.fractions(max_denominator=500), st.tuples(rationals, rationals), st.tuples(rationals, rationals))
    @settings(max_examples=200)
    def test_preserves_squared_distance(self, t, a, b):
        r = rational_rotation(t)
        assert squared_distance(r.apply(a), r.apply(b)) == squared_distance(a, b)

    @given(st.fractions(max_denominator=500))
    @settings(max_examples=200)
    def test_exactly_orthogonal(self, t):
        r = rational_rotation(t)
        assert r.cos * r.cos + r.sin * r.sin == 1

    def test_powers_compose(self):
        r = rational_rotation(F(1, 3))
        p = r.powers(3)
        assert p[0] == Rotation2.identity()
        assert p[2] == r.compose(r)
        assert p[3] == r.compose(r).compose(r)


class TestSquaredDistance:
    def test_unit_diagonal(self):
        assert squared_distance(pt(0, 0), pt(1, 1)) == 2

    def test_zero(self):
        assert squared_distance(pt(0, 0), pt(0, 0)) == 0

    def test_three_four_five(self):
        assert squared_distance(pt(1, 2, 3), pt(4, 6, 3)) == 25

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            squared_distance(pt(0, 0), pt(0, 0, 0))
