"""Exact serialization round trips and deterministic SVG."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halving_lab.artifact import PointSetArtifact
from halving_lab.document import (
    document_json,
    emit_csv,
    emit_json,
    parse_csv,
    parse_document,
    to_document,
)
from halving_lab.exact import pt
from halving_lab.recursive import build, graph_artifact
from halving_lab.svgplot import emit_svg


@pytest.fixture(scope="module")
def level_one():
    return graph_artifact(build(1, 1))


class TestJsonRoundTrip:
    def test_identity_on_level_one(self, level_one):
        text = emit_json(level_one)
        again = emit_json(parse_document(text))
        assert text == again

    def test_exact_tiny_rationals(self):
        art = PointSetArtifact(
            dimension=2,
            points=[pt(F(1, 2**48), F(-3, 7**10)), pt(0, 1)],
            claimed_halving=[(0, 1)],
        )
        back = parse_document(emit_json(art))
        assert back.points == art.points
        assert back.claimed_halving == art.claimed_halving

    @given(
        st.lists(
            st.tuples(
                st.fractions(max_denominator=10**12),
                st.fractions(max_denominator=10**12),
            ),
            min_size=1,
            max_size=8,
        )
    )
    @settings(max_examples=60)
    def test_arbitrary_rationals_survive(self, coords):
        art = PointSetArtifact(dimension=2, points=[pt(*c) for c in coords])
        assert parse_document(emit_json(art)).points == art.points

    def test_bad_denominator_rejected(self, level_one):
        doc = to_document(level_one)
        doc["coordinates"][0][0][1] = "0"
        with pytest.raises(ValueError):
            parse_document(document_json(doc))

    def test_count_mismatch_rejected(self, level_one):
        doc = to_document(level_one)
        doc["count"] = 3
        with pytest.raises(ValueError):
            parse_document(document_json(doc))

    def test_unknown_schema_rejected(self, level_one):
        doc = to_document(level_one)
        doc["schema_version"] = 99
        with pytest.raises(ValueError):
            parse_document(document_json(doc))


class TestCsv:
    def test_header_contract(self, level_one):
        text = emit_csv(level_one)
        assert text.splitlines()[0] == "idx,x_num,x_den,y_num,y_den"

    def test_round_trip_points(self, level_one):
        assert parse_csv(emit_csv(level_one)) == list(level_one.points)

    def test_lossy_columns_opt_in_and_ignored(self, level_one):
        text = emit_csv(level_one, include_decimal=True)
        header = text.splitlines()[0]
        assert "x_approx_lossy" in header
        assert parse_csv(text) == list(level_one.points)

    def test_three_dimensional_header(self):
        art = PointSetArtifact(dimension=3, points=[pt(0, 0, 0), pt(1, 2, 3)])
        assert emit_csv(art).splitlines()[0] == "idx,x_num,x_den,y_num,y_den,z_num,z_den"


class TestSvg:
    def test_deterministic_bytes(self, level_one):
        assert emit_svg(level_one) == emit_svg(level_one)

    def test_two_point_document(self):
        art = PointSetArtifact(dimension=2, points=[pt(0, 0), pt(1, 1)], claimed_halving=[(0, 1)])
        svg = emit_svg(art).decode()
        assert svg.count("<circle") == 2
        assert svg.count("<line") == 1

    def test_level_one_roles(self, level_one):
        svg = emit_svg(level_one).decode()
        assert svg.count("<circle") == 6
        assert svg.count('fill="black"') == 1
        assert svg.count('fill="none"') == 5
        assert svg.count("<line") == 5

    def test_pure_reader(self, level_one):
        before = emit_json(level_one)
        emit_svg(level_one)
        assert emit_json(level_one) == before

    def test_three_d_projection_renders(self):
        art = PointSetArtifact(dimension=3, points=[pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 2)])
        assert b"<svg" in emit_svg(art)

    def test_dimension_four_rejected(self):
        art = PointSetArtifact(dimension=4, points=[pt(0, 0, 0, 0), pt(1, 1, 1, 1)])
        with pytest.raises(ValueError):
            emit_svg(art)

    def test_thirty_digit_decimals(self):
        from halving_lab.svgplot import _dec30

        assert _dec30(F(1, 3)).startswith("0.3333333333")
        assert _dec30(F(5)) == "5"
        assert _dec30(F(-7, 2)) == "-3.5"
