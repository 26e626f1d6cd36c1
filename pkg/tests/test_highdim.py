"""Spatial gadgets, direction packing, candidate imbalance, parity fix."""

from fractions import Fraction as F

import pytest

from halving_lab.artifact import PointSetArtifact
from halving_lab.exact import pt
from halving_lab.highdim import (
    assemble,
    block_A,
    block_B,
    diff_of_hyperplane,
    inv_sqrt_floor,
    parity_fix,
    sphere_directions,
    verify_assembly,
    verify_directions,
)
from halving_lab.oracle import is_halving
from halving_lab.recursive import build, finalize_lemma1

EPS = F(1, 2**16)


@pytest.fixture(scope="module")
def important6():
    artifact, _ = finalize_lemma1(build(1, 1))
    return artifact


@pytest.fixture(scope="module")
def desk_assembly(important6):
    directions = sphere_directions(m=6, d=3, seed=5, pairs=4)
    return assemble(3, 6, EPS, directions, important6, seed=5)


class TestBlocks:
    def test_block_a_m2_counterweights(self):
        eps = F(1, 16)
        important = PointSetArtifact(
            dimension=2, points=[pt(0, 0), pt(1, 1)], claimed_halving=[(0, 1)]
        )
        blk = block_A(2, eps, important)
        assert blk.points[2:] == [(F(-3, 2), F(1, 256)), (F(-1), F(-1, 256))]

    def test_block_a_important_family_survives(self, important6):
        blk = block_A(6, EPS, important6)
        assert blk.important_count == 6
        assert len(blk.claimed_pairs) == 5
        for i, j in blk.claimed_pairs:
            ok, _ = is_halving([blk.points[i], blk.points[j]], blk.points)
            assert ok

    def test_block_a_flattens_important(self, important6):
        blk = block_A(6, EPS, important6)
        for x, y in blk.points[:6]:
            assert 1 <= x <= 2 and abs(y) < EPS**3

    def test_block_a_odd_m_rejected(self, important6):
        with pytest.raises(ValueError):
            block_A(5, EPS, important6)

    def test_block_b_exact_symmetry(self):
        for m in (1, 2, 6):
            blk = block_B(m, EPS)
            pts = set(blk.points)
            assert all((-x, -y) in pts for x, y in pts)
            assert len(pts) == 2 * m

    def test_block_b_m2_coordinates(self):
        eps = F(1, 16)
        blk = block_B(2, eps)
        assert set(blk.points) == {
            (F(-3, 2), eps),
            (F(-1), eps),
            (F(3, 2), -eps),
            (F(1), -eps),
        }


class TestDirections:
    def test_axis_pairs_survive_m1(self):
        ds = sphere_directions(m=1, d=3, seed=0)
        assert ds.pair_count >= 3
        assert verify_directions(ds).passed

    def test_antipodal_closure(self):
        ds = sphere_directions(m=4, d=3, seed=1, pairs=6)
        alldirs = ds.all_directions()
        assert len(alldirs) == 12
        for c in ds.centers:
            assert tuple(-x for x in c) in alldirs

    def test_requested_pairs_satisfied_or_error(self):
        ds = sphere_directions(m=4, d=3, seed=2, pairs=8)
        assert ds.pair_count == 8
        with pytest.raises(ValueError):
            sphere_directions(m=1, d=3, seed=2, pairs=500, proposal_budget=600)

    def test_growth_with_m(self):
        k4 = sphere_directions(m=4, d=3, seed=3, proposal_budget=400).pair_count
        assert 4 <= k4 <= 200

    def test_inv_sqrt_floor(self):
        q = F(7, 3)
        r = inv_sqrt_floor(q)
        assert r * r * q <= 1
        assert (r + F(1, 2**20)) ** 2 * q > 1


SYM_PLANE = [pt(1, 0, 0), pt(0, 1, 0), pt(-1, -1, 0)]


class TestDiff:
    def test_symmetric_set_balances(self):
        points = SYM_PLANE + [pt(0, 0, 1), pt(0, 0, -1), pt(2, 3, 5), pt(-2, -3, -5)]
        assert diff_of_hyperplane(points, (0, 1, 2)) == 0

    def test_single_point_above(self):
        points = SYM_PLANE + [pt(0, 0, 5)]
        assert diff_of_hyperplane(points, (0, 1, 2)) == 1

    def test_degenerate_rejected(self):
        points = [pt(0, 0, 0), pt(1, 0, 0), pt(2, 0, 0), pt(0, 0, 3)]
        with pytest.raises(ValueError):
            diff_of_hyperplane(points, (0, 1, 2))

    def test_vertical_rejected(self):
        points = [pt(0, 0, 0), pt(1, 0, 0), pt(0, 0, 1), pt(5, 5, 5)]
        with pytest.raises(ValueError):
            diff_of_hyperplane(points, (0, 1, 2))


class TestAssembly:
    def test_counts(self, desk_assembly):
        assert desk_assembly.count == 4 * 12  # 2 A-blocks + 2 B-blocks, 2m each

    def test_candidate_family_size(self, desk_assembly):
        # A-blocks * pairs-per-A * C(#B, d-2) * (2m)**(d-2)
        assert len(desk_assembly.candidate_tuples()) == 2 * 5 * 2 * 12

    def test_all_diffs_single_unit(self, desk_assembly):
        diffs = {
            diff_of_hyperplane(desk_assembly.points, tup)
            for tup in desk_assembly.candidate_tuples()
        }
        assert diffs <= {-1, 1}

    def test_parity_fix_certifies_majority(self, desk_assembly):
        fixed, report = parity_fix(desk_assembly)
        assert report.passed, report.violations
        assert report.details["apex_points"] == 1
        assert (fixed.count + 3) % 2 == 0
        assert len(fixed.retained_candidates) == report.details["retained"] > 0

    def test_assembly_envelope(self, desk_assembly):
        fixed, _ = parity_fix(desk_assembly)
        report = verify_assembly(fixed)
        assert report.passed
        assert report.details["max_sq_dist"] <= 16
