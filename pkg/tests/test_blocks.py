"""Block amplification: quantization, flattening, spokes, padding."""

from fractions import Fraction as F

import pytest

from halving_lab.artifact import x_gap_bounds
from halving_lab.blocks import (
    BlockParameters,
    assemble_blocks,
    default_delta,
    flatten,
    pad_to_count,
    quantize,
    snap_coordinate,
    verify_blocks,
    verify_perturbation_tolerance,
)
from halving_lab.oracle import count_halving_lines_naive, is_halving
from halving_lab.recursive import build, finalize_lemma1


@pytest.fixture(scope="module")
def base6():
    artifact, report = finalize_lemma1(build(1, 1))
    assert report.passed
    return artifact


class TestSnapFormula:
    def test_even_power_half(self):
        # 6**9 is even, so x=1/2 sits exactly on the coarse grid
        assert snap_coordinate(F(1, 2), 1, 6, 9) == F(1, 2) + F(1, 6**10)

    def test_hand_expansion(self):
        assert snap_coordinate(F(3, 4), 2, 2, 2) == 1

    def test_grid_multiple_moves_by_index_only(self):
        x = F(7, 6**9)
        assert snap_coordinate(x, 3, 6, 9) == x + F(3, 6**10)


class TestQuantize:
    def test_moves_within_tolerance(self, base6):
        snapped, report = quantize(list(base6.points), 6, 9)
        assert report.passed
        assert report.details["max_move"] <= F(1, 6**9)

    def test_gaps_and_range(self, base6):
        snapped, report = quantize(list(base6.points), 6, 9)
        assert report.details["min_gap"] >= F(1, 6**10)
        assert all(1 <= x <= 3 for x, _ in snapped)

    def test_small_exponent_rejected(self, base6):
        with pytest.raises(ValueError, match="too small"):
            quantize(list(base6.points), 6, 2)

    def test_halving_family_survives(self, base6):
        snapped, _ = quantize(list(base6.points), 6, 9)
        for i, j in base6.claimed_halving:
            ok, _sides = is_halving([snapped[i], snapped[j]], snapped)
            assert ok


class TestFlatten:
    def test_direct(self):
        assert flatten([(F(2), F(1))], F(1, 10)) == [(F(2), F(1, 100))]

    def test_identity_delta(self):
        pts = [(F(1), F(3)), (F(-2), F(5))]
        assert flatten(pts, F(1)) == pts

    def test_halving_count_invariant(self, base6):
        before = count_halving_lines_naive(base6.points).halving_count
        after = count_halving_lines_naive(flatten(list(base6.points), F(1, 7))).halving_count
        assert before == after

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            flatten([(F(0), F(0))], F(0))


class TestAssembly:
    @pytest.mark.parametrize("n_blocks,points,family", [(1, 18, 15), (2, 30, 25), (3, 42, 35)])
    def test_counts_and_certification(self, base6, n_blocks, points, family):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=n_blocks))
        art = bs.to_artifact()
        assert art.count == points
        assert len(art.claimed_halving) == family
        report = verify_blocks(bs)
        assert report.passed, report.violations

    def test_zeroth_positive_block_is_unrotated(self, base6):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=1))
        snapped, _ = quantize(list(base6.points), 6, 9)
        flat = flatten(snapped, bs.delta)
        expected = [(x * bs.scale, y * bs.scale) for x, y in flat]
        assert bs.positive_blocks[0] == expected

    def test_min_gap_bound_exact(self, base6):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=2))
        report = verify_blocks(bs)
        points = bs.to_artifact().points
        # independent rescan of the minimum x-difference
        xs = sorted(x for x, _ in points)
        rescan = min(b - a for a, b in zip(xs, xs[1:]))
        assert report.details["min_dx"] == rescan
        assert rescan >= F(1, 12 * 6 * 2)

    def test_default_delta_is_small_power_of_two(self):
        d = default_delta(6, 1, 9)
        assert d.numerator == 1
        assert d.denominator & (d.denominator - 1) == 0
        assert d <= F(1, 10 * 6**5)

    def test_base_without_claims_rejected(self, base6):
        from dataclasses import replace

        bald = replace(base6, claimed_halving=[])
        with pytest.raises(ValueError):
            BlockParameters(base=bald, blocks=1)


class TestPadding:
    def test_identity(self, base6):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=1))
        art = bs.to_artifact()
        padded, report = pad_to_count(art, 18)
        assert padded.count == 18 and report.passed

    def test_pad_to_twenty_keeps_family(self, base6):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=1))
        padded, report = pad_to_count(bs.to_artifact(), 20)
        assert padded.count == 20
        assert report.passed
        for i, j in padded.claimed_halving:
            ok, _ = is_halving([padded.points[i], padded.points[j]], padded.points)
            assert ok

    def test_odd_target_rejected(self, base6):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=1))
        with pytest.raises(ValueError):
            pad_to_count(bs.to_artifact(), 19)

    def test_shrink_rejected(self, base6):
        bs = assemble_blocks(BlockParameters(base=base6, blocks=1))
        with pytest.raises(ValueError):
            pad_to_count(bs.to_artifact(), 16)


class TestPerturbation:
    def test_level_one_robust(self):
        g = build(1, 1)
        report = verify_perturbation_tolerance(g, F(1, 6**9), trials=10, seed=3)
        assert report.passed and report.checked == 50

    def test_zero_magnitude_trivial(self):
        g = build(1, 1)
        report = verify_perturbation_tolerance(g, F(0), trials=2, seed=0)
        assert report.passed

    def test_magnitude_above_tolerance_rejected(self):
        g = build(1, 1)
        with pytest.raises(ValueError):
            verify_perturbation_tolerance(g, F(2, 6**9), trials=1, seed=0)

    def test_non_diagonal_rejected(self):
        g = build(2, 1)
        with pytest.raises(ValueError):
            verify_perturbation_tolerance(g, F(1, 6**9), trials=1, seed=0)
