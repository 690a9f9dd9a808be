import math

import numpy as np
import pytest

from xxchain import entanglement as ent
from xxchain import groundstate as gs
from xxchain.errors import BasisMismatchError, CapacityError, ValidationError


def brute_rank_high_precision(block, digits=60):
    """Independent rank oracle: singular values at high fixed precision with
    a crude mid-spectrum cut; usable at small sizes where the true spectrum
    has a clean break."""
    import mpmath

    rows, cols = block.shape
    with mpmath.workdps(digits):
        a = mpmath.matrix(rows, cols)
        for i in range(rows):
            for j in range(cols):
                ks = [*map(int, block.row_subsets[i]), *map(int, block.col_subsets[j])]
                prod = mpmath.mpf(1)
                for u in range(len(ks)):
                    for v in range(u + 1, len(ks)):
                        prod *= mpmath.sin((ks[u] - ks[v]) * mpmath.pi / block.N)
                a[i, j] = prod
        s = sorted((float(x) for x in mpmath.svd_r(a, compute_uv=False)), reverse=True)
    return sum(1 for x in s if x > 1e-40 * s[0])


class TestBipartition:
    def test_valid_range(self):
        with pytest.raises(ValidationError):
            ent.Bipartition(4, 0)
        with pytest.raises(ValidationError):
            ent.Bipartition(4, 4)

    def test_half_default(self):
        assert ent.Bipartition.half(9).M == 4


class TestBuildBlock:
    def test_n4_cross_block(self):
        blk = ent.build_block(4, 2, 2, 1)
        expected = np.array(
            [
                [math.sin(-2 * math.pi / 4), math.sin(-3 * math.pi / 4)],
                [math.sin(-math.pi / 4), math.sin(-2 * math.pi / 4)],
            ]
        )
        assert blk.entries == pytest.approx(expected, rel=1e-15)

    def test_left_empty_is_single_row(self):
        blk = ent.build_block(8, 4, 2, 0)
        assert blk.shape == (1, math.comb(4, 2))

    def test_right_empty_is_single_column(self):
        blk = ent.build_block(8, 4, 2, 2)
        assert blk.shape == (math.comb(4, 2), 1)

    @pytest.mark.parametrize("N", range(4, 17, 2))
    def test_entries_match_state_amplitudes(self, N):
        # bit-for-bit agreement with the direct amplitude path
        M = N // 2
        for r in range(N // 2 + 1):
            state = gs.build_state(N, r)
            for l in range(r + 1):
                if l > M or r - l > N - M:
                    continue
                blk = ent.build_block(N, M, r, l)
                for i in range(blk.shape[0]):
                    for j in range(blk.shape[1]):
                        subset = (*blk.row_subsets[i], *blk.col_subsets[j])
                        assert blk.entries[i, j] == state.amplitude_of(subset)

    def test_all_entries_nonzero(self):
        for l in range(4):
            assert np.all(ent.build_block(12, 6, 3, min(l, 3)).entries != 0)

    def test_dimension_cap(self):
        with pytest.raises(CapacityError):
            ent.build_block(16, 8, 8, 4, cap=100)

    def test_invalid_block_args(self):
        with pytest.raises(ValidationError):
            ent.build_block(8, 4, 2, 3)
        with pytest.raises(ValidationError):
            ent.build_block(8, 7, 3, 0)  # r-l=3 does not fit on the right


class TestNumericalRank:
    def test_worked_example_rank_two(self):
        blk = ent.build_block(8, 4, 2, 1)
        assert ent.numerical_rank(blk).rank == 2

    def test_single_row_and_column_blocks(self):
        assert ent.numerical_rank(ent.build_block(10, 5, 3, 0)).rank == 1
        assert ent.numerical_rank(ent.build_block(10, 5, 3, 3)).rank == 1

    def test_against_high_precision_oracle(self):
        blk = ent.build_block(12, 6, 3, 1)
        assert ent.numerical_rank(blk).rank == 3
        assert brute_rank_high_precision(blk) == 3

    def test_scaling_invariance(self):
        rng = np.random.default_rng(7)
        blk = ent.build_block(10, 5, 3, 1)
        scaled = (
            np.diag(rng.uniform(0.5, 2.0, blk.shape[0]))
            @ blk.entries
            @ np.diag(rng.uniform(0.5, 2.0, blk.shape[1]))
        )
        assert ent.numerical_rank(scaled).rank == ent.numerical_rank(blk).rank

    @pytest.mark.parametrize("N,r", [(10, 3), (12, 4), (14, 5)])
    def test_left_right_symmetry(self, N, r):
        M = N // 2
        for l in range(r + 1):
            a = ent.numerical_rank(ent.build_block(N, M, r, l)).rank
            b = ent.numerical_rank(ent.build_block(N, M, r, r - l)).rank
            assert a == b

    def test_simplified_builder_same_rank(self):
        for (N, r, l) in [(10, 3, 1), (12, 4, 2), (14, 5, 2)]:
            full = ent.numerical_rank(ent.build_block(N, N // 2, r, l)).rank
            cross = ent.numerical_rank(ent.build_block_simplified(N, N // 2, r, l)).rank
            assert full == cross

    def test_extended_precision_agrees(self):
        blk = ent.build_block(10, 5, 3, 1)
        standard = ent.numerical_rank(blk, precision="standard")
        extended = ent.numerical_rank(blk, precision="extended")
        assert standard.rank == extended.rank
        assert extended.precision == "extended"

    def test_tolerance_validation(self):
        blk = ent.build_block(8, 4, 2, 1)
        with pytest.raises(ValidationError):
            ent.numerical_rank(blk, tol=0.0)
        with pytest.raises(ValidationError):
            ent.numerical_rank(blk, tol=2.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValidationError):
            ent.numerical_rank(np.array([[1.0, np.nan], [0.0, 1.0]]))


class TestSchmidtRank:
    def test_polarized_is_product_state(self):
        assert ent.schmidt_rank(8, 4, 0).total_rank == 1

    def test_n10_r3(self):
        report = ent.schmidt_rank(10, 5, 3)
        assert report.block_ranks == [1, 3, 3, 1]
        assert report.total_rank == 8

    def test_n6_r2(self):
        assert ent.schmidt_rank(6, 3, 2).total_rank == 4

    @pytest.mark.parametrize("N,r", [(8, 3), (12, 5), (16, 6)])
    def test_ambient_bounds(self, N, r):
        report = ent.schmidt_rank(N, N // 2, r)
        assert report.total_rank <= 2 ** (N // 2)
        assert report.total_rank <= math.comb(N, r)

    def test_json_schema(self):
        payload = ent.schmidt_rank(10, 5, 2).to_json_dict()
        assert payload["schemaVersion"] == 1
        assert payload["totalRank"] == sum(b["rank"] for b in payload["blocks"])
        assert {"l", "rank", "rows", "cols", "gap", "reliable"} <= set(
            payload["blocks"][0]
        )


class TestSloccVerdict:
    def test_different_ranks(self):
        a = ent.schmidt_rank(8, 4, 0)
        b = ent.schmidt_rank(8, 4, 1)
        verdict = ent.slocc_verdict(a, b)
        assert verdict.verdict == "INEQUIVALENT"
        assert (verdict.rank_a, verdict.rank_b) == (1, 2)

    def test_adjacent_sectors_always_split(self):
        for r in range(4):
            verdict = ent.slocc_verdict(
                ent.schmidt_rank(8, 4, r), ent.schmidt_rank(8, 4, r + 1)
            )
            assert verdict.verdict == "INEQUIVALENT"

    def test_equal_ranks_inconclusive(self):
        report = ent.schmidt_rank(8, 4, 2)
        assert ent.slocc_verdict(report, report).verdict == "INCONCLUSIVE"

    def test_mismatched_bipartitions_rejected(self):
        with pytest.raises(BasisMismatchError):
            ent.slocc_verdict(ent.schmidt_rank(8, 4, 1), ent.schmidt_rank(8, 3, 1))


class TestRowRecurrence:
    @pytest.mark.parametrize("N,M", [(8, 4), (16, 8)])
    def test_residual_tiny(self, N, M):
        check = ent.row_recurrence_check(N, M)
        assert check.passed
        assert check.max_residual < 1e-12

    def test_too_few_rows_rejected(self):
        with pytest.raises(ValidationError):
            ent.row_recurrence_check(6, 2)
