"""labellings.py のテスト"""

from fractions import Fraction
from math import comb

import pytest

from bm_poisson.cones import ConeDescriptor, interval_count, rho_schedule
from bm_poisson.errors import InfeasibleError, PartitionError
from bm_poisson.labellings import (
    count_labellings,
    count_record,
    count_sequences_naive,
    v_ratio,
    v_ratio_series,
)
from bm_poisson.moments import V_of
from bm_poisson.partitions import (
    Partition,
    enumerate_pair,
    enumerate_pair_inner_singleton,
)

NESTED = Partition.parse("{{1,4},{2,3}}")
SIDE_BY_SIDE = Partition.parse("{{1,2},{3,4}}")


class TestCountLabellings:
    """入れ子森による数え上げのテスト"""

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_monotone_nested(self, monotone, n):
        """orthant:1 で入れ子ペアは n(n-1)/2（strict）と n(n+1)/2（nonstrict）"""
        assert count_labellings(NESTED, monotone, (n,), "strict") == n * (n - 1) // 2
        assert count_labellings(NESTED, monotone, (n,), "nonstrict") == n * (n + 1) // 2

    def test_independent_roots(self, monotone):
        """並んだペアのラベルは独立"""
        assert count_labellings(SIDE_BY_SIDE, monotone, (4,)) == 16

    def test_singletons_follow_their_pair(self, monotone):
        """内側シングルトンは自由度を持たない"""
        partition = Partition.parse("{{1,4},{2},{3}}")
        assert count_labellings(partition, monotone, (5,)) == 5

    def test_three_levels(self, monotone):
        partition = Partition.parse("{{1,6},{2,5},{3,4}}")
        assert count_labellings(partition, monotone, (4,), "strict") == 4

    def test_planar(self, planar):
        """2x2 の格子で ξ ≺ ζ は 5 組、ξ ⪯ ζ は 9 組"""
        assert count_labellings(NESTED, planar, (2, 2), "strict") == 5
        assert count_labellings(NESTED, planar, (2, 2), "nonstrict") == 9

    def test_invalid_partition(self, monotone):
        with pytest.raises(PartitionError):
            count_labellings(Partition.parse("{{1},{2,3}}"), monotone, (3,))

    def test_invalid_mode(self, monotone):
        with pytest.raises(ValueError):
            count_labellings(NESTED, monotone, (3,), "loose")


class TestNaiveSequences:
    """列の総当たりとの照合"""

    @pytest.mark.parametrize("p", [2, 3, 4, 5])
    def test_matches_forest_count(self, monotone, p):
        """総当たり = 入れ子森（nonstrict）"""
        for partition in enumerate_pair_inner_singleton(p):
            for n in (1, 2, 3):
                naive = count_sequences_naive(partition, monotone, (n,))
                assert naive == count_labellings(partition, monotone, (n,), "nonstrict")

    def test_matches_forest_count_planar(self, planar):
        for partition in enumerate_pair_inner_singleton(4):
            assert count_sequences_naive(
                partition, planar, (2, 2), "strict"
            ) == count_labellings(partition, planar, (2, 2), "strict")

    @pytest.mark.parametrize("rho", [(1, 1), (1, 2), (2, 1), (2, 2)])
    @pytest.mark.parametrize("mode", ["strict", "nonstrict"])
    def test_matches_forest_count_below_two_two(self, planar, rho, mode):
        """orthant:2 の ρ ⪯ (2,2) で p ≤ 5 の全分割が一致"""
        for p in range(2, 6):
            for partition in enumerate_pair_inner_singleton(p):
                assert count_sequences_naive(
                    partition, planar, rho, mode
                ) == count_labellings(partition, planar, rho, mode)

    def test_infeasible(self, monotone):
        """上限を超える総当たりは拒否"""
        with pytest.raises(InfeasibleError) as excinfo:
            count_sequences_naive(NESTED, monotone, (3,), max_sequences=10)
        assert excinfo.value.estimate == 81
        assert excinfo.value.cap == 10


class TestCountRecord:
    """CountRecord のテスト"""

    def test_record(self, monotone):
        record = count_record(NESTED, monotone, (4,), naive=True)
        assert record.count_strict == 6
        assert record.count_nonstrict == 10
        assert record.count_sequences == 10
        assert record.normalized_ratio == Fraction(3, 8)

    def test_to_row(self, monotone):
        row = count_record(NESTED, monotone, (4,)).to_row()
        assert row == {
            "partition": "{{1,4},{2,3}}",
            "cone": "orthant:1",
            "rho": "4",
            "nonstrict": 10,
            "strict": 6,
            "naive": "",
            "volume": "4",
            "ratio": "3/8",
        }


class TestVRatio:
    """正規化比のテスト"""

    def test_v_ratio(self, monotone):
        """(n-1)/(2n)"""
        assert v_ratio(NESTED, monotone, (4,)) == Fraction(3, 8)

    def test_singletons_are_reduced(self, monotone):
        partition = Partition.parse("{{1,6},{2},{3,5},{4}}")
        assert v_ratio(partition, monotone, (4,)) == Fraction(3, 8)

    def test_series(self, monotone):
        assert v_ratio_series(NESTED, monotone, 3) == [
            ((1,), Fraction(0)),
            ((2,), Fraction(1, 4)),
            ((3,), Fraction(1, 3)),
        ]

    def test_float_volume(self):
        """lorentz:2 の体積は実数"""
        cone = ConeDescriptor("lorentz", 2)
        value = v_ratio(SIDE_BY_SIDE, cone, (2, 0, 0))
        assert isinstance(value, float)
        assert value > 0

    def test_nested_at_two_hundred(self, monotone):
        """ρ = 200 で 199/400、1/2 との差は 0.003 未満"""
        value = v_ratio(NESTED, monotone, (200,))
        assert value == Fraction(199, 400)
        assert abs(value - Fraction(1, 2)) < Fraction(3, 1000)

    def test_within_five_percent_monotone(self, monotone):
        """orthant:1, ρ = 100 で b ≤ 3 の全ペア分割が V の 5% 以内"""
        for p in (2, 4, 6):
            for partition in enumerate_pair(p):
                target = V_of(partition, monotone)
                value = v_ratio(partition, monotone, (100,))
                assert abs(value - target) < Fraction(5, 100) * target, partition

    @pytest.mark.parametrize(
        "cone,rho,nested_count",
        [
            ("orthant:2", (50, 50), 1275**2 - 50**2),
            ("orthant:3", (70, 70, 70), 2485**3 - 70**3),
            ("lorentz:1", (160, 0), 42_495_920),
        ],
    )
    def test_within_five_percent_two_blocks(self, cone, rho, nested_count):
        """b ≤ 2 のペア分割が V の 5% 以内（入れ子ペアの数は閉じた式）"""
        descriptor = ConeDescriptor.parse(cone)
        assert count_labellings(NESTED, descriptor, rho, "strict") == nested_count
        for p in (2, 4):
            for partition in enumerate_pair(p):
                target = V_of(partition, descriptor)
                value = v_ratio(partition, descriptor, rho)
                assert abs(value - target) < Fraction(5, 100) * target, partition

    @pytest.mark.parametrize("n", [4, 8, 12])
    def test_three_level_chain_planar(self, planar, n):
        """orthant:2 の 3 段の鎖は C(n+2,3)² - 2C(n+1,2)² + n²"""
        chain = Partition.parse("{{1,6},{2,5},{3,4}}")
        expected = comb(n + 2, 3) ** 2 - 2 * comb(n + 1, 2) ** 2 + n**2
        assert count_labellings(chain, planar, (n, n), "strict") == expected


class TestLabellingInvariants:
    """ラベル付けの数の構造的な性質のテスト"""

    @pytest.mark.parametrize("cone", ["orthant:1", "orthant:2", "lorentz:1"])
    @pytest.mark.parametrize("mode", ["strict", "nonstrict"])
    def test_monotone_along_schedule(self, cone, mode):
        """ρ 列に沿って数は減らない"""
        descriptor = ConeDescriptor.parse(cone)
        schedule = rho_schedule(descriptor, 5)
        for p in range(2, 6):
            for partition in enumerate_pair_inner_singleton(p):
                counts = [
                    count_labellings(partition, descriptor, rho, mode)
                    for rho in schedule
                ]
                assert counts == sorted(counts), partition

    @pytest.mark.parametrize(
        "text", ["{{1,4},{2,3}}", "{{1,6},{2,5},{3,4}}", "{{1,6},{2,3},{4,5}}"]
    )
    def test_strict_gap_shrinks(self, monotone, text):
        """(nonstrict - strict) / nonstrict は ρ とともに減少"""
        partition = Partition.parse(text)
        gaps = []
        for n in range(3, 13):
            strict = count_labellings(partition, monotone, (n,), "strict")
            nonstrict = count_labellings(partition, monotone, (n,), "nonstrict")
            gaps.append(Fraction(nonstrict - strict, nonstrict))
        assert all(b < a for a, b in zip(gaps, gaps[1:], strict=False))

    @pytest.mark.parametrize(
        "cone,rho", [("orthant:1", (5,)), ("orthant:2", (3, 2)), ("lorentz:1", (4, 0))]
    )
    def test_disjoint_roots_multiply(self, cone, rho):
        """並んだ根の数は積で、入れ子のない分割では strict = nonstrict"""
        descriptor = ConeDescriptor.parse(cone)
        size = interval_count(descriptor, rho)
        flat = Partition.parse("{{1,2},{3,4},{5,6}}")
        mixed = Partition.parse("{{1,2},{3,6},{4,5}}")
        for mode in ("strict", "nonstrict"):
            assert count_labellings(flat, descriptor, rho, mode) == size**3
            assert count_labellings(mixed, descriptor, rho, mode) == (
                size * count_labellings(NESTED, descriptor, rho, mode)
            )
