import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tricount.counting import (
    CountCache,
    CountingError,
    ModulusTooSmall,
    ResidueVector,
    StateBudgetExceeded,
    rectangle_count_bound,
    capacity,
    capacity_extrapolate,
    convexity_check,
    count_rectangle,
    count_rectangle_residues,
    count_shape,
    crt_reconstruct,
    default_primes,
    subshape_expansion,
)
from tricount.geometry import ShapeProfile, brute_force_count, rectangle, unit_strip_shape


class TestCountRectangle:
    def test_empty_rectangle_convention(self):
        assert count_rectangle(3, 0) == 1

    def test_one_column_binomials(self):
        for n in range(1, 11):
            assert count_rectangle(1, n) == math.comb(2 * n, n)

    def test_table_values_small(self):
        assert count_rectangle(5, 2) == 182132
        assert count_rectangle(6, 2) == 2801708
        assert count_rectangle(5, 3) == 182881520

    def test_literal_orientation_symmetry(self):
        for m, n in [(2, 3), (2, 4), (3, 4)]:
            a = count_rectangle(m, n, orientation="literal")
            b = count_rectangle(n, m, orientation="literal")
            assert a == b

    def test_oracle_equivalence_small(self):
        for m, n in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (1, 6), (6, 1)]:
            assert count_rectangle(m, n) == brute_force_count(rectangle(m, n))

    def test_monotone_in_n(self):
        counts = [count_rectangle(3, n) for n in range(1, 5)]
        assert all(b > a for a, b in zip(counts, counts[1:]))

    def test_exponent_bound(self):
        for m, n in [(2, 2), (3, 3), (5, 2)]:
            assert math.log2(count_rectangle(m, n)) < 3 * m * n
            assert count_rectangle(m, n) < rectangle_count_bound(m, n)

    def test_invalid_args(self):
        with pytest.raises(CountingError):
            count_rectangle(0, 3)

    def test_state_budget(self):
        with pytest.raises(StateBudgetExceeded):
            count_rectangle(4, 4, max_states=10)


class TestShapeCounts:
    def test_fstar_values_all_positive(self):
        # every admissible shape admits at least one triangulation
        from tricount.counting import profile_count_table
        table = profile_count_table(3, 2)
        assert all(v >= 1 for v in table.entries.values())
        assert len(table) == sum(table.layer_histogram.values()) + 1  # + degenerate
        assert min(table.layer_histogram) >= 1

    def test_width2_profile_counts(self):
        # counts of the three one-lower profiles of the 2 x 1 rectangle,
        # frozen from the brute-force oracle
        assert count_shape(ShapeProfile(2, ((0, 0), (1, 1), (2, 1)))) == 3
        assert count_shape(ShapeProfile(2, ((0, 1), (1, 0), (2, 1)))) == 1
        assert count_shape(ShapeProfile(2, ((0, 1), (1, 1), (2, 0)))) == 3

    def test_wide_segment_profile(self):
        shape = ShapeProfile(2, ((0, 0), (2, 1)))
        assert count_shape(shape) == 1


class TestSubshapeExpansion:
    def test_unit_square(self):
        terms = subshape_expansion(unit_strip_shape(1, 1))
        assert [sign for sign, _ in terms] == [1, 1]
        ceilings = {s.ceiling for _, s in terms}
        assert ceilings == {((0, 0), (1, 1)), ((0, 1), (1, 0))}

    def test_degenerate(self):
        assert subshape_expansion(ShapeProfile(2, ((0, 0), (2, 0)))) == []

    def test_2x1_inclusion_exclusion(self):
        shape = unit_strip_shape(2, 1)
        terms = subshape_expansion(shape)
        by_ceiling = {}
        for sign, sub in terms:
            by_ceiling[sub.ceiling] = by_ceiling.get(sub.ceiling, 0) + sign
        assert by_ceiling == {
            ((0, 0), (1, 1), (2, 1)): 1,
            ((0, 1), (1, 0), (2, 1)): 1,
            ((0, 1), (1, 1), (2, 0)): 1,
            ((0, 0), (1, 1), (2, 0)): -1,
        }
        # summing f* over the terms reproduces the full count
        total = sum(sign * count_shape(sub) for sign, sub in terms)
        assert total == count_rectangle(2, 1) == 6
        assert total == brute_force_count(rectangle(2, 1))

    def test_expansion_sums_to_count(self):
        terms = subshape_expansion(unit_strip_shape(3, 1))
        assert any(sign == -1 for sign, _ in terms)
        total = sum(sign * count_shape(sub) for sign, sub in terms)
        assert total == count_rectangle(3, 1) == 20

    @given(st.lists(st.integers(min_value=0, max_value=3), min_size=4, max_size=4))
    def test_span_sweep_matches_geometric_disjointness(self, heights):
        # the sweep enumerates tile sets by span disjointness; cross-check
        # against explicit pairwise interior-overlap tests on the triangles
        from itertools import combinations

        from tricount.geometry import (_triangles_overlap,
                                       enumerate_maximal_tiles, merge_collinear,
                                       remove_tiles)

        bps = merge_collinear(tuple(enumerate(heights)))
        shape = ShapeProfile(3, bps)
        tiles = enumerate_maximal_tiles(shape)

        def tiles_overlap(t1, t2):
            return any(_triangles_overlap(a, b)
                       for a in t1.triangles for b in t2.triangles)

        expected = {}
        for r in range(1, len(tiles) + 1):
            for combo in combinations(tiles, r):
                if any(tiles_overlap(a, b) for a, b in combinations(combo, 2)):
                    continue
                key = remove_tiles(shape, combo).ceiling
                sign = 1 if r % 2 else -1
                expected[key] = expected.get(key, 0) + sign

        got = {}
        for sign, sub in subshape_expansion(shape):
            got[sub.ceiling] = got.get(sub.ceiling, 0) + sign
        assert got == {k: v for k, v in expected.items() if v}


class TestCRT:
    def test_textbook(self):
        assert crt_reconstruct([2, 3], [3, 5]) == 8

    def test_single_prime_reduction(self):
        assert 182132 % 97 == 63
        assert crt_reconstruct([63], [97]) == 63

    def test_identity_when_prime_dominates(self):
        # a single prime larger than the value reconstructs the value itself
        p = default_primes(1)[0]
        assert crt_reconstruct([182132 % p], [p]) == 182132

    def test_duplicate_primes_rejected(self):
        with pytest.raises(CountingError):
            crt_reconstruct([1, 2], [7, 7])

    def test_bound_check(self):
        with pytest.raises(ModulusTooSmall):
            crt_reconstruct([2, 3], [3, 5], bound=100)

    @given(st.integers(min_value=0, max_value=10**12))
    def test_roundtrip(self, value):
        primes = default_primes(2)
        rv = ResidueVector(tuple(primes), tuple(value % p for p in primes))
        assert rv.reconstruct() == value

    def test_residue_vector_validation(self):
        with pytest.raises(CountingError):
            ResidueVector((7,), (9,))


class TestModularMode:
    def test_matches_bigint(self):
        primes = default_primes(3)
        for m, n in [(2, 3), (3, 3), (5, 2)]:
            assert count_rectangle(m, n, mode="modular", primes=primes) == \
                count_rectangle(m, n)

    def test_auto_primes(self):
        assert count_rectangle(4, 2, mode="modular") == count_rectangle(4, 2)

    def test_too_few_primes_rejected(self):
        with pytest.raises(ModulusTooSmall):
            count_rectangle(5, 3, mode="modular", primes=[101, 103])

    def test_thread_count_does_not_change_result(self):
        primes = default_primes(4)
        r1 = count_rectangle(4, 3, mode="modular", primes=primes, threads=1)
        r4 = count_rectangle(4, 3, mode="modular", primes=primes, threads=4)
        assert r1 == r4 == count_rectangle(4, 3)

    def test_residue_vector_api(self):
        primes = default_primes(3)
        rv = count_rectangle_residues(3, 2, primes)
        assert rv.reconstruct() == 852


class TestCapacity:
    def test_unit_square(self):
        assert capacity(1, 1).capacity == 1.0

    def test_table_value(self):
        rec = capacity(5, 2)
        assert rec.count == 182132
        assert abs(rec.capacity - 1.7474) < 1.2e-4
        assert math.floor(rec.capacity * 1e4) / 1e4 == 1.7474

    def test_capacity_formula(self):
        rec = capacity(3, 2)
        assert rec.capacity == pytest.approx(math.log2(852) / 6, rel=1e-12)


class TestConvexity:
    def test_one_column(self):
        assert all(convexity_check(1, 10))

    def test_first_inequality(self):
        # f(1,0) f(1,2) = 6 >= f(1,1)^2 = 4
        assert convexity_check(1, 2, counts=[1, 2, 6]) == [True]

    def test_table_row(self):
        assert 252 * 182881520 >= 182132 ** 2
        assert all(convexity_check(5, 2, counts=[1, 252, 182132, 182881520]))


class TestExtrapolation:
    def test_table_arithmetic(self):
        got = capacity_extrapolate(5, 2, count_n=182132, count_n1=182881520)
        expected = 3 * math.log2(182881520) / 15 - 2 * math.log2(182132) / 10
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(1.99436, abs=5e-4)

    def test_one_column_limit(self):
        # the lower bound creeps up to the strip constant 2
        vals = [capacity_extrapolate(1, n) for n in (10, 40, 100)]
        assert vals == sorted(vals)
        assert abs(vals[-1] - 2.0) < 0.02


class TestCache:
    def test_roundtrip(self, tmp_path):
        cache = CountCache(tmp_path)
        value = count_rectangle(3, 2, cache=cache)
        assert cache.lookup(3, 2) == value == 852
        again = count_rectangle(3, 2, cache=cache)
        assert again == value
        assert cache.records() == [(3, 2, 852)]

    def test_no_duplicate_lines(self, tmp_path):
        cache = CountCache(tmp_path)
        cache.append(2, 2, 64)
        cache.append(2, 2, 64)
        assert cache.records() == [(2, 2, 64)]
