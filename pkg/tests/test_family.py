
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from downmatch.family import (
    AmbientSizeError,
    Family,
    WeightFn,
    complement_family,
    covering_number,
    degree,
    down_closure,
    elements,
    fmt_set,
    has_element_bits,
    is_cross_intersecting,
    is_cross_iu,
    is_down_set,
    is_intersecting,
    is_iu,
    is_t_intersecting,
    is_ts_family,
    is_union,
    is_up_set,
    link_and_deletion,
    max_degree,
    minimum_covers,
    set_mask,
    up_closure,
)


def fam(n, *sets):
    return Family.from_sets(n, sets)


def naive_down(F):
    out = set()
    for x in F:
        sub = x
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & x
    return Family(F.n, out)


def naive_up(F):
    full = (1 << F.n) - 1
    return Family(F.n, {y for y in range(full + 1) for x in F if x & y == x})


families = st.integers(0, 4).flatmap(
    lambda n: st.builds(lambda ms: Family(n, ms), st.sets(st.integers(0, (1 << n) - 1)))
)


class TestMasks:
    def test_set_mask_roundtrip(self):
        assert set_mask([1, 3]) == 0b101
        assert elements(0b101) == [1, 3]
        assert fmt_set(0) == "{}"
        assert fmt_set(0b11) == "{1,2}"

    def test_has_element_bits(self):
        for n in range(5):
            for i in range(n):
                want = sum(1 << x for x in range(1 << n) if x >> i & 1)
                assert has_element_bits(n, i) == want


class TestFamily:
    def test_dense_and_sparse_agree(self):
        F = fam(3, [1], [2, 3], [])
        assert F.members == (0, 1, 6)
        assert Family.from_bits(3, F.bits) == F
        assert 6 in F and 2 not in F

    def test_members_must_fit(self):
        with pytest.raises(ValueError):
            Family(2, [4])

    def test_mixed_n_rejected(self):
        with pytest.raises(AmbientSizeError):
            fam(2, [1]).union(fam(3, [1]))

    def test_power_set_and_star(self):
        assert len(Family.power_set(4)) == 16
        star = Family.star(3, 1)
        assert len(star) == 4 and all(x & 1 for x in star)

    @settings(max_examples=200)
    @given(families)
    def test_closures_match_naive(self, F):
        assert down_closure(F) == naive_down(F)
        assert up_closure(F) == naive_up(F)
        assert is_down_set(down_closure(F)) and is_up_set(up_closure(F))

    @settings(max_examples=200)
    @given(families)
    def test_complement_swaps_down_and_up(self, F):
        D = down_closure(F)
        assert is_up_set(complement_family(D))
        assert complement_family(complement_family(F)) == F


class TestPredicates:
    def test_empty_and_singleton_are_vacuous(self):
        assert is_intersecting(Family(3))
        assert is_cross_intersecting(Family(3), fam(3, []))
        assert is_iu(fam(3, [1]))

    def test_empty_set_is_not_intersecting_with_itself(self):
        # a pair (A, A) counts, so {} alone is not intersecting
        assert not is_intersecting(fam(2, [], [1]))

    def test_star_is_intersecting_not_union(self):
        star = Family.star(3, 1)
        assert is_intersecting(star)
        assert not is_union(star)  # contains [3] with itself
        assert is_intersecting(star.without(0b111)) and not is_union(star.without(0b111))

    def test_iu_example(self):
        F = fam(3, [1], [1, 2])
        assert is_iu(F)
        assert is_cross_iu(F, F)

    def test_t_intersecting_and_ts(self):
        F = fam(4, [1, 2], [1, 2, 3], [1, 2, 4])
        assert is_t_intersecting(F, 2)
        assert not is_t_intersecting(F, 3)
        assert not is_ts_family(F, 2, 1)  # {1,2,3} u {1,2,4} = [4]
        assert is_ts_family(fam(4, [1, 2], [1, 2, 3]), 2, 1)


class TestCovers:
    def test_covering_number(self):
        assert covering_number(Family.star(3, 2)) == 1
        tri = fam(3, [1, 2], [2, 3], [1, 3])
        assert covering_number(tri) == 2
        assert sorted(minimum_covers(tri)) == [0b011, 0b101, 0b110]
        assert covering_number(Family(3)) == 0

    def test_covering_number_empty_member(self):
        with pytest.raises(ValueError, match="empty set"):
            covering_number(fam(2, []))

    def test_degree_and_link(self):
        D = down_closure(fam(3, [1, 2], [3]))
        assert [degree(D, i) for i in range(3)] == [2, 2, 1]
        assert max_degree(D) == 2
        link, dele = link_and_deletion(D, 1)
        assert link == fam(3, [], [2])
        assert dele == fam(3, [], [2], [3])

    def test_max_degree_of_cube(self):
        for n in range(1, 5):
            assert max_degree(Family.power_set(n)) == 1 << (n - 1)


class TestWeightFn:
    def test_validation(self):
        with pytest.raises(ValueError):
            WeightFn(2, [1, 2, 3])
        with pytest.raises(ValueError):
            WeightFn(1, [1, -1])
        with pytest.raises(ValueError):
            WeightFn(1, [1 << 63, 1 << 63])

    def test_monotone(self):
        assert WeightFn(2, [3, 2, 2, 1]).is_monotone()
        w = WeightFn(2, [1, 2, 0, 0])
        assert not w.is_monotone()
        assert w.monotonicity_violation() == (1, 0)  # {1} outweighs {}

    def test_characteristic_of_down_set_is_monotone(self):
        for bits in range(1 << 8):
            F = Family.from_bits(3, bits)
            assert WeightFn.characteristic(F).is_monotone() == is_down_set(F)


def test_down_set_test_matches_definition():
    for bits in range(1 << 8):
        F = Family.from_bits(3, bits)
        want = all(
            (x & ~(1 << i)) in F for x in F for i in range(3) if x >> i & 1
        )
        assert is_down_set(F) == want
