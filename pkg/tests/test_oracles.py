import itertools
import json

import pytest

from conftest import brute_down_sets
from downmatch.family import Family, WeightFn, is_down_set, is_intersecting, is_ts_family
from downmatch.oracles import (
    CapExceeded,
    compatible_subfamilies,
    down_set_bits,
    enumerate_down_sets,
    flow_feasibility,
    hall_violator,
    kneser_bipartite,
    m_table,
    m_value,
    max_bipartite_matching,
    max_subfamily,
    max_subfamily_exhaustive,
    pair_relation,
)


def brute_matching(adj):
    """Largest matching by trying every injective assignment."""
    lefts = list(adj)
    best = 0
    for k in range(len(lefts), 0, -1):
        for combo in itertools.combinations(lefts, k):
            for rights in itertools.product(*(adj[u] for u in combo)):
                if len(set(rights)) == k:
                    return k
    return best


class TestBipartite:
    def test_examples(self):
        assert max_bipartite_matching({0: ["x", "y"], 1: ["x", "y"]})[0] == 2
        assert max_bipartite_matching({0: ["x", "y", "z"]})[0] == 1
        cube = Family.power_set(2)
        assert max_bipartite_matching(kneser_bipartite(cube, cube))[0] == 4

    def test_random_against_brute(self, rng):
        for _ in range(200):
            k = rng.randint(0, 5)
            adj = {u: rng.sample(range(5), rng.randint(0, 3)) for u in range(k)}
            size, m = max_bipartite_matching(adj)
            assert size == brute_matching(adj) == len(m)
            assert len(set(m.values())) == size
            assert all(v in adj[u] for u, v in m.items())

    def test_hall(self):
        assert hall_violator({0: ["x"], 1: ["y"]}) is None
        assert sorted(hall_violator({0: ["x"], 1: ["x"]})) == [0, 1]
        assert sorted(hall_violator({0: ["x"], 1: ["x"]}, exhaustive=True)) == [0, 1]
        one = Family.from_sets(1, [[1]])
        assert hall_violator(kneser_bipartite(one, one), exhaustive=True) == [1]

    def test_hall_random(self, rng):
        for _ in range(200):
            k = rng.randint(1, 5)
            adj = {u: rng.sample(range(4), rng.randint(0, 2)) for u in range(k)}
            S = hall_violator(adj)
            size, _ = max_bipartite_matching(adj)
            assert (S is None) == (size == k)
            if S is not None:
                assert len({v for u in S for v in adj[u]}) < len(S)
                T = hall_violator(adj, exhaustive=True)
                assert len({v for u in T for v in adj[u]}) < len(T)


class TestFlow:
    def test_examples(self):
        single = WeightFn.characteristic(Family.from_sets(1, [[1]]))
        assert not flow_feasibility(single, single)
        assert flow_feasibility(WeightFn.zero(2), WeightFn.zero(2))

    def test_down_set_pairs(self):
        downs = [Family.from_bits(3, b) for b in down_set_bits(3)]
        for F in downs:
            for G in downs:
                if len(F) <= len(G):
                    assert flow_feasibility(WeightFn.characteristic(F), WeightFn.characteristic(G))

    def test_agrees_with_kuhn_on_characteristic_functions(self, rng):
        # for 0/1 weights the flow value is a bipartite matching size
        for _ in range(200):
            n = rng.randint(1, 3)
            F = Family(n, rng.sample(range(1 << n), rng.randint(0, 1 << n)))
            G = Family(n, rng.sample(range(1 << n), rng.randint(0, 1 << n)))
            size, _ = max_bipartite_matching(kneser_bipartite(F, G))
            assert flow_feasibility(WeightFn.characteristic(F), WeightFn.characteristic(G)) == (size == len(F))


class TestDownSets:
    def test_counts_match_brute_force(self):
        for n in range(5):
            assert sorted(down_set_bits(n)) == brute_down_sets(n)

    def test_n5_count_and_validity(self):
        seen = set()
        for bits in down_set_bits(5):
            assert is_down_set(Family.from_bits(5, bits))
            seen.add(bits)
        assert len(seen) == 7581

    def test_n1_listing(self):
        assert [F.members for F in enumerate_down_sets(1)] == [(), (0,), (0, 1)]

    def test_cap(self):
        with pytest.raises(CapExceeded):
            list(enumerate_down_sets(7))


class TestSearch:
    def test_examples(self):
        assert max_subfamily(Family.power_set(3), pair_relation("intersecting", 3)).optimum == 4
        assert max_subfamily(Family.power_set(4), pair_relation("iu", 4)).optimum == 4
        r = max_subfamily(Family.power_set(2), pair_relation("t-intersecting", 2, t=2))
        assert r.optimum == 1 and r.witness == Family.from_sets(2, [[1, 2]])

    @pytest.mark.parametrize("kind", ["intersecting", "union", "iu", "t-intersecting", "ts"])
    def test_matches_exhaustive(self, kind, rng):
        for _ in range(15):
            n = rng.randint(1, 4)
            D = Family(n, rng.sample(range(1 << n), rng.randint(0, min(12, 1 << n))))
            rel = pair_relation(kind, n, t=2, s=1)
            fast = max_subfamily(D, rel)
            slow = max_subfamily_exhaustive(D, rel)
            assert fast.optimum == slow.optimum == len(fast.witness)
            assert fast.witness <= D
            assert all(rel(a, b) for a in fast.witness for b in fast.witness)

    def test_compatible_subfamilies_is_complete(self):
        cube = Family.power_set(3)
        rel = pair_relation("intersecting", 3)
        got = {frozenset(s) for s in compatible_subfamilies(cube, rel)}
        want = {
            frozenset(Family.from_bits(3, b).members)
            for b in range(1 << 8)
            if is_intersecting(Family.from_bits(3, b))
        }
        assert got == want

    def test_cap(self):
        with pytest.raises(CapExceeded):
            max_subfamily(Family.power_set(6), pair_relation("intersecting", 6))


class TestMValues:
    def test_known_columns(self):
        assert [m_value(n, 1) for n in range(1, 6)] == [1, 2, 4, 8, 16]
        assert [m_value(n, 1, 1) for n in range(1, 6)] == [0, 1, 2, 4, 8]
        assert m_value(4, 2) == 5
        for t in range(1, 4):
            for s in range(1, 4):
                if t + s <= 5:
                    assert m_value(t + s, t, s) == 1

    def test_against_brute_force_n3(self):
        for t in range(1, 4):
            for s in (None, 1, 2):
                want = 0
                for b in range(1 << 8):
                    F = Family.from_bits(3, b)
                    ok = is_ts_family(F, t, s) if s else all(
                        bin(a & c).count("1") >= t for a in F for c in F
                    )
                    if ok:
                        want = max(want, len(F))
                assert m_value(3, t, s) == want

    def test_table(self):
        table = m_table(3, 2, 1)
        assert table.m_nt[(3, 1)] == 4 and table.m_nts[(3, 1, 1)] == 2
        tsv = table.to_tsv().splitlines()
        assert tsv[0] == "n\tt\ts\tvalue"
        assert "3\t1\t1\t2" in tsv
        doc = json.loads(table.to_json())
        assert doc["schema"] == "downmatch.m-table/1"
        with pytest.raises(CapExceeded):
            m_table(6, 1, 1)
