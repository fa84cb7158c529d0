import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from blockade.errors import InputError, ParseError, SizeGuardExceeded
from blockade.generate import random_matroid_pair
from blockade.matroids import (
    IntersectionTriple,
    Link,
    TreeOfMatroids,
    UniformMatroid,
    classical_intersection,
    closure,
    dual_rank,
    enumerate_circuits,
    format_tmat,
    is_coindependent,
    is_independent,
    max_common_independent_size,
    minor,
    natural_key,
    ordered,
    parse_tmat,
    rank,
    verify_covering,
    verify_packing,
    verify_triple,
)


def single(r, ground):
    return TreeOfMatroids({"t": UniformMatroid(r, ground)})


def random_tree(rng, max_nodes=4, max_rank=3, max_reals=10):
    """Arbitrary uniform 2-sum tree, loops and coloops allowed."""
    k = rng.randint(1, max_nodes)
    nodes = [f"t{i}" for i in range(k)]
    grounds = {t: [] for t in nodes}
    links = []
    for i in range(1, k):
        p = rng.randrange(i)
        links.append(Link(nodes[p], nodes[i], f"g{i}"))
        grounds[nodes[p]].append(f"g{i}")
        grounds[nodes[i]].append(f"g{i}")
    budget = rng.randint(k, max_reals)
    for j in range(budget):
        grounds[nodes[j % k if j < k else rng.randrange(k)]].append(f"e{j}")
    mats = {t: UniformMatroid(rng.randint(0, min(max_rank, len(g))), g)
            for t, g in grounds.items()}
    return TreeOfMatroids(mats, links)


def subsets(items):
    items = list(items)
    return (frozenset(c) for k in range(len(items) + 1)
            for c in itertools.combinations(items, k))


class TestUniform:
    def test_minor_arithmetic(self):
        u24 = UniformMatroid(2, "abcd")
        assert u24.minor(contract={"a"}) == UniformMatroid(1, "bcd")
        assert UniformMatroid(1, "ab").minor(delete={"a"}) == UniformMatroid(1, "b")
        assert UniformMatroid(1, "abc").minor(contract={"a", "b"}) == UniformMatroid(0, "c")

    def test_dual(self):
        assert UniformMatroid(2, "abc").dual() == UniformMatroid(1, "abc")

    def test_bad_rank(self):
        with pytest.raises(InputError):
            UniformMatroid(3, "ab")

    def test_natural_order(self):
        assert ordered(["e10", "e2", "b", "a1"]) == ["a1", "b", "e2", "e10"]
        assert natural_key("x2") < natural_key("x10")


class TestTreeValidation:
    def test_shared_without_link(self):
        with pytest.raises(InputError):
            TreeOfMatroids({"a": UniformMatroid(1, "xy"), "b": UniformMatroid(1, "yz")})

    def test_cycle(self):
        mats = {"a": UniformMatroid(1, ["p", "q"]), "b": UniformMatroid(1, ["p", "r"]),
                "c": UniformMatroid(1, ["q", "r"])}
        with pytest.raises(InputError):
            TreeOfMatroids(mats, [("a", "b", "p"), ("a", "c", "q"), ("b", "c", "r")])

    def test_dummy_missing(self):
        with pytest.raises(InputError):
            TreeOfMatroids({"a": UniformMatroid(1, "xg"), "b": UniformMatroid(1, "yz")},
                           [("a", "b", "g")])

    def test_hypothesis_flag(self, fxm2, fxm4):
        assert fxm2.m.hypothesis_violations() == []
        loose = TreeOfMatroids({"a": UniformMatroid(0, "xg"), "b": UniformMatroid(1, "gy")},
                               [("a", "b", "g")])
        assert loose.hypothesis_violations() == ["a"]


class TestOracles:
    def test_fxm2(self, fxm2):
        m = fxm2.m
        assert is_independent(m, {"a"})
        assert not is_independent(m, {"a", "b"})
        assert rank(m, {"a", "b"}) == 1
        assert closure(m, {"a"}) == {"a", "b"}
        assert dual_rank(m, {"a"}) == 1
        assert enumerate_circuits(m) == [frozenset("ab")]

    def test_fxm4(self, fxm4):
        assert is_independent(fxm4.m, {"x1", "x2"})
        assert not is_independent(fxm4.m, {"x1", "x2", "x3"})
        assert rank(fxm4.m, fxm4.m.ground) == 2
        assert closure(fxm4.n, {"x1"}) == set(fxm4.n.ground)
        assert dual_rank(fxm4.m, fxm4.m.ground) == 1
        assert enumerate_circuits(fxm4.m) == [frozenset({"x1", "x2", "x3"})]

    def test_small_cases(self):
        assert enumerate_circuits(single(1, ["p", "q"])) == [frozenset("pq")]
        assert rank(single(2, "abc"), set()) == 0
        assert closure(single(2, "abc"), set()) == set()
        assert dual_rank(single(2, "abc"), set()) == 0

    def test_dummy_rejected(self, fxm2):
        with pytest.raises(InputError):
            is_independent(fxm2.m, {"g"})
        with pytest.raises(InputError):
            rank(fxm2.m, {"zzz"})

    def test_circuit_guard(self):
        with pytest.raises(SizeGuardExceeded):
            enumerate_circuits(single(3, [f"e{i}" for i in range(21)]))

    @pytest.mark.parametrize("seed", range(40))
    def test_dp_matches_circuits(self, seed):
        tm = random_tree(random.Random(seed))
        circuits = enumerate_circuits(tm)
        for s in subsets(tm.ground):
            assert is_independent(tm, s) == (not any(c <= s for c in circuits))

    @pytest.mark.parametrize("seed", range(30))
    def test_rank_axioms(self, seed):
        tm = random_tree(random.Random(seed), max_reals=7)
        ranks = {s: rank(tm, s) for s in subsets(tm.ground)}
        for s, r in ranks.items():
            assert 0 <= r <= len(s)
            for e in tm.ground:
                assert ranks[s | {e}] - r in (0, 1)
        for a, b in itertools.combinations(list(ranks)[::3], 2):
            assert ranks[a | b] + ranks[a & b] <= ranks[a] + ranks[b]

    @pytest.mark.parametrize("seed", range(30))
    def test_dual_tree_is_dual_matroid(self, seed):
        tm = random_tree(random.Random(seed), max_reals=8)
        dual = tm.dual()
        for s in subsets(tm.ground):
            assert rank(dual, s) == dual_rank(tm, s)
            assert is_coindependent(tm, s) == is_independent(dual, s)
            assert dual_rank(dual, s) == rank(tm, s)

    @given(st.integers(1, 5), st.integers(1, 5), st.data())
    def test_two_sum_rank(self, n1, n2, data):
        r1 = data.draw(st.integers(1, n1))
        r2 = data.draw(st.integers(1, n2))
        g1 = ["g"] + [f"a{i}" for i in range(n1)]
        g2 = ["g"] + [f"b{i}" for i in range(n2)]
        tm = TreeOfMatroids({"s": UniformMatroid(r1, g1), "t": UniformMatroid(r2, g2)},
                            [("s", "t", "g")])
        assert rank(tm, tm.ground) == r1 + r2 - 1


class TestMinor:
    def test_delete_dummy_splits(self, fxm2):
        parts = minor(fxm2.m, delete={"g"})
        assert len(parts) == 2
        assert sorted(str(p) for p in parts) == ["TreeOfMatroids(t1:U1,1)",
                                                 "TreeOfMatroids(t2:U1,1)"]

    def test_overlap_rejected(self, fxm2):
        with pytest.raises(InputError):
            minor(fxm2.m, contract={"a"}, delete={"a"})

    @pytest.mark.parametrize("seed", range(20))
    def test_real_minor_matches_rank_formula(self, seed):
        rng = random.Random(seed)
        tm = random_tree(rng, max_reals=8)
        ground = list(tm.ground)
        c = frozenset(rng.sample(ground, min(len(ground), rng.randint(0, 2))))
        rest = [e for e in ground if e not in c]
        d = frozenset(rng.sample(rest, min(len(rest), rng.randint(0, 2))))
        parts = minor(tm, c, d)
        rest = [e for e in ground if e not in c | d]
        for s in subsets(rest):
            expected = rank(tm, s | c) - rank(tm, c)
            got = sum(rank(p, s & set(p.ground)) for p in parts)
            assert got == expected


class TestIntersection:
    def test_fxm2(self, fxm2):
        triple = classical_intersection(fxm2.m, fxm2.n)
        assert triple == IntersectionTriple(frozenset("a"), frozenset("a"), frozenset())
        assert closure(fxm2.m, {"a"}) == {"a", "b"}

    def test_fxm4(self, fxm4):
        triple = classical_intersection(fxm4.m, fxm4.n)
        assert triple.common_independent == {"x1"} == triple.j_n and not triple.j_m

    def test_identical_uniform(self):
        m = single(2, "abc")
        assert len(classical_intersection(m, m).common_independent) == 2

    def test_verify_triple_rejects(self, fxm2):
        bad = IntersectionTriple(frozenset("ab"), frozenset("ab"), frozenset())
        assert not verify_triple(fxm2.m, fxm2.n, bad).passed

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=80, deadline=None)
    def test_maximum(self, rng):
        pair = random_matroid_pair(rng, 5, 10, 3)
        triple = classical_intersection(pair.m, pair.n)
        assert verify_triple(pair.m, pair.n, triple).passed
        assert len(triple.common_independent) == max_common_independent_size(pair.m, pair.n)


class TestPackingChecks:
    def test_fxm2_packing(self, fxm2):
        nstar = fxm2.n.dual()
        assert verify_packing(fxm2.m, nstar, "ab", {"b"}, {"a"}).passed
        assert not verify_packing(fxm2.m, nstar, "ab", {"a"}, {"a"}).passed
        assert not verify_packing(fxm2.m, nstar, "ab", set(), {"a"}).passed

    def test_fxm4_covering(self, fxm4):
        nstar = fxm4.n.dual()
        q = {"x1", "x2", "x3"}
        assert verify_covering(fxm4.m, nstar, q, {"x1"}, {"x2", "x3"}).passed
        assert verify_covering(fxm4.m, nstar, set(), set(), set()).passed
        assert not verify_covering(fxm4.m, nstar, q, {"x1"}, {"x1"}).passed


class TestTmat:
    def test_roundtrip(self, data_dir):
        for name in ("fxm2", "fxm4"):
            text = (data_dir / f"{name}.tmat").read_text()
            assert format_tmat(parse_tmat(text)) == text

    @given(st.randoms(use_true_random=False))
    def test_roundtrip_generated(self, rng):
        text = format_tmat(random_matroid_pair(rng))
        assert format_tmat(parse_tmat(text)) == text

    @pytest.mark.parametrize("text", [
        "tmat v2\n",
        "tmat v1\nnode t rankM 1 rankN 1\n",
        "tmat v1\nnode t rankM 4 rankN 1 elems a b\n",
        "tmat v1\nnode t rankM x rankN 1 elems a b\n",
        "tmat v1\nnode t rankM 1 rankN 1 elems a b\nnode t rankM 1 rankN 1 elems c\n",
        "tmat v1\nnode t rankM 1 rankN 1 elems a b\nlink t u dummy a\n",
        "tmat v1\nnode t rankM 1 rankN 1 elems a a\n",
        "tmat v1\nedge t u\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_tmat(text)
