import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from owfkit import transform
from owfkit.gf2 import FieldElement as FE
from owfkit.transform import (compress_to_length, pair_hash, pair_hash_function, sibling_separate,
                              sibling_stats, stock_function)


def bits(n):
    return ["".join(p) for p in itertools.product("01", repeat=n)]


def test_k_zero_gives_empty_tag():
    f = stock_function("identity", 3)
    out = sibling_separate(f, "101", 0, FE(3, 5))
    assert out.tag == "" and out.image == "101" and out.k == 0


def test_constant_function_tags_split_all_witnesses():
    f = stock_function("zero", 2)
    a = FE(2, 3)
    tags = [sibling_separate(f, w, 2, a).tag for w in bits(2)]
    assert sorted(tags) == bits(2)


def test_separate_errors():
    f = stock_function("zero", 3)
    with pytest.raises(ValueError):
        sibling_separate(f, "000", 4, FE(3, 1))
    with pytest.raises(ValueError):
        sibling_separate(f, "000", 1, FE(4, 1))
    with pytest.raises(ValueError):
        sibling_separate(f, "00", 1, FE(3, 1))


def test_serialization_layout():
    out = sibling_separate(stock_function("zero", 2), "01", 1, FE(2, 1))
    assert out.serialize() == "00" + "01" + "01" + "0"


def test_compress_with_unit_constant_keeps_leading_bits():
    f = stock_function("complement", 4)
    out = sibling_separate(f, "0011", 2, FE(4, 7))
    s = out.serialize()
    assert compress_to_length(out, FE(len(s), 1)) == s[:4]
    with pytest.raises(ValueError):
        compress_to_length(out, FE(len(s) - 1, 1))


@pytest.mark.parametrize("name", sorted(transform.STOCK_FUNCTIONS))
def test_compress_always_emits_n_bits(name):
    n, k = 2, 1
    f = stock_function(name, n)
    width = transform.separated_width(n, k)
    c = FE(width, 0b1011011)
    for w in bits(n):
        for a in range(1 << n):
            assert len(compress_to_length(sibling_separate(f, w, k, FE(n, a)), c)) == n


def test_compress_collision_rate():
    rng = random.Random(3)
    n, k = 4, 2
    width = transform.separated_width(n, k)
    f = stock_function("shift", n)
    serial = {}
    for w in bits(n):
        for a in range(1 << n):
            out = sibling_separate(f, w, k, FE(n, a))
            serial[out.serialize()] = out
    outs = list(serial.values())
    trials, hits = 4000, 0
    for _ in range(trials):
        c = FE(width, rng.randrange(1, 1 << width))
        x, y = rng.sample(outs, 2)
        hits += compress_to_length(x, c) == compress_to_length(y, c)
    p = 2 ** -n
    sigma = (p * (1 - p) / trials) ** 0.5
    assert hits / trials <= p + 3 * sigma + 1e-9


def test_pair_hash_basics():
    f = stock_function("identity", 3)
    for x in bits(3):
        assert pair_hash(f, FE(3, 0), x) == (FE(3, 0), x)
    with pytest.raises(ValueError):
        pair_hash(f, FE(2, 0), "000")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("name", ["identity", "complement", "square"])
def test_pair_hash_of_bijection_is_never_injective(n, name):
    # each pair x != x' collides under exactly one a, bijective f or not
    g = pair_hash_function(stock_function(name, n))
    images = transform.preimage_counts(g, 2 * n)
    colliding = sum(m * (m - 1) for m in images.values())
    assert colliding == 2 ** n * (2 ** n - 1)
    assert len(images) < 1 << (2 * n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("name", sorted(transform.STOCK_FUNCTIONS))
def test_pair_hash_mean_siblings_exact(n, name):
    g = pair_hash_function(stock_function(name, n))
    assert sibling_stats(g, 2 * n).mean_siblings == 1 - F(1, 2 ** n)


def test_pair_hash_constant_n3_is_seven_eighths():
    g = pair_hash_function(stock_function("zero", 3))
    st_ = sibling_stats(g, 6)
    assert st_.mean_siblings == F(7, 8)
    assert st_.histogram == {1: 56, 8: 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, 2 ** n - 1), min_size=2 ** n, max_size=2 ** n))))
def test_pair_hash_mean_independent_of_f(case):
    n, table = case
    f = transform.CandidateFunction("table", n, lambda w: format(table[int(w, 2)], f"0{n}b"))
    assert sibling_stats(pair_hash_function(f), 2 * n).mean_siblings == 1 - F(1, 2 ** n)


def test_sibling_stats_trivial_cases():
    s = sibling_stats(stock_function("identity", 5), 5)
    assert s.histogram == {1: 32} and s.mean_siblings == 0
    s = sibling_stats(stock_function("zero", 4), 4)
    assert s.histogram == {16: 1} and s.mean_siblings == 15
    with pytest.raises(ValueError):
        sibling_stats(stock_function("zero", 13), 13)


def test_candidate_function_checks_lengths():
    bad = transform.CandidateFunction("bad", 3, lambda w: w + "0")
    with pytest.raises(ValueError):
        bad("000")
    with pytest.raises(ValueError):
        stock_function("identity", 3)("01")
    with pytest.raises(ValueError):
        stock_function("nope", 3)


@pytest.mark.parametrize("n", range(1, 7))
def test_multiplicative_hash_is_universal(n):
    for w, v in itertools.combinations(range(1 << n), 2):
        assert transform.hash_collisions(n, w, v) == 1  # only a = 0


def test_truncated_collisions_bound():
    n = 5
    for k in range(n + 1):
        for w, v in itertools.combinations(range(1 << n), 2):
            p = F(transform.hash_collisions(n, w, v, k), 1 << n)
            assert p <= F(1, 2 ** k) + F(1, 2 ** n)


def test_tag_splitting_keeps_few_siblings():
    rng = random.Random(11)
    n = 4
    f = stock_function("parity", n)  # 8 siblings per witness, so k = 3
    total, trials = 0, 200
    for _ in range(trials):
        w = format(rng.randrange(1 << n), f"0{n}b")
        a = FE(n, rng.randrange(1 << n))
        total += transform.tag_siblings(f, w, 3, a)
    assert total / trials <= 2


def test_security_of_simple_functions():
    s = transform.security(stock_function("identity", 3))
    assert s.mean == 8 and s.mean_log2 == 3
    s = transform.security(stock_function("zero", 3))
    assert s.mean == 1 and s.mean_log2 == 0
