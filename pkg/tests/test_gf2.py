import itertools

import pytest
from hypothesis import given, settings, strategies as st

from owfkit import gf2
from owfkit.gf2 import FieldElement as FE


def elements(n):
    return st.integers(0, (1 << n) - 1).map(lambda v: FE(n, v))


widths = st.integers(1, 16)


def test_small_moduli():
    assert [gf2.reduction_polynomial(n) for n in range(1, 6)] == [0b10, 0b111, 0b1011, 0b10011, 0b100101]
    assert gf2.reduction_polynomial(8) == 0b100011011


@pytest.mark.parametrize("n", range(1, 17))
def test_rabin_agrees_with_trial_division(n):
    m = gf2.reduction_polynomial(n)
    assert gf2.is_irreducible_trial(m)
    # nothing smaller of the same degree is irreducible
    assert not any(gf2.is_irreducible_trial(c) for c in range(1 << n, m))


def test_rabin_matches_trial_everywhere_up_to_degree_10():
    for m in range(2, 1 << 11):
        assert gf2.is_irreducible(m) == gf2.is_irreducible_trial(m), bin(m)


def test_width_limits():
    with pytest.raises(ValueError):
        gf2.reduction_polynomial(0)
    with pytest.raises(ValueError):
        FE(4, 16)
    with pytest.raises(ValueError):
        gf2.mul(FE(3, 1), FE(4, 1))


def test_known_products():
    assert gf2.mul(FE(4, 2), FE(4, 9)) == FE(4, 1)
    assert gf2.inv(FE(4, 2)) == FE(4, 9)
    # AES field
    assert gf2.mul(FE(8, 0x57), FE(8, 0x83)) == FE(8, 0xC1)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        gf2.inv(FE(5, 0))


@pytest.mark.parametrize("n", range(1, 7))
def test_every_nonzero_element_inverts(n):
    for v in range(1, 1 << n):
        a = FE(n, v)
        assert gf2.mul(a, gf2.inv(a)) == FE(n, 1)


@settings(max_examples=200)
@given(st.data(), widths)
def test_field_axioms(data, n):
    a, b, c = (data.draw(elements(n)) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + a == FE(n, 0)
    assert a * FE(n, 1) == a


@given(st.data(), st.integers(1, 12))
def test_truncate_takes_top_bits(data, n):
    y = data.draw(elements(n))
    k = data.draw(st.integers(0, n))
    assert gf2.truncate(y, k) == format(y.value, f"0{n}b")[:k]
    with pytest.raises(ValueError):
        gf2.truncate(y, n + 1)


def test_mul_table_matches_mul():
    t = gf2.mul_table(3)
    for a, b in itertools.product(range(8), repeat=2):
        assert t[a][b] == gf2.mul(FE(3, a), FE(3, b)).value


def test_hash_is_multiplication():
    assert gf2.hash(FE(6, 5), FE(6, 33)) == gf2.mul(FE(6, 5), FE(6, 33))
