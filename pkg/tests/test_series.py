import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncfree.ncpartition import Partition
from ncfree.series import (
    Series,
    add,
    boxed_convolve,
    boxed_inverse,
    coef,
    delta,
    dilate,
    ext_boxed_convolve,
    format_rational,
    gen_coef,
    geometric,
    h_series,
    moebius,
    pair_letter,
    pair_word,
    scale,
    split_letter,
    split_word,
    to_tsv,
    truncate,
    zeta,
)
from helpers import random_invertible_series, random_series


def test_format_rational_always_shows_denominator():
    assert format_rational(Fraction(3)) == "3/1"
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(Fraction(0)) == "0/1"


def test_of_rejects_bad_words():
    with pytest.raises(ValueError):
        Series.of(2, 3, {(): 1})
    with pytest.raises(ValueError):
        Series.of(2, 3, {(1, 1, 1, 1): 1})
    with pytest.raises(ValueError):
        Series.of(2, 3, {(3,): 1})


def test_of_drops_zero_coefficients():
    f = Series.of(2, 3, {(1,): 0, (2,): 1})
    assert (1,) not in f.coeffs
    assert coef(f, (1,)) == 0
    assert coef(f, (2,)) == 1


def test_coef_guards_length():
    f = zeta(2, 3)
    with pytest.raises(ValueError):
        coef(f, (1, 1, 1, 1))


def test_gen_coef_multiplies_block_restrictions():
    f = Series.of(2, 4, {(1, 2): Fraction(3), (2,): Fraction(5), (1,): Fraction(7)})
    p = Partition.of(4, [[1, 3], [2], [4]])
    # restrictions of word (1,2,2,1): block {1,3} -> (1,2), {2} -> (2,), {4} -> (1,)
    assert gen_coef(f, (1, 2, 2, 1), p) == 3 * 5 * 7


def test_zeta_and_moebius_values():
    z = zeta(2, 4)
    assert all(coef(z, w) == 1 for n in range(1, 5) for w in itertools.product((1, 2), repeat=n))
    m = moebius(1, 6)
    got = [coef(m, (1,) * n) for n in range(1, 7)]
    assert got == [1, -1, 2, -5, 14, -42]
    # signed Catalan closed form
    for n in range(1, 7):
        expect = (-1) ** (n - 1) * math.comb(2 * (n - 1), n - 1) // n
        assert coef(m, (1,) * n) == expect


def test_moebius_inverts_zeta():
    for s in (1, 2, 3):
        assert boxed_convolve(zeta(s, 4), moebius(s, 4)) == delta(s, 4)
        assert boxed_convolve(moebius(s, 4), zeta(s, 4)) == delta(s, 4)


def test_delta_is_unit():
    rng = random.Random(11)
    for _ in range(5):
        f = random_series(rng, 2, 4)
        assert boxed_convolve(f, delta(2, 4)) == f
        assert boxed_convolve(delta(2, 4), f) == f


def test_boxed_convolve_degree_one():
    f = Series.of(1, 2, {(1,): 2, (1, 1): 3})
    g = Series.of(1, 2, {(1,): 5, (1, 1): 7})
    h = boxed_convolve(f, g)
    assert coef(h, (1,)) == 10
    # n=2: f(12)g(1)g(1) + f(1)f(1)g(11)
    assert coef(h, (1, 1)) == 3 * 25 + 4 * 7


def test_boxed_convolve_rejects_mismatch():
    with pytest.raises(ValueError):
        boxed_convolve(zeta(1, 3), zeta(2, 3))
    with pytest.raises(ValueError):
        boxed_convolve(zeta(1, 3), zeta(1, 4))


def test_associativity_seeded():
    for t in range(8):
        rng = random.Random(500 + t)
        f = random_series(rng, 2, 4)
        g = random_series(rng, 2, 4)
        h = random_series(rng, 2, 4)
        assert boxed_convolve(boxed_convolve(f, g), h) == boxed_convolve(f, boxed_convolve(g, h))


def test_boxed_inverse_of_special_series():
    for s in (1, 2):
        assert boxed_inverse(zeta(s, 5)) == moebius(s, 5)
        assert boxed_inverse(delta(s, 5)) == delta(s, 5)


def test_boxed_inverse_roundtrip_seeded():
    for t in range(6):
        rng = random.Random(700 + t)
        f = random_invertible_series(rng, 2, 4)
        inv = boxed_inverse(f)
        assert boxed_convolve(f, inv) == delta(2, 4)
        assert boxed_convolve(inv, f) == delta(2, 4)


def test_boxed_inverse_needs_nonzero_degree_one():
    f = Series.of(2, 3, {(1,): 1, (1, 2): 1})  # letter 2 missing at degree 1
    with pytest.raises(ValueError):
        boxed_inverse(f)


def test_ext_matches_plain_when_d_is_alphabet():
    # s = 1: pair letters coincide with plain letters
    rng = random.Random(13)
    f = random_series(rng, 3, 4)
    g = random_series(rng, 3, 4)
    assert ext_boxed_convolve(f, g) == boxed_convolve(f, g)


def test_ext_zeta_collapses():
    rng = random.Random(17)
    for s, d in ((2, 2), (1, 3), (3, 2)):
        f = random_series(rng, s * d, 4)
        assert ext_boxed_convolve(f, zeta(d, 4)) == boxed_convolve(f, zeta(s * d, 4))
        assert ext_boxed_convolve(f, moebius(d, 4)) == boxed_convolve(f, moebius(s * d, 4))


def test_dilate_scale_add_truncate():
    f = Series.of(1, 3, {(1,): 1, (1, 1): 2, (1, 1, 1): 3})
    two = Fraction(2)
    assert coef(dilate(f, two), (1, 1)) == 8  # alpha^n scaling
    assert coef(scale(f, two), (1, 1)) == 4
    assert dilate(dilate(f, two), Fraction(1, 2)) == f
    assert dilate(f, 1) == f
    assert add(f, scale(f, -1)) == Series.of(1, 3, {})
    g = truncate(f, 2)
    assert g.order == 2 and coef(g, (1, 1)) == 2
    with pytest.raises(ValueError):
        coef(g, (1, 1, 1))


def test_geometric_hits_constant_words_only():
    g = geometric(2, 4)
    assert coef(g, (1, 1, 1)) == 1
    assert coef(g, (2, 2)) == 1
    assert coef(g, (1, 2)) == 0


def test_h_series_degree_two():
    for d in (2, 3):
        h = h_series(d, 3)
        for i1 in range(1, d + 1):
            for i2 in range(1, d + 1):
                expect = Fraction(int(i1 == i2)) - Fraction(1, d)
                assert coef(h, (i1, i2)) == expect


def test_h_series_degree_three():
    for d in (2, 3):
        h = h_series(d, 3)
        for w in itertools.product(range(1, d + 1), repeat=3):
            i1, i2, i3 = w
            expect = (
                Fraction(int(i1 == i2 == i3))
                - Fraction(int(i1 == i2) + int(i1 == i3) + int(i2 == i3), d)
                + Fraction(2, d * d)
            )
            assert coef(h, w) == expect
    # d = 2 collapses degree 3 entirely
    h2 = h_series(2, 3)
    assert all(coef(h2, w) == 0 for w in itertools.product((1, 2), repeat=3))


def test_h_series_slot_sums_vanish():
    for d in (2, 3):
        h = h_series(d, 5)
        for n in range(2, 6):
            for slot in range(n):
                for rest in itertools.product(range(1, d + 1), repeat=n - 1):
                    total = Fraction(0)
                    for i in range(1, d + 1):
                        w = rest[:slot] + (i,) + rest[slot:]
                        total += coef(h, w)
                    assert total == 0


def test_pair_letter_roundtrip():
    for d in (1, 2, 3):
        for r in (1, 2, 3):
            for i in range(1, d + 1):
                assert split_letter(pair_letter(r, i, d), d) == (r, i)
    assert pair_word((1, 2), (2, 1), 2) == (2, 3)
    assert split_word((2, 3), 2) == ((1, 2), (2, 1))


def test_to_tsv_formats():
    f = Series.of(2, 2, {(1,): Fraction(1, 2), (2, 1): -1})
    lines = to_tsv(f).splitlines()
    assert "1\t1/2" in lines
    assert "2,1\t-1/1" in lines
    g = Series.of(4, 2, {(2, 3): 1})
    assert "1:2,2:1\t1/1" in to_tsv(g, pair_d=2).splitlines()


@settings(max_examples=40)
@given(st.integers(min_value=0, max_value=10_000))
def test_convolve_with_zeta_is_invertible(seed):
    rng = random.Random(seed)
    f = random_invertible_series(rng, 2, 3)
    assert boxed_convolve(boxed_convolve(f, zeta(2, 3)), moebius(2, 3)) == f
