import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from encbound.bitcodes import (
    BitReader,
    BitString,
    CODECS,
    CodeTable,
    DecodeError,
    FiniteDensity,
    bernoulli_codeword_length,
    canonical_code,
    elias_delta_decode,
    elias_delta_encode,
    elias_gamma_decode,
    elias_gamma_encode,
    elias_omega_decode,
    elias_omega_encode,
    fixed_length_decode,
    fixed_length_encode,
    kraft_sum,
    kraft_sum_elias_gamma,
    kraft_sum_unary,
    shannon_fano_build,
    subset_rank,
    subset_unrank,
    unary_decode,
    unary_encode,
)


# ---------------------------------------------------------------------------
# BitString basics.


def test_bitstring_counts():
    x = BitString("10110")
    assert len(x) == 5 and x.n0 == 2 and x.n1 == 3
    assert x.n0 + x.n1 == len(x)


def test_bitstring_rejects_junk():
    with pytest.raises(ValueError):
        BitString("10201")


@given(st.text(alphabet="01", max_size=64))
def test_bitstring_bytes_roundtrip(bits):
    x = BitString(bits)
    payload, n = x.to_bytes()
    assert n == len(bits)
    assert BitString.from_bytes(payload, n) == x


# ---------------------------------------------------------------------------
# Integer codecs: pinned codewords.


def test_unary_examples():
    assert unary_encode(0).bits == "0"
    assert unary_encode(3).bits == "1110"
    assert len(unary_encode(10)) == 11  # |U(i)| = i + 1
    assert unary_decode("1110") == 3
    with pytest.raises(DecodeError):
        unary_decode("111")  # no terminating zero


def test_elias_gamma_examples():
    assert elias_gamma_encode(1).bits == "10"
    assert elias_gamma_encode(5).bits == "111001"
    assert elias_gamma_decode("111001") == 5
    for i in range(1, 300):
        assert len(elias_gamma_encode(i)) == 2 * i.bit_length()


def test_elias_delta_examples():
    assert elias_delta_encode(1).bits == "10"
    assert elias_delta_encode(5).bits == "110101"
    assert elias_delta_decode("110101") == 5


def test_elias_omega_base_case():
    assert elias_omega_encode(1).bits == "0"
    assert elias_omega_decode("0") == 1


@pytest.mark.parametrize("codec", sorted(CODECS))
def test_codec_roundtrip_range(codec):
    encode, read = CODECS[codec]
    lo = 0 if codec == "unary" else 1
    for i in range(lo, 4097):
        r = BitReader(encode(i))
        assert read(r) == i
        assert r.remaining == 0


@pytest.mark.parametrize("codec", sorted(CODECS))
@given(values=st.lists(st.integers(min_value=1, max_value=10**9),
                       min_size=1, max_size=100))
@settings(max_examples=25, deadline=None)
def test_codec_streaming(codec, values):
    encode, read = CODECS[codec]
    if codec == "unary":
        # unary codewords are Theta(value); keep the stream a sane size
        values = [v % 4096 + 1 for v in values]
    stream = BitString("")
    for v in values:
        stream += encode(v)
    r = BitReader(stream)
    assert [read(r) for _ in values] == values
    assert r.remaining == 0


@pytest.mark.parametrize("codec", sorted(CODECS))
def test_codec_truncation_detected(codec):
    encode, read = CODECS[codec]
    word = encode(37)
    with pytest.raises(DecodeError):
        read(BitReader(word[: len(word) - 1]))


# ---------------------------------------------------------------------------
# Fixed-length codec.


def test_fixed_length_examples():
    assert fixed_length_encode(4, 5).bits == "100"
    assert fixed_length_encode(0, 1).bits == ""
    assert fixed_length_encode(2, 8).bits == "010"
    assert fixed_length_decode("100", 5) == 4
    with pytest.raises(ValueError):
        fixed_length_encode(5, 5)
    with pytest.raises(DecodeError):
        fixed_length_decode("111", 5)  # 7 outside [0, 5)


# ---------------------------------------------------------------------------
# Subset ranking.


def test_subset_rank_examples():
    assert subset_rank(4, [0, 1]) == 0
    assert subset_rank(4, [2, 3]) == 5
    with pytest.raises(ValueError):
        subset_rank(4, [1, 1])
    with pytest.raises(ValueError):
        subset_rank(4, [2, 4])


def test_subset_rank_colex_order_is_a_bijection():
    # ranks of all C(8,3) subsets form exactly 0..55, and unrank inverts
    seen = set()
    for sub in combinations(range(8), 3):
        r = subset_rank(8, sub)
        assert subset_unrank(8, 3, r) == sub
        seen.add(r)
    assert seen == set(range(math.comb(8, 3)))


# ---------------------------------------------------------------------------
# Shannon-Fano.


def test_shannon_fano_uniform():
    p = FiniteDensity(("a", "b", "c", "d"), (0.25, 0.25, 0.25, 0.25))
    table = shannon_fano_build(p)
    assert sorted(table.lengths().values()) == [2, 2, 2, 2]


def test_shannon_fano_dyadic():
    p = FiniteDensity(("a", "b", "c"), (0.5, 0.25, 0.25))
    assert shannon_fano_build(p).lengths() == {"a": 1, "b": 2, "c": 2}


def test_shannon_fano_nondyadic():
    p = FiniteDensity(("a", "b", "c"), (0.4, 0.3, 0.3))
    assert sorted(shannon_fano_build(p).lengths().values()) == [2, 2, 2]


@given(st.lists(st.integers(min_value=1, max_value=50), min_size=2, max_size=20))
@settings(max_examples=50)
def test_shannon_fano_lengths_exact_and_kraft(weights):
    total = sum(weights)
    p = FiniteDensity(tuple(range(len(weights))),
                      tuple(w / total for w in weights))
    table = shannon_fano_build(p)
    for x, m in zip(p.support, p.mass):
        assert len(table[x]) == max(0, math.ceil(math.log2(1 / m)))
    assert table.kraft_sum() <= 1 + 1e-12


def test_code_table_decode_stream():
    p = FiniteDensity(("a", "b", "c"), (0.5, 0.25, 0.25))
    table = shannon_fano_build(p)
    msg = ["a", "c", "b", "a", "a", "c"]
    stream = BitString("")
    for sym in msg:
        stream += table[sym]
    assert table.decode_stream(stream) == msg


def test_code_table_rejects_prefix_violation():
    with pytest.raises(ValueError):
        CodeTable({"a": "0", "b": "01"})


def test_prefix_free_code_has_at_most_2k_short_words():
    # the counting heart of the uniform tail bound, checked on a real table
    p = FiniteDensity(tuple(range(32)), tuple([1 / 32] * 32))
    lengths = list(shannon_fano_build(p).lengths().values())
    for k in range(1, 12):
        assert sum(1 for l in lengths if l <= k) <= 2**k


def test_canonical_code_rejects_kraft_violation():
    with pytest.raises(ValueError):
        canonical_code([1, 1, 1])


# ---------------------------------------------------------------------------
# Bernoulli codeword length.


def test_bernoulli_length_examples():
    assert bernoulli_codeword_length("1111", 0.5) == pytest.approx(4.0)
    expect = 2 + 3 * math.log2(4 / 3)
    assert bernoulli_codeword_length("1000", 0.25) == pytest.approx(expect)


@given(st.text(alphabet="01", min_size=2, max_size=200))
@settings(max_examples=100)
def test_bernoulli_length_at_empirical_rate_is_entropy(bits):
    x = BitString(bits)
    k, n = x.n1, len(x)
    if k == 0 or k == n:
        return
    h = (k / n) * math.log2(n / k) + (1 - k / n) * math.log2(n / (n - k))
    assert bernoulli_codeword_length(x, k / n) == pytest.approx(n * h, abs=1e-9)


# ---------------------------------------------------------------------------
# Kraft sums.


def test_kraft_sum_examples():
    assert kraft_sum([1, 2, 2]) == pytest.approx(1.0)
    assert kraft_sum([1, math.inf, 1]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        kraft_sum([-1])


def test_kraft_analytic_families():
    assert kraft_sum_unary() == Fraction(1)
    assert kraft_sum_elias_gamma() == Fraction(1, 2)
    # numeric partial sums approach the analytic values from below
    assert kraft_sum(i + 1 for i in range(60)) == pytest.approx(1.0)
    assert kraft_sum(2 * i.bit_length() for i in range(1, 2**16)) <= 0.5
