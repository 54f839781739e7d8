"""Prefix-free binary codes: unary, Elias gamma/delta/omega, fixed-length,
Shannon-Fano, plus subset ranking used by the witness codecs.

Bit order is most-significant-bit first everywhere.  Codewords are exposed
as :class:`BitString` values which serialize either to '0'/'1' ASCII text or
to packed big-endian bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


class DecodeError(ValueError):
    """Raised when a bit stream cannot be decoded (truncated or malformed)."""


_VALID = frozenset("01")


class BitString:
    """An immutable finite sequence of bits."""

    __slots__ = ("_bits",)

    def __init__(self, bits: str | Iterable[int | str] = ""):
        if not isinstance(bits, str):
            bits = "".join("1" if int(b) else "0" for b in bits)
        if set(bits) - _VALID:
            raise ValueError(f"not a bit string: {bits!r}")
        self._bits = bits

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        if value < 0 or (width >= 0 and value >> width):
            raise ValueError(f"{value} does not fit in {width} bits")
        return cls(format(value, f"0{width}b") if width else "")

    @property
    def bits(self) -> str:
        return self._bits

    def __len__(self) -> int:
        return len(self._bits)

    @property
    def n0(self) -> int:
        return self._bits.count("0")

    @property
    def n1(self) -> int:
        return self._bits.count("1")

    def __getitem__(self, idx) -> "BitString | int":
        if isinstance(idx, slice):
            return BitString(self._bits[idx])
        return int(self._bits[idx])

    def __iter__(self) -> Iterator[int]:
        return (int(b) for b in self._bits)

    def __add__(self, other: "BitString | str") -> "BitString":
        other_bits = other._bits if isinstance(other, BitString) else other
        return BitString(self._bits + other_bits)

    def __eq__(self, other) -> bool:
        if isinstance(other, BitString):
            return self._bits == other._bits
        if isinstance(other, str):
            return self._bits == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._bits)

    def __repr__(self) -> str:
        return f"BitString({self._bits!r})"

    def __str__(self) -> str:
        return self._bits

    def startswith(self, prefix: "BitString | str") -> bool:
        p = prefix._bits if isinstance(prefix, BitString) else prefix
        return self._bits.startswith(p)

    def to_int(self) -> int:
        return int(self._bits, 2) if self._bits else 0

    def to_bytes(self) -> tuple[bytes, int]:
        """Pack into big-endian bytes; returns (payload, true bit length).

        The final partial byte is zero-padded on the right.
        """
        n = len(self._bits)
        padded = self._bits + "0" * (-n % 8)
        payload = bytes(
            int(padded[i : i + 8], 2) for i in range(0, len(padded), 8)
        )
        return payload, n

    @classmethod
    def from_bytes(cls, payload: bytes, bit_length: int) -> "BitString":
        if bit_length > 8 * len(payload):
            raise ValueError("bit_length exceeds payload size")
        bits = "".join(format(b, "08b") for b in payload)[:bit_length]
        return cls(bits)


class BitReader:
    """Sequential reader over a BitString, for streaming decode."""

    def __init__(self, source: BitString | str):
        self._bits = source.bits if isinstance(source, BitString) else source
        self._pos = 0

    @property
    def position(self) -> int:
        return self._pos

    @property
    def remaining(self) -> int:
        return len(self._bits) - self._pos

    def take(self, k: int) -> BitString:
        if k > self.remaining:
            raise DecodeError(f"truncated input: wanted {k} bits, have {self.remaining}")
        chunk = self._bits[self._pos : self._pos + k]
        self._pos += k
        return BitString(chunk)

    def take_int(self, k: int) -> int:
        return self.take(k).to_int()

    def take_bit(self) -> int:
        if self.remaining == 0:
            raise DecodeError("truncated input: no bits left")
        b = self._bits[self._pos]
        self._pos += 1
        return int(b)

    def expect_end(self) -> None:
        if self.remaining:
            raise DecodeError(f"{self.remaining} trailing bits after codeword")


def _as_reader(source: BitString | str | BitReader) -> BitReader:
    return source if isinstance(source, BitReader) else BitReader(source)


# ---------------------------------------------------------------------------
# Integer codecs.  Each codec has encode(i) -> BitString, read(reader) -> int
# (streaming), and decode(bits) -> int (whole-string).


def unary_encode(i: int) -> BitString:
    """i one-bits followed by a terminating zero; |U(i)| = i + 1."""
    if i < 0:
        raise ValueError("unary code is defined for i >= 0")
    return BitString("1" * i + "0")


def unary_read(source: BitString | str | BitReader) -> int:
    r = _as_reader(source)
    i = 0
    while r.take_bit() == 1:
        i += 1
    return i


def unary_decode(bits: BitString | str) -> int:
    r = BitReader(bits)
    i = unary_read(r)
    r.expect_end()
    return i


def elias_gamma_encode(i: int) -> BitString:
    """Unary code for bitlen(i), then the bits of i minus its leading one.

    Total length is exactly 2 * bitlen(i).
    """
    if i < 1:
        raise ValueError("Elias gamma is defined for i >= 1")
    b = i.bit_length()
    return unary_encode(b) + format(i, "b")[1:]


def elias_gamma_read(source: BitString | str | BitReader) -> int:
    r = _as_reader(source)
    b = unary_read(r)
    if b == 0:
        raise DecodeError("invalid gamma codeword: zero bit length")
    return (1 << (b - 1)) | r.take_int(b - 1)


def elias_gamma_decode(bits: BitString | str) -> int:
    r = BitReader(bits)
    i = elias_gamma_read(r)
    r.expect_end()
    return i


def elias_delta_encode(i: int) -> BitString:
    """Gamma code for bitlen(i), then the bits of i minus its leading one."""
    if i < 1:
        raise ValueError("Elias delta is defined for i >= 1")
    b = i.bit_length()
    return elias_gamma_encode(b) + format(i, "b")[1:]


def elias_delta_read(source: BitString | str | BitReader) -> int:
    r = _as_reader(source)
    b = elias_gamma_read(r)
    return (1 << (b - 1)) | r.take_int(b - 1)


def elias_delta_decode(bits: BitString | str) -> int:
    r = BitReader(bits)
    i = elias_delta_read(r)
    r.expect_end()
    return i


def elias_omega_encode(i: int) -> BitString:
    """Recursive length-of-length code.

    The codeword is built by prepending the binary form of the current value,
    then recursing on bitlen(value) - 1 while the front group has more than
    one bit, and is terminated by a single 0 bit.  The codeword for 1 is "0".
    """
    if i < 1:
        raise ValueError("Elias omega is defined for i >= 1")
    out = "0"
    while i > 1:
        out = format(i, "b") + out
        i = i.bit_length() - 1
    return BitString(out)


def elias_omega_read(source: BitString | str | BitReader) -> int:
    r = _as_reader(source)
    value = 1
    while r.take_bit() == 1:
        # a group of value+1 bits follows, led by the 1 we just consumed
        value = (1 << value) | r.take_int(value)
    return value


def elias_omega_decode(bits: BitString | str) -> int:
    r = BitReader(bits)
    i = elias_omega_read(r)
    r.expect_end()
    return i


def fixed_length_width(m: int) -> int:
    if m < 1:
        raise ValueError("domain size must be >= 1")
    return (m - 1).bit_length()  # == ceil(log2 m), 0 for m == 1


def fixed_length_encode(value: int, m: int) -> BitString:
    """value as a ceil(log2 m)-bit big-endian number; empty for m == 1."""
    if not 0 <= value < m:
        raise ValueError(f"value {value} outside domain [0, {m})")
    return BitString.from_int(value, fixed_length_width(m))


def fixed_length_read(source: BitString | str | BitReader, m: int) -> int:
    r = _as_reader(source)
    value = r.take_int(fixed_length_width(m))
    if value >= m:
        raise DecodeError(f"fixed-length value {value} outside domain [0, {m})")
    return value


def fixed_length_decode(bits: BitString | str, m: int) -> int:
    r = BitReader(bits)
    value = fixed_length_read(r, m)
    r.expect_end()
    return value


CODECS = {
    "unary": (unary_encode, unary_read),
    "elias-gamma": (elias_gamma_encode, elias_gamma_read),
    "elias-delta": (elias_delta_encode, elias_delta_read),
    "elias-omega": (elias_omega_encode, elias_omega_read),
}


# ---------------------------------------------------------------------------
# Subset ranking (colexicographic) for k-subsets of {0..n-1}.


def subset_rank(n: int, elements: Sequence[int]) -> int:
    """Colex rank of a strictly increasing k-subset of {0..n-1}."""
    prev = -1
    for e in elements:
        if not prev < e < n:
            raise ValueError(f"elements must be strictly increasing in [0, {n})")
        prev = e
    return sum(math.comb(e, j + 1) for j, e in enumerate(elements))


def subset_unrank(n: int, k: int, rank: int) -> tuple[int, ...]:
    """Inverse of subset_rank."""
    if not 0 <= rank < math.comb(n, k):
        raise ValueError(f"rank {rank} outside [0, C({n},{k}))")
    out = [0] * k
    hi = n
    for j in range(k, 0, -1):
        # largest e with C(e, j) <= rank
        e = j - 1
        while e + 1 < hi and math.comb(e + 1, j) <= rank:
            e += 1
        rank -= math.comb(e, j)
        out[j - 1] = e
        hi = e
    return tuple(out)


# ---------------------------------------------------------------------------
# Densities, code tables, Shannon-Fano.


@dataclass(frozen=True)
class FiniteDensity:
    """A probability distribution with finite ordered support."""

    support: tuple
    mass: tuple[float, ...]

    MASS_TOL = 1e-9

    def __post_init__(self):
        if len(self.support) != len(self.mass):
            raise ValueError("support and mass length mismatch")
        if len(set(self.support)) != len(self.support):
            raise ValueError("duplicate outcomes in support")
        if any(m <= 0 for m in self.mass):
            raise ValueError("all masses must be strictly positive")
        if abs(math.fsum(self.mass) - 1.0) > self.MASS_TOL:
            raise ValueError(f"masses sum to {math.fsum(self.mass)}, not 1")

    @classmethod
    def from_mapping(cls, masses: Mapping) -> "FiniteDensity":
        items = list(masses.items())
        return cls(tuple(k for k, _ in items), tuple(float(v) for _, v in items))


class CodeTable:
    """A finite prefix-free code: outcome -> codeword."""

    def __init__(self, entries: Mapping):
        entries = {k: BitString(str(v)) if not isinstance(v, BitString) else v
                   for k, v in entries.items()}
        words = list(entries.values())
        if len(set(w.bits for w in words)) != len(words):
            raise ValueError("code is not injective")
        for i, a in enumerate(words):
            for b in words[i + 1 :]:
                if a.startswith(b) or b.startswith(a):
                    raise ValueError(
                        f"not prefix-free: {a.bits!r} / {b.bits!r}"
                    )
        if kraft_sum([len(w) for w in words]) > 1 + 1e-12:
            raise ValueError("Kraft sum exceeds 1")
        self._entries = entries

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    def __getitem__(self, outcome) -> BitString:
        return self._entries[outcome]

    def __len__(self) -> int:
        return len(self._entries)

    def lengths(self) -> dict:
        return {k: len(v) for k, v in self._entries.items()}

    def kraft_sum(self) -> float:
        return kraft_sum([len(v) for v in self._entries.values()])

    def decode_stream(self, bits: BitString | str) -> list:
        """Decode a concatenation of codewords back into outcomes."""
        inverse = {v.bits: k for k, v in self._entries.items()}
        s = bits.bits if isinstance(bits, BitString) else bits
        out, cur = [], ""
        for b in s:
            cur += b
            if cur in inverse:
                out.append(inverse[cur])
                cur = ""
        if cur:
            raise DecodeError(f"trailing bits {cur!r} are not a codeword")
        return out


def canonical_code(lengths: Sequence[int]) -> list[BitString]:
    """Assign codewords at the given (sorted nondecreasing) depths, carving
    the binary tree greedily left to right.  Requires Kraft sum <= 1."""
    if any(l < 0 for l in lengths):
        raise ValueError("negative codeword length")
    if sorted(lengths) != list(lengths):
        raise ValueError("lengths must be nondecreasing")
    out = []
    value, prev = 0, 0
    for l in lengths:
        value <<= l - prev
        if l > 0 and value >> l:
            raise ValueError("lengths violate Kraft's condition")
        out.append(BitString.from_int(value, l))
        value += 1
        prev = l
    return out


def shannon_fano_build(p: FiniteDensity) -> CodeTable:
    """Prefix-free code with |C(x)| = ceil(log2(1/p_x)) for every outcome.

    Outcomes are processed by decreasing mass (ties broken by support
    order), so the construction is deterministic.
    """
    order = sorted(range(len(p.support)), key=lambda i: (-p.mass[i], i))
    lengths = [max(0, math.ceil(math.log2(1 / p.mass[i]))) for i in order]
    words = canonical_code(lengths)
    return CodeTable({p.support[i]: w for i, w in zip(order, words)})


def bernoulli_codeword_length(x: BitString | str, alpha: float) -> float:
    """Real-valued Shannon-Fano cost of a bit string under Bernoulli(alpha):
    n1 * log2(1/alpha) + n0 * log2(1/(1-alpha)), no ceiling."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    x = x if isinstance(x, BitString) else BitString(x)
    return x.n1 * math.log2(1 / alpha) + x.n0 * math.log2(1 / (1 - alpha))


# ---------------------------------------------------------------------------
# Kraft sums.


def kraft_sum(lengths: Iterable[float]) -> float:
    """Sum of 2^(-l); entries of infinite length contribute 0."""
    total = []
    for l in lengths:
        if l < 0:
            raise ValueError("negative codeword length")
        total.append(0.0 if math.isinf(l) else 2.0 ** -l)
    return math.fsum(total)


def kraft_sum_unary() -> Fraction:
    """Analytic Kraft sum of the unary family {i+1 : i >= 0}: the geometric
    series sum 2^(-i-1) = 1."""
    return Fraction(1)


def kraft_sum_elias_gamma() -> Fraction:
    """Analytic Kraft sum of the gamma family: 2^(b-1) codewords of length
    2b for each b >= 1, so sum_b 2^(b-1) * 2^(-2b) = 1/2."""
    return Fraction(1, 2)
