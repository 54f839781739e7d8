"""Witness codecs: explicit encoder/decoder pairs whose domain is the bad
event of a counting theorem.  Injectivity is testable by roundtrip, and
every codec's measured bit length matches its closed-form formula.

Codecs here use integer (ceiled) field widths so codewords are genuine bit
strings; the real-valued accounting lives in :mod:`encbound.ledger`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .bitcodes import (
    BitReader,
    BitString,
    DecodeError,
    fixed_length_encode,
    fixed_length_read,
    fixed_length_width,
    subset_rank,
    subset_unrank,
)


class NoWitness(ValueError):
    """The input does not exhibit the bad event; its codeword length is
    infinite by convention."""


# ---------------------------------------------------------------------------
# Runs of ones in bit strings.


def first_run_start(x: BitString | str, t: int) -> int | None:
    """0-based start of the first run of >= t ones, or None."""
    bits = x.bits if isinstance(x, BitString) else x
    run = 0
    for i, b in enumerate(bits):
        run = run + 1 if b == "1" else 0
        if run == t:
            return i - t + 1
    return None


def runs_codeword_length(n: int, t: int) -> int:
    return fixed_length_width(n) + n - t


def runs_encode(x: BitString | str, t: int) -> BitString:
    """Codeword: run start index (ceil(log n) bits) then the n - t bits of x
    outside the run."""
    x = x if isinstance(x, BitString) else BitString(x)
    n = len(x)
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    i = first_run_start(x, t)
    if i is None:
        raise NoWitness(f"no run of {t} ones")
    rest = x.bits[:i] + x.bits[i + t :]
    return fixed_length_encode(i, n) + rest


def runs_decode(c: BitString | str, n: int, t: int) -> BitString:
    """Reinsert t ones at the decoded index."""
    r = BitReader(c)
    i = fixed_length_read(r, n)
    if i > n - t:
        raise DecodeError(f"run start {i} exceeds n - t = {n - t}")
    rest = r.take(n - t).bits
    r.expect_end()
    x = BitString(rest[:i] + "1" * t + rest[i:])
    if first_run_start(x, t) != i:
        raise DecodeError(f"index {i} is not the first run start")
    return x


# ---------------------------------------------------------------------------
# Balls in urns.


def urns_codeword_length(n: int, t: int) -> int:
    w = fixed_length_width(n)
    return w + fixed_length_width(math.comb(n, t)) + (n - t) * w


def urns_encode(b: Sequence[int], t: int) -> BitString:
    """Codeword: index j of the first urn holding >= t balls, the colex rank
    of the t smallest ball indices in urn j, then the remaining n - t urn
    choices in ball order."""
    n = len(b)
    if any(not 0 <= v < n for v in b):
        raise ValueError("urn indices must lie in [0, n)")
    by_urn: dict[int, list[int]] = {}
    for ball, urn in enumerate(b):
        by_urn.setdefault(urn, []).append(ball)
    j = min((u for u, balls in by_urn.items() if len(balls) >= t), default=None)
    if j is None:
        raise NoWitness(f"no urn holds {t} balls")
    chosen = by_urn[j][:t]  # t smallest ball indices, already sorted
    out = fixed_length_encode(j, n)
    out += fixed_length_encode(subset_rank(n, chosen), math.comb(n, t))
    for ball, urn in enumerate(b):
        if ball not in chosen:
            out += fixed_length_encode(urn, n)
    return out


def urns_decode(c: BitString | str, n: int, t: int) -> tuple[int, ...]:
    r = BitReader(c)
    j = fixed_length_read(r, n)
    chosen = set(subset_unrank(n, t, fixed_length_read(r, math.comb(n, t))))
    b = []
    for ball in range(n):
        if ball in chosen:
            b.append(j)
        else:
            b.append(fixed_length_read(r, n))
    r.expect_end()
    return tuple(b)


# ---------------------------------------------------------------------------
# Cliques / independent sets in graphs over {0..n-1}.
# Adjacency is a bit string over pairs (i, j), i < j, in row-major order.


def pair_index(i: int, j: int, n: int) -> int:
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def find_clique_or_is(adj: BitString | str, n: int, t: int):
    """Brute-force search (intended for n <= 24): returns (flag, vertices)
    with flag 1 for a clique and 0 for an independent set, or None."""
    bits = adj.bits if isinstance(adj, BitString) else adj
    if len(bits) != math.comb(n, 2):
        raise ValueError("adjacency length must be C(n, 2)")
    masks = [0] * n
    for i, j in combinations(range(n), 2):
        if bits[pair_index(i, j, n)] == "1":
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    full = (1 << n) - 1
    for flag, mk in ((1, masks), (0, [full & ~m & ~(1 << v) for v, m in enumerate(masks)])):
        if t > n:
            continue
        # enumerate complements when t is close to n, subsets otherwise
        if n - t < t:
            for removed in combinations(range(n), n - t):
                keep = full
                for v in removed:
                    keep &= ~(1 << v)
                if all(mk[v] & keep == keep & ~(1 << v) for v in range(n) if keep >> v & 1):
                    return flag, tuple(v for v in range(n) if keep >> v & 1)
        else:
            for verts in combinations(range(n), t):
                keep = 0
                for v in verts:
                    keep |= 1 << v
                if all(mk[v] & keep == keep & ~(1 << v) for v in verts):
                    return flag, verts
    return None


def clique_codeword_length(n: int, t: int) -> int:
    return 1 + t * fixed_length_width(n) + math.comb(n, 2) - math.comb(t, 2)


def clique_encode(
    adj: BitString | str, n: int, t: int, vertices: Sequence[int], flag: int
) -> BitString:
    """Codeword: flag bit, the t vertices of the clique (flag=1) or
    independent set (flag=0), then the adjacency bits not implied by it."""
    bits = adj.bits if isinstance(adj, BitString) else adj
    if len(bits) != math.comb(n, 2):
        raise ValueError("adjacency length must be C(n, 2)")
    vs = sorted(vertices)
    if len(vs) != t or len(set(vs)) != t or not all(0 <= v < n for v in vs):
        raise ValueError("vertex set must be t distinct vertices in [0, n)")
    expected = "1" if flag else "0"
    inside = set(vs)
    for u, v in combinations(vs, 2):
        if bits[pair_index(u, v, n)] != expected:
            raise NoWitness("vertex set is not a clique/independent set of the stated kind")
    out = BitString(expected)
    for v in vs:
        out += fixed_length_encode(v, n)
    rest = "".join(
        bits[pair_index(i, j, n)]
        for i, j in combinations(range(n), 2)
        if not (i in inside and j in inside)
    )
    return out + rest


def clique_decode(c: BitString | str, n: int, t: int) -> tuple[int, BitString, tuple[int, ...]]:
    """Returns (flag, adjacency, vertices)."""
    r = BitReader(c)
    flag = r.take_bit()
    vs = tuple(fixed_length_read(r, n) for _ in range(t))
    if len(set(vs)) != t or list(vs) != sorted(vs):
        raise DecodeError("vertex field is not a sorted t-set")
    inside = set(vs)
    out = []
    for i, j in combinations(range(n), 2):
        if i in inside and j in inside:
            out.append("1" if flag else "0")
        else:
            out.append(str(r.take_bit()))
    r.expect_end()
    return flag, BitString("".join(out)), vs


# ---------------------------------------------------------------------------
# Insertion sort swap profiles and the permutation codec.


@dataclass(frozen=True)
class SwapProfile:
    """Swap counts (m_2, ..., m_n) of one insertion-sort execution."""

    counts: tuple[int, ...]  # counts[i - 2] == m_i

    def __post_init__(self):
        for i, m in enumerate(self.counts, start=2):
            if not 0 <= m <= i - 1:
                raise ValueError(f"m_{i} = {m} outside [0, {i - 1}]")

    @property
    def n(self) -> int:
        return len(self.counts) + 1

    @property
    def total(self) -> int:
        return sum(self.counts)


def insertion_sort_profile(sigma: Sequence[int]) -> SwapProfile:
    """Run insertion sort on a permutation of {1..n}, recording the swap
    count of each outer iteration.  The total is the inversion count."""
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("input is not a permutation of {1..n}")
    a = list(sigma)
    counts = []
    for i in range(2, n + 1):
        j = i
        m = 0
        while j > 1 and a[j - 2] > a[j - 1]:
            a[j - 2], a[j - 1] = a[j - 1], a[j - 2]
            j -= 1
            m += 1
        counts.append(m)
    return SwapProfile(tuple(counts))


def insertion_sort_reconstruct(profile: SwapProfile) -> tuple[int, ...]:
    """Inverse of insertion_sort_profile: replay the swaps backwards from
    the identity permutation."""
    n = profile.n
    a = list(range(1, n + 1))
    for i in range(n, 1, -1):
        m = profile.counts[i - 2]
        for j in range(i - m + 1, i + 1):
            a[j - 2], a[j - 1] = a[j - 1], a[j - 2]
    return tuple(a)


def composition_rank(parts: Sequence[int]) -> int:
    """Colex rank of a composition of m into q nonnegative parts, via the
    stars-and-bars bijection with (q-1)-subsets of {0..m+q-2}."""
    q = len(parts)
    if q == 0:
        return 0
    m = sum(parts)
    acc, dots = 0, []
    for j in range(q - 1):
        acc += parts[j]
        dots.append(acc + j)
    return subset_rank(m + q - 1, dots)


def composition_unrank(m: int, q: int, rank: int) -> tuple[int, ...]:
    if q == 0:
        if m != 0 or rank != 0:
            raise ValueError("empty composition must have m = 0, rank = 0")
        return ()
    dots = subset_unrank(m + q - 1, q - 1, rank)
    parts, prev = [], 0
    for j, d in enumerate(dots):
        parts.append(d - j - prev)
        prev = d - j
    parts.append(m - prev)
    return tuple(parts)


def inssort_codeword_length(n: int, m: int) -> int:
    if n <= 1:
        return 0
    return fixed_length_width(n * n) + fixed_length_width(math.comb(m + n - 2, n - 2))


def inssort_encode(sigma: Sequence[int]) -> BitString:
    """Total code for permutations: the swap total m (as an index below n^2)
    followed by the rank of the profile among compositions of m."""
    profile = insertion_sort_profile(sigma)
    n = profile.n
    if n <= 1:
        return BitString()
    m = profile.total
    out = fixed_length_encode(m, n * n)
    count = math.comb(m + n - 2, n - 2)
    out += fixed_length_encode(composition_rank(profile.counts), count)
    return out


def inssort_decode(c: BitString | str, n: int) -> tuple[int, ...]:
    if n <= 1:
        r = BitReader(c)
        r.expect_end()
        return tuple(range(1, n + 1))
    r = BitReader(c)
    m = fixed_length_read(r, n * n)
    count = math.comb(m + n - 2, n - 2)
    rank = fixed_length_read(r, count)
    r.expect_end()
    counts = composition_unrank(m, n - 1, rank)
    return insertion_sort_reconstruct(SwapProfile(counts))
