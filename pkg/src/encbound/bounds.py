"""Closed-form threshold and tail-probability calculators, one per analyzed
random process.

Non-asymptotic results carry ``asymptotic=False`` and are exact statements;
results whose statement hides unspecified constants expose those constants
as keyword parameters with documented defaults and carry ``asymptotic=True``
so downstream checks never treat them as exact.  Vacuous queries clamp the
probability to 1 (and set ``clamped``) rather than raising, so parameter
sweeps never abort.
"""

from __future__ import annotations

import math

from .entropy import LOG2_E, binary_entropy, kl_divergence
from .ledger import TailBound

E = math.e


def _bound(theorem: str, s: float, threshold, params: dict, asymptotic: bool = False) -> TailBound:
    prob = 2.0 ** -s
    return TailBound(
        theorem=theorem,
        params=params,
        threshold=threshold,
        savings_s=s,
        probability=min(1.0, prob),
        asymptotic=asymptotic,
        clamped=prob > 1.0,
    )


def runs_threshold(n: int, s: float) -> TailBound:
    """Run length t = ceil(log n + s) occurs with probability <= 2^(-s)."""
    if n < 2 or s < 0:
        raise ValueError("need n >= 2, s >= 0")
    t = math.ceil(math.log2(n) + s)
    return _bound("runs", s, t, {"n": n, "s": s})


def ramsey_threshold(n: int, s: float) -> TailBound:
    """Clique or independent set of size t = ceil(3 log n + sqrt(2s)) in
    G(n, 1/2) with probability <= 2^(-s)."""
    if n < 3:
        raise ValueError("need n >= 3")
    if s < 1:
        raise ValueError("need s >= 1")
    t = math.ceil(3 * math.log2(n) + math.sqrt(2 * s))
    return _bound("ramsey", s, t, {"n": n, "s": s})


def ramsey_intro_variant(n: int) -> TailBound:
    """The headline shape: t = ceil(4 log n) with probability <= 1/n^(log n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    s = math.log2(n) ** 2
    t = math.ceil(4 * math.log2(n))
    return _bound("ramsey-intro", s, t, {"n": n})


def urns_threshold(n: int, s: float) -> TailBound:
    """Smallest t >= 3 with t log(t/e) >= log n + s; some urn exceeds t
    balls with probability <= 2^(-s)."""
    if n < 2 or s < 0:
        raise ValueError("need n >= 2, s >= 0")
    target = math.log2(n) + s
    t = 3
    while t * math.log2(t / E) < target:
        t += 1
    return _bound("urns", s, t, {"n": n, "s": s})


def linear_probing_threshold(c: float, s: float) -> TailBound:
    """Smallest t >= 2 with (t-1) log(c/e) - log t - 3 >= s; the block
    containing a fixed key has size exactly t with probability <= 2^(-s).

    Valid only for table load factor c > e.
    """
    if c <= E:
        raise ValueError("the bound requires c > e")
    if s < 0:
        raise ValueError("need s >= 0")
    t = 2
    while (t - 1) * math.log2(c / E) - math.log2(t) - 3 < s:
        t += 1
    return _bound("linear-probing", s, t, {"c": c, "s": s})


def linear_probing_expected_search(c: float, t0: int = 1, tol: float = 1e-12) -> float:
    """Numeric value of the convergent series t0 + sum (t + t0)(c/e)^(-t/2)
    bounding the expected search time; requires c > e."""
    if c <= E:
        raise ValueError("the series converges only for c > e")
    q = (c / E) ** -0.5
    total, t = float(t0), 1
    while True:
        term = (t + t0) * q**t
        total += term
        if term < tol:
            return total
        t += 1


def cuckoo_tails(n: int, s: float, k1: float = 4.0, k2: float = 1.0) -> TailBound:
    """Edge-simple path of length >= s + log n + k1 with probability
    <= 2^(-s); insertion failure (rehash) with probability <= k2/n.

    k1 and k2 stand in for unspecified asymptotic constants.
    """
    if n < 2 or s < 0:
        raise ValueError("need n >= 2, s >= 0")
    threshold = s + math.log2(n) + k1
    return TailBound(
        theorem="cuckoo",
        params={"n": n, "s": s, "k1": k1, "k2": k2,
                "failure_bound": min(1.0, k2 / n)},
        threshold=threshold,
        savings_s=s,
        probability=min(1.0, 2.0 ** -s),
        asymptotic=True,
    )


def two_choice_thresholds(n: int, c: float, s: float, k: float = 0.0, d: float = 3.0) -> TailBound:
    """Component threshold (s + log n + k)/log(c/8) and max-load threshold
    ceil(log log n) + d for 2-choice hashing into cn urns; requires c > 8.

    k and d stand in for unspecified asymptotic constants.
    """
    if c <= 8:
        raise ValueError("the bound requires c > 8")
    if n < 4:
        raise ValueError("need n >= 4")
    component = (s + math.log2(n) + k) / math.log2(c / 8)
    maxload = math.ceil(math.log2(math.log2(n))) + d
    return TailBound(
        theorem="two-choice",
        params={"n": n, "c": c, "s": s, "k": k, "d": d,
                "component_threshold": component,
                "maxload_threshold": maxload},
        threshold=maxload,
        savings_s=s,
        probability=min(1.0, 2.0 ** -s),
        asymptotic=True,
    )


EXPANDER_BETA = 1.5 * math.log2(1.5) + 2.5 * LOG2_E


def expander_alpha_threshold() -> float:
    """Largest left-subset fraction for which the expansion argument wins:
    (1/2)^(2 beta), about 0.002."""
    return 0.5 ** (2 * EXPANDER_BETA)


def expander_savings(n: int, k: int, o1: float = 0.0) -> TailBound:
    """Bit savings s(k) = (k/2) log n - (k/2) log k - beta k - 2 log k - o1
    for a size-k violation of (3/2)-expansion in the random 3-left-regular
    bipartite multigraph."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    s = (k / 2) * math.log2(n) - (k / 2) * math.log2(k) \
        - EXPANDER_BETA * k - 2 * math.log2(k) - o1
    return TailBound(
        theorem="expander",
        params={"n": n, "k": k, "o1": o1, "beta": EXPANDER_BETA,
                "alpha_threshold": expander_alpha_threshold()},
        threshold=k,
        savings_s=s,
        probability=min(1.0, 2.0 ** -s),
        asymptotic=True,
        clamped=s < 0,
    )


def inversions_tail(n: int, alpha: float, k_log: float = 0.0) -> TailBound:
    """Probability that a random permutation has at most alpha n^2 - n + 2
    inversions: 2^(n log(alpha e^2) + k_log log n); vacuous at alpha >= 1/e^2."""
    if not 0 < alpha < 1 / E**2:
        raise ValueError("the bound is non-trivial only for 0 < alpha < 1/e^2")
    if n < 2:
        raise ValueError("need n >= 2")
    exponent = n * math.log2(alpha * E**2) + k_log * math.log2(n)
    return TailBound(
        theorem="inversions",
        params={"n": n, "alpha": alpha, "k_log": k_log, "exponent": exponent},
        threshold=alpha * n * n - n + 2,
        savings_s=-exponent,
        probability=min(1.0, 2.0 ** exponent),
        asymptotic=True,
        clamped=exponent > 0,
    )


def records_tail(n: int, c: float, k_loglog: float = 0.0) -> TailBound:
    """Probability of at least c log n records:
    2^(-c (1 - H(1/c)) log n + k_loglog log log n); requires c > 2."""
    if c <= 2:
        raise ValueError("the bound requires c > 2")
    if n < 4:
        raise ValueError("need n >= 4")
    rate = c * (1 - binary_entropy(1 / c))
    exponent = -rate * math.log2(n) + k_loglog * math.log2(math.log2(n))
    return TailBound(
        theorem="records",
        params={"n": n, "c": c, "k_loglog": k_loglog, "rate": rate,
                "exponent": exponent},
        threshold=c * math.log2(n),
        savings_s=-exponent,
        probability=min(1.0, 2.0 ** exponent),
        asymptotic=True,
        clamped=exponent > 0,
    )


def bst_height_constant_check(c: float) -> tuple[float, bool]:
    """Evaluate c (1 - H(1/(c log(4/3)))) and report whether it exceeds 2,
    the condition under which random BSTs have height <= c log n whp."""
    floor = 2 / math.log2(4 / 3)
    if c <= floor:
        raise ValueError(f"need c > 2/log(4/3) = {floor:.6f}")
    lhs = c * (1 - binary_entropy(1 / (c * math.log2(4 / 3))))
    return lhs, lhs > 2


def chernoff_basic(n: int, eps: float) -> TailBound:
    """Pr{n_1(x) <= (1 - eps) n/2} <= e^(-eps^2 n / 2) for uniform x."""
    if eps < 0 or n < 1:
        raise ValueError("need eps >= 0, n >= 1")
    s = eps * eps * n / (2 * math.log(2))
    return _bound("chernoff-basic", s, (1 - eps) * n / 2, {"n": n, "eps": eps})


def chernoff_kl(n: int, p: float, eps: float) -> TailBound:
    """Pr{B <= (p - eps) n} <= 2^(-n D(p - eps || p)) for Binomial(n, p)."""
    if not 0 < p < 1:
        raise ValueError("need 0 < p < 1")
    if not 0 <= eps <= p:
        raise ValueError("need 0 <= eps <= p")
    s = n * kl_divergence(p - eps, p)
    return _bound("chernoff-kl", s, (p - eps) * n, {"n": n, "p": p, "eps": eps})


def percolation_cycle_tail(n: int, p: float, s: float) -> TailBound:
    """A p-subgraph of the sqrt(n) x sqrt(n) torus grid contains a cycle of
    length >= (s + log n)/log(1/(3p)) with probability <= 2^(-s); p < 1/3."""
    root = math.isqrt(n)
    if root * root != n:
        raise ValueError("n must be a perfect square")
    if not 0 < p < 1 / 3:
        raise ValueError("the bound requires 0 < p < 1/3")
    if s < 0:
        raise ValueError("need s >= 0")
    min_length = (s + math.log2(n)) / math.log2(1 / (3 * p))
    return _bound("percolation", s, min_length, {"n": n, "p": p, "s": s})


def triangle_bounds(n: int, c: float, k: float = 1.0) -> TailBound:
    """At p = c/n: no triangle with probability >= 1 - c^3 (exact lower
    bound); at least one triangle with probability >= 1 - 2^(-k c^3)
    (asymptotic, k configurable)."""
    if c <= 0 or n < 3:
        raise ValueError("need c > 0, n >= 3")
    exists_prob = min(1.0, c**3)
    return TailBound(
        theorem="triangles-down",
        params={"n": n, "c": c, "k": k,
                "lower_no_triangle": max(0.0, 1 - c**3),
                "upper_exists_exponent": k * c**3},
        threshold=3,
        savings_s=-math.log2(exists_prob) if exists_prob > 0 else math.inf,
        probability=exists_prob,
        asymptotic=False,
        clamped=c**3 > 1,
    )


def triangle_expected_count(n: int, c: float) -> float:
    """Expected triangle count p^3 C(n,3) at p = (6c)^(1/3)/n; equals
    c - O(1/n)."""
    p = (6 * c) ** (1 / 3) / n
    return p**3 * math.comb(n, 3)


def moser_tail(m: int, s: float) -> TailBound:
    """The resampling solver performs at least ceil(s + m log m) clause
    fixes with probability <= 2^(-s); requires intersection degree
    r < 2^(k-3)."""
    if m < 1 or s < 0:
        raise ValueError("need m >= 1, s >= 0")
    threshold = math.ceil(s + m * math.log2(m)) if m > 1 else math.ceil(s)
    return _bound("moser", s, threshold, {"m": m, "s": s})


def moser_degree_valid(k: int, r: int) -> bool:
    """Strict validity region r < 2^(k-3) of the fix-count theorem."""
    return k >= 3 and r < 2 ** (k - 3)
