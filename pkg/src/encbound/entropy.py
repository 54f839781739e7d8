"""Binary entropy, its two closed-form upper bounds, KL divergence, and
Stirling-type brackets on log-factorials and log-binomials.

All logarithms are base 2; results are in bits.
"""

from __future__ import annotations

import math

LOG2_E = math.log2(math.e)


def binary_entropy(alpha: float) -> float:
    """H(alpha) = alpha log(1/alpha) + (1-alpha) log(1/(1-alpha))."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    return alpha * math.log2(1 / alpha) + (1 - alpha) * math.log2(1 / (1 - alpha))


def entropy_bound_near_zero(alpha: float) -> float:
    """Upper bound alpha log(1/alpha) + alpha log e >= H(alpha).

    Tight for alpha close to zero.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    return alpha * math.log2(1 / alpha) + alpha * LOG2_E


def entropy_bound_near_half(eps: float) -> float:
    """Upper bound 1 - eps^2 / (2 ln 2) > H((1 + eps) / 2)."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly inside (0, 1)")
    return 1 - eps * eps / (2 * math.log(2))


def kl_divergence(p: float, q: float) -> float:
    """D(p || q) between Bernoulli(p) and Bernoulli(q), in bits.

    Uses the 0 log 0 = 0 convention for p in {0, 1}.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if not 0 < q < 1:
        raise ValueError("q must lie strictly inside (0, 1)")
    total = 0.0
    if p > 0:
        total += p * math.log2(p / q)
    if p < 1:
        total += (1 - p) * math.log2((1 - p) / (1 - q))
    return total


# Direct summation of log2(i) up to this n; beyond, the Stirling midpoint.
_EXACT_LOG_FACTORIAL_LIMIT = 10**6


def _log2_factorial(n: int) -> float:
    if n <= _EXACT_LOG_FACTORIAL_LIMIT:
        return math.fsum(math.log2(i) for i in range(2, n + 1))
    return _stirling_base(n) + LOG2_E * (1 / (12 * n) + 1 / (12 * n + 1)) / 2


def _stirling_base(n: int) -> float:
    return n * math.log2(n) - n * LOG2_E + 0.5 * math.log2(2 * math.pi * n)


def log_factorial_bound(n: int) -> tuple[float, float, float]:
    """(lower, upper, point) bracketing log2(n!).

    The point value is the exact sum of log2(i).  The bracket is the Stirling
    form n log n - n log e + (1/2) log(2 pi n) with Robbins' correction
    terms exp(1/(12n+1)) <= n!/stirling <= exp(1/(12n)).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (0.0, 0.0, 0.0)
    point = _log2_factorial(n)
    base = _stirling_base(n)
    lower = base + LOG2_E / (12 * n + 1)
    upper = base + LOG2_E / (12 * n)
    return (lower, upper, point)


def log_binomial(n: int, k: int) -> float:
    """Exact log2 C(n, k) by summation."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    k = min(k, n - k)
    return math.fsum(
        math.log2(n - i) - math.log2(i + 1) for i in range(k)
    )


def log_binomial_bound(n: int, k: int) -> tuple[float, float, float]:
    """(exact, entropy_bound, loose_bound) with
    exact = log2 C(n,k) <= n H(k/n) <= k log(n/k) + k log e."""
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n - 1")
    exact = log_binomial(n, k)
    entropy_bound = n * binary_entropy(k / n)
    loose_bound = k * math.log2(n / k) + k * LOG2_E
    return (exact, entropy_bound, loose_bound)
