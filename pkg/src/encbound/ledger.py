"""Executable encoding lemmas: symbolic real-valued length functions with
per-component Kraft accounting, and the uniform / non-uniform tail bounds.

A :class:`LengthFunction` is a list of components, each contributing a bit
cost for one coordinate of a product domain.  Kraft sums are tracked per
component in closed form (exact rationals where possible) and multiply
under composition, so infinite and non-integer lengths are representable
without materializing any tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .bitcodes import FiniteDensity

INF = math.inf


@dataclass(frozen=True)
class Component:
    """One coordinate of a length function.

    ``cost`` is either a constant number of bits applied to every outcome of
    the coordinate, or a mapping outcome -> bits.  ``kraft`` is the closed
    form value of sum 2^(-cost) over the coordinate's domain.
    """

    label: str
    cost: float | Mapping
    kraft: Fraction | float

    def bits(self, outcome=None) -> float:
        if isinstance(self.cost, Mapping):
            if outcome not in self.cost:
                return INF  # not encoded: |C(x)| = infinity
            return self.cost[outcome]
        return self.cost


@dataclass(frozen=True)
class LengthFunction:
    """A real-valued codeword-length function over a product domain."""

    components: tuple[Component, ...] = ()

    @classmethod
    def empty(cls) -> "LengthFunction":
        """The zero-length function on a single-outcome domain (identity
        element of composition)."""
        return cls(())

    @classmethod
    def fixed(cls, domain_size: float, label: str = "fixed") -> "LengthFunction":
        """Constant cost log2(m) over a domain of m outcomes; Kraft sum 1."""
        if domain_size <= 0:
            raise ValueError("domain size must be positive")
        return cls((Component(label, math.log2(domain_size), Fraction(1)),))

    @classmethod
    def constant(cls, bits: float, domain_size: int, label: str = "const") -> "LengthFunction":
        """Constant cost over m outcomes; Kraft sum m * 2^(-bits)."""
        if domain_size < 1:
            raise ValueError("domain size must be >= 1")
        k: Fraction | float
        if bits == int(bits):
            k = domain_size * Fraction(1, 2 ** int(bits))
        else:
            k = domain_size * 2.0 ** -bits
        return cls((Component(label, float(bits), k),))

    def compose(self, other: "LengthFunction") -> "LengthFunction":
        """Product-domain sum (l + l')(x, x') = l(x) + l'(x'); the Kraft sum
        of the result is the product of the component sums."""
        return LengthFunction(self.components + other.components)

    def __add__(self, other: "LengthFunction") -> "LengthFunction":
        return self.compose(other)

    def total(self, *outcomes) -> float:
        """Total bits for one outcome descriptor per component.

        Constant-cost components may be skipped by passing fewer outcomes
        than components only when every component is constant-cost.
        """
        if outcomes and len(outcomes) != len(self.components):
            raise ValueError(
                f"expected {len(self.components)} outcomes, got {len(outcomes)}"
            )
        if not outcomes:
            if any(isinstance(c.cost, Mapping) for c in self.components):
                raise ValueError("outcome-dependent components need outcomes")
            return sum(c.bits() for c in self.components)
        return sum(c.bits(o) for c, o in zip(self.components, outcomes))

    def kraft_sum(self) -> Fraction | float:
        """Product of the per-component closed-form Kraft sums."""
        total: Fraction | float = Fraction(1)
        for c in self.components:
            total = total * c.kraft
        return total

    def satisfies_kraft(self, tol: float = 1e-9) -> bool:
        return float(self.kraft_sum()) <= 1 + tol


def compose(l1: LengthFunction, l2: LengthFunction) -> LengthFunction:
    return l1.compose(l2)


def density_lengths(p: FiniteDensity, label: str = "density") -> LengthFunction:
    """Real-valued lengths log2(1/p_x), no ceiling; Kraft sum exactly 1
    because the masses sum to 1."""
    cost = {x: math.log2(1 / m) for x, m in zip(p.support, p.mass)}
    return LengthFunction((Component(label, cost, Fraction(1)),))


@dataclass(frozen=True)
class TailBound:
    """A theorem instance: the derived threshold and the 2^(-s) bound."""

    theorem: str
    params: dict = field(default_factory=dict)
    threshold: float | None = None
    savings_s: float = 0.0
    probability: float = 1.0
    asymptotic: bool = False
    clamped: bool = False

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": dict(self.params),
            "threshold": self.threshold,
            "savings_s": self.savings_s,
            "probability": self.probability,
            "asymptotic": self.asymptotic,
            "clamped": self.clamped,
        }


def uniform_tail(universe_log2: float, code_length: float) -> TailBound:
    """Pr{|C(x)| <= log|X| - s} <= 2^(-s) for x uniform over X.

    A vacuous query (code_length > universe_log2) clamps to probability 1.
    """
    if universe_log2 < 0:
        raise ValueError("universe_log2 must be nonnegative")
    return nonuniform_tail(universe_log2, code_length, theorem="uniform")


def nonuniform_tail(
    log_inv_px: float, code_length: float, theorem: str = "nonuniform"
) -> TailBound:
    """Pr{|C(x)| <= log(1/p_x) - s} <= 2^(-s) for x drawn with mass p_x."""
    if log_inv_px < 0:
        raise ValueError("log(1/p_x) must be nonnegative")
    s = log_inv_px - code_length
    prob = 2.0 ** -s
    clamped = prob > 1.0
    return TailBound(
        theorem=theorem,
        params={"log_inv_px": log_inv_px, "code_length": code_length},
        threshold=code_length,
        savings_s=s,
        probability=min(1.0, prob),
        clamped=clamped,
    )
