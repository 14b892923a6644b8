"""The vacuous interval model: expectation bounds are gamble extrema.

This is the least informative uncertainty model. Knowing only that the
outcome lies in [a, b], the lower expectation of a payoff is its infimum
over the interval and the upper expectation its supremum. For tabulated
piecewise-linear gambles both are attained at grid knots or at the
interval endpoints, so an exhaustive scan is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOLERANCE, Gamble, ValidationError


@dataclass(frozen=True)
class IntervalModel:
    """A closed real interval [lower, upper] treated as a vacuous prevision."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ValidationError("interval endpoints must be finite")
        if self.lower > self.upper:
            raise ValidationError(f"interval [{self.lower}, {self.upper}] is empty")

    def _candidates(self, g: Gamble) -> np.ndarray:
        if g.domain_kind != "real-grid":
            raise ValidationError("interval expectation bounds need a real-grid gamble")
        slack = DEFAULT_TOLERANCE.abs_tol
        if self.lower < g.grid[0] - slack or self.upper > g.grid[-1] + slack:
            raise ValidationError(
                f"interval [{self.lower}, {self.upper}] outside gamble domain "
                f"[{g.grid[0]}, {g.grid[-1]}]"
            )
        a = min(max(self.lower, g.grid[0]), g.grid[-1])
        b = min(max(self.upper, g.grid[0]), g.grid[-1])
        inside = g.values[(g.grid > a) & (g.grid < b)]
        ends = np.array([g.evaluate(a), g.evaluate(b)])
        return np.concatenate([ends, inside])

    def lower_expectation(self, g: Gamble) -> float:
        """Infimum of the gamble over the interval (exact for the tabulation)."""
        return float(self._candidates(g).min())

    def upper_expectation(self, g: Gamble) -> float:
        """Supremum of the gamble over the interval (exact for the tabulation)."""
        return float(self._candidates(g).max())
