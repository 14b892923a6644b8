"""Contamination model: a precise expectation mixed with a vacuous one.

The model blends a probabilistic component (a discrete distribution or a
tabulated CDF) with an interval component. With mixing weight ``epsilon`` on
the interval part, the expectation bounds of a payoff g are

    lower = (1 - epsilon) * E[g] + epsilon * inf g over the interval
    upper = (1 - epsilon) * E[g] + epsilon * sup g over the interval

so the bound width is exactly epsilon times the payoff range. The precise
component must be supported inside the interval, which makes its expectation
dominate the vacuous lower expectation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DiscreteDistribution, Gamble, TabulatedCDF, ValidationError
from .interval import IntervalModel

_SUPPORT_SLACK = 1e-12


@dataclass(frozen=True)
class ContaminationModel:
    """Convex mixture of a precise model and an interval model.

    ``epsilon`` weights the interval (imprecise) part. The closed endpoints
    0 and 1 are accepted by default since they are the precise and vacuous
    models; ``strict=True`` restores the open interval (0, 1).
    """

    epsilon: float
    precise: DiscreteDistribution | TabulatedCDF
    imprecise: IntervalModel
    strict: bool = False

    def __post_init__(self):
        eps = float(self.epsilon)
        if not math.isfinite(eps):
            raise ValidationError("epsilon must be finite")
        if self.strict:
            if not 0.0 < eps < 1.0:
                raise ValidationError(f"epsilon {eps} outside the open interval (0, 1)")
        elif not 0.0 <= eps <= 1.0:
            raise ValidationError(f"epsilon {eps} outside [0, 1]")

        a, b = self.imprecise.lower, self.imprecise.upper
        if isinstance(self.precise, TabulatedCDF):
            lo, hi = self.precise.mass_support()
            if lo < a - _SUPPORT_SLACK or hi > b + _SUPPORT_SLACK:
                raise ValidationError(
                    f"precise support [{lo}, {hi}] not contained in interval [{a}, {b}]"
                )
        elif isinstance(self.precise, DiscreteDistribution):
            carried = np.nonzero(self.precise.probs > _SUPPORT_SLACK)[0]
            if carried.size and (carried[0] < a - _SUPPORT_SLACK or carried[-1] > b + _SUPPORT_SLACK):
                raise ValidationError(
                    f"labels {carried[0]}..{carried[-1]} carry mass outside "
                    f"interval [{a}, {b}]"
                )
        else:
            raise ValidationError(
                "precise component must be a DiscreteDistribution or TabulatedCDF"
            )

    def _label_range(self, g: Gamble) -> np.ndarray:
        """Payoffs of the labels inside the interval (finite-label case)."""
        a, b = self.imprecise.lower, self.imprecise.upper
        lo = max(0, math.ceil(a - _SUPPORT_SLACK))
        hi = min(g.values.size - 1, math.floor(b + _SUPPORT_SLACK))
        if lo > hi:
            raise ValidationError(f"no labels inside interval [{a}, {b}]")
        return g.values[lo : hi + 1]

    def precise_expectation(self, g: Gamble) -> float:
        """Expectation of the gamble under the precise component.

        For a tabulated CDF this is the exact piecewise-linear Stieltjes
        integral over the merged knot set (a trapezoid rule on each segment),
        including any atom at the left support edge.
        """
        if isinstance(self.precise, DiscreteDistribution):
            if g.domain_kind != "finite-labels":
                raise ValidationError("discrete precise model needs a finite-labels gamble")
            if g.values.size != self.precise.probs.size:
                raise ValidationError("gamble and distribution class counts differ")
            return float(self.precise.probs @ g.values)

        if g.domain_kind != "real-grid":
            raise ValidationError("CDF precise model needs a real-grid gamble")
        lo, hi = self.precise.mass_support()
        if lo < g.grid[0] - _SUPPORT_SLACK or hi > g.grid[-1] + _SUPPORT_SLACK:
            raise ValidationError("gamble grid does not cover the precise support")
        knots = np.union1d(self.precise.xs, g.grid)
        knots = knots[(knots >= lo) & (knots <= hi)]
        knots = np.union1d(knots, [lo, hi])
        fs = self.precise.evaluate(knots)
        gs = np.interp(knots, g.grid, g.values)
        total = float(fs[0] * gs[0])  # atom at the left support edge, if any
        if knots.size > 1:
            total += float(np.sum(np.diff(fs) * 0.5 * (gs[:-1] + gs[1:])))
        return total

    def _bounds(self, g: Gamble) -> tuple[float, float, float]:
        exp = self.precise_expectation(g)
        if g.domain_kind == "real-grid":
            inf = self.imprecise.lower_expectation(g)
            sup = self.imprecise.upper_expectation(g)
        else:
            inside = self._label_range(g)
            inf = float(inside.min())
            sup = float(inside.max())
        return exp, inf, sup

    def lower_expectation(self, g: Gamble) -> float:
        exp, inf, _ = self._bounds(g)
        return (1.0 - self.epsilon) * exp + self.epsilon * inf

    def upper_expectation(self, g: Gamble) -> float:
        exp, _, sup = self._bounds(g)
        return (1.0 - self.epsilon) * exp + self.epsilon * sup
