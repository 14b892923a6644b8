"""Probability boxes: pointwise CDF bounds with event and expectation semantics.

A p-box is a pair of tabulated CDFs with ``lower_cdf <= upper_cdf``
pointwise. The pointwise-lower bound is the stochastically larger
distribution and vice versa. Expectation bounds are approximated by slicing
the probability axis into n bands: band i spans from the (i-1)/n quantile of
the pointwise-higher CDF to the i/n quantile of the pointwise-lower CDF,
covering every quantile any member distribution can take at those levels.
Averaging the per-band infima (suprema) of the gamble yields a lower (upper)
expectation that is coherent for every gamble and converges monotonically
under band refinement.

A literal mode is kept for comparison: it pairs the infimum sum with the
quantile intervals of the pointwise-lower CDF and the supremum sum with
those of the pointwise-higher CDF. That pairing can invert the bounds
(lower > upper) for decreasing gambles on well-separated boxes, which is
why it is not the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Gamble, TabulatedCDF, ValidationError
from .interval import IntervalModel


@dataclass(frozen=True)
class PBox:
    """Pointwise-ordered CDF pair bounding a set of distribution functions."""

    lower_cdf: TabulatedCDF
    upper_cdf: TabulatedCDF

    def __post_init__(self):
        knots = np.union1d(self.lower_cdf.xs, self.upper_cdf.xs)
        lo = self.lower_cdf.evaluate(knots)
        hi = self.upper_cdf.evaluate(knots)
        crossing = np.nonzero(lo > hi + 1e-9)[0]
        if crossing.size:
            x = knots[crossing[0]]
            raise ValidationError(
                f"CDF bounds cross at x = {x:.9g}: lower bound {lo[crossing[0]]:.9g} "
                f"exceeds upper bound {hi[crossing[0]]:.9g}"
            )

    def support(self) -> tuple[float, float]:
        """Hull of both tabulated knot ranges."""
        return (
            min(self.lower_cdf.xs[0], self.upper_cdf.xs[0]),
            max(self.lower_cdf.xs[-1], self.upper_cdf.xs[-1]),
        )

    def event_lower_probability(self, s: float) -> float:
        """Lower probability of the event "outcome <= s"."""
        return self.lower_cdf.evaluate(s)

    def event_upper_probability(self, s: float) -> float:
        """Upper probability of the event "outcome <= s"."""
        return self.upper_cdf.evaluate(s)

    def upper_tail_lower_probability(self, r: float) -> float:
        """Lower probability of the event "outcome > r"."""
        return 1.0 - self.upper_cdf.evaluate(r)

    def event_union_lower(self, cut_points: Sequence[float]) -> float:
        """Lower probability of a union of intervals given by an odd cut sequence.

        Cuts x1 < x2 < ... < x(2n+1) describe the event
        [support min, x1] union (x2, x3] union ... union (x2n, x2n+1].
        """
        cuts = np.asarray(cut_points, dtype=float)
        if cuts.ndim != 1 or cuts.size % 2 == 0:
            raise ValidationError("cut points must be a flat sequence of odd length")
        if cuts.size > 1 and not np.all(np.diff(cuts) > 0):
            raise ValidationError("cut points must be strictly increasing")
        total = self.lower_cdf.evaluate(cuts[0])
        for k in range(1, (cuts.size - 1) // 2 + 1):
            gain = self.lower_cdf.evaluate(cuts[2 * k]) - self.upper_cdf.evaluate(
                cuts[2 * k - 1]
            )
            total += max(0.0, gain)
        return float(min(max(total, 0.0), 1.0))

    def discretize(self, n: int) -> "PBoxDiscretization":
        """Quantile intervals of both bounds at n evenly spaced probability levels."""
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError("partition count must be a positive integer")
        levels = [i / n for i in range(n + 1)]
        smaller = [self.upper_cdf.quantile(p) for p in levels]  # stochastically smaller
        larger = [self.lower_cdf.quantile(p) for p in levels]  # stochastically larger
        return PBoxDiscretization(
            n=int(n),
            lower_intervals=tuple(zip(smaller[:-1], smaller[1:])),
            upper_intervals=tuple(zip(larger[:-1], larger[1:])),
        )

    def _bands(self, n: int, literal: bool, for_upper: bool) -> list[tuple[float, float]]:
        d = self.discretize(n)
        if literal:
            return list(d.upper_intervals if not for_upper else d.lower_intervals)
        return [
            (d.lower_intervals[i][0], d.upper_intervals[i][1]) for i in range(d.n)
        ]

    def _check_coverage(self, g: Gamble):
        if g.domain_kind != "real-grid":
            raise ValidationError("p-box expectation bounds need a real-grid gamble")
        lo, hi = self.support()
        if g.grid[0] > lo + 1e-12 or g.grid[-1] < hi - 1e-12:
            raise ValidationError(
                f"gamble grid [{g.grid[0]}, {g.grid[-1]}] does not cover "
                f"the p-box support [{lo}, {hi}]"
            )

    def lower_expectation(self, g: Gamble, n: int = 1000, literal: bool = False) -> float:
        """Average of per-band gamble infima over an n-band discretization."""
        self._check_coverage(g)
        bands = self._bands(n, literal, for_upper=False)
        total = sum(IntervalModel(a, b).lower_expectation(g) for a, b in bands)
        return total / len(bands)

    def upper_expectation(self, g: Gamble, n: int = 1000, literal: bool = False) -> float:
        """Average of per-band gamble suprema over an n-band discretization."""
        self._check_coverage(g)
        bands = self._bands(n, literal, for_upper=True)
        total = sum(IntervalModel(a, b).upper_expectation(g) for a, b in bands)
        return total / len(bands)

    def convergence_report(
        self, g: Gamble, ns: Sequence[int], literal: bool = False
    ) -> list[tuple[int, float, float]]:
        """Expectation bounds for an increasing sweep of band counts."""
        ns = list(ns)
        if not ns:
            raise ValidationError("need at least one partition count")
        if any(int(n) != n or n < 1 for n in ns):
            raise ValidationError("partition counts must be positive integers")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValidationError("partition counts must be strictly increasing")
        return [
            (
                int(n),
                self.lower_expectation(g, int(n), literal),
                self.upper_expectation(g, int(n), literal),
            )
            for n in ns
        ]


@dataclass(frozen=True)
class PBoxDiscretization:
    """Per-band quantile intervals of the two bounds.

    ``lower_intervals`` come from the stochastically smaller bound (the
    pointwise-higher CDF) and feed the lower expectation; ``upper_intervals``
    come from the stochastically larger bound (the pointwise-lower CDF) and
    feed the upper expectation.
    """

    n: int
    lower_intervals: tuple[tuple[float, float], ...]
    upper_intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for fam in (self.lower_intervals, self.upper_intervals):
            if len(fam) != self.n:
                raise ValidationError("need exactly one interval per band")
            lefts = [a for a, _ in fam]
            if any(b < a for a, b in fam):
                raise ValidationError("band intervals must not be reversed")
            if any(y < x for x, y in zip(lefts, lefts[1:])):
                raise ValidationError("band left endpoints must be non-decreasing")
