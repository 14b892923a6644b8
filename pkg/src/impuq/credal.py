"""Probability intervals and the credal sets they cut from the simplex.

A credal set here is the polytope of probability vectors ``y`` with
``lowers[k] <= y[k] <= uppers[k]`` and ``sum(y) = 1``. The module provides
feasibility checking, reachability tightening, exact vertex enumeration,
linear expectation bounds, and upper/lower Shannon entropy, which double as
total and aleatoric uncertainty with their gap measuring the epistemic part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOLERANCE,
    ConvergenceError,
    Decomposition,
    DiscreteDistribution,
    Gamble,
    Tolerance,
    ValidationError,
    shannon_entropy,
)

# Combinatorial cap: vertex candidates grow as C * 2^(C-1).
MAX_VERTEX_CLASSES = 16

_WATERFILL_ITERS = 100


@dataclass(frozen=True)
class ProbabilityIntervals:
    """Per-class probability bounds ``0 <= lowers[k] <= uppers[k] <= 1``."""

    lowers: np.ndarray
    uppers: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lowers, dtype=float)
        up = np.asarray(self.uppers, dtype=float)
        if lo.ndim != 1 or up.ndim != 1 or lo.size != up.size:
            raise ValidationError("lowers and uppers must be 1-d sequences of equal length")
        if lo.size < 1:
            raise ValidationError("need at least one class")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(up))):
            raise ValidationError("bounds must be finite")
        if np.any(lo < -1e-12) or np.any(up > 1.0 + 1e-12):
            raise ValidationError("bounds must lie in [0, 1]")
        if np.any(up - lo < -1e-12):
            raise ValidationError("each lower bound must not exceed its upper bound")
        object.__setattr__(self, "lowers", np.clip(lo, 0.0, 1.0))
        object.__setattr__(self, "uppers", np.clip(up, 0.0, 1.0))

    @property
    def class_count(self) -> int:
        return int(self.lowers.size)

    def is_proper(self, tol: float = DEFAULT_TOLERANCE.abs_tol) -> bool:
        """True iff the induced credal set is non-empty: sum of lowers <= 1 <= sum of uppers."""
        return bool(self.lowers.sum() <= 1.0 + tol and self.uppers.sum() >= 1.0 - tol)

    def reachable(self, tol: float = DEFAULT_TOLERANCE.abs_tol) -> "ProbabilityIntervals":
        """Tighten the bounds so every endpoint is attained by a member distribution.

        The induced credal set is unchanged:
        lowers'[k] = max(lowers[k], 1 - sum of other uppers),
        uppers'[k] = min(uppers[k], 1 - sum of other lowers).
        """
        if not self.is_proper(tol):
            raise ValidationError(
                f"intervals cut an empty credal set: need sum of lower bounds "
                f"({self.lowers.sum():.9g}) <= 1 <= sum of upper bounds "
                f"({self.uppers.sum():.9g})"
            )
        lo, up = self.lowers, self.uppers
        new_lo = np.maximum(lo, 1.0 - (up.sum() - up))
        new_up = np.minimum(up, 1.0 - (lo.sum() - lo))
        return ProbabilityIntervals(np.clip(new_lo, 0.0, 1.0), np.clip(new_up, 0.0, 1.0))


def enumerate_vertices(
    intervals: ProbabilityIntervals, tol: float = DEFAULT_TOLERANCE.abs_tol
) -> list[DiscreteDistribution]:
    """All extreme points of the interval-constrained simplex polytope.

    Every vertex has at most one coordinate strictly between its bounds, so
    candidates are built by fixing all other coordinates at a bound and
    solving the remaining one from the sum constraint. Duplicates are dropped
    within ``tol`` and the result is sorted lexicographically.
    """
    c = intervals.class_count
    if c > MAX_VERTEX_CLASSES:
        raise ValidationError(
            f"vertex enumeration supports at most {MAX_VERTEX_CLASSES} classes, got {c}"
        )
    reach = intervals.reachable(tol)
    lo, up = reach.lowers, reach.uppers
    if c == 1:
        return [DiscreteDistribution(np.array([1.0]))]

    masks = np.arange(2 ** (c - 1), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(c - 1)) & 1).astype(bool)
    rows = []
    for k in range(c):
        others = np.array([j for j in range(c) if j != k])
        fixed = np.where(bits, up[others], lo[others])
        free = 1.0 - fixed.sum(axis=1)
        ok = (free >= lo[k] - tol) & (free <= up[k] + tol)
        if not ok.any():
            continue
        cand = np.empty((int(ok.sum()), c))
        cand[:, others] = fixed[ok]
        cand[:, k] = np.clip(free[ok], lo[k], up[k])
        rows.append(cand)
    if not rows:
        raise ValidationError("no feasible vertex found; intervals are inconsistent")

    kept: list[np.ndarray] = []
    for row in np.vstack(rows):
        if all(np.max(np.abs(row - seen)) > tol for seen in kept):
            kept.append(row)
    kept.sort(key=tuple)
    return [DiscreteDistribution(v) for v in kept]


@dataclass(frozen=True)
class EntropyBounds:
    """Extremes of Shannon entropy over a credal set, with their arguments."""

    upper: float
    lower: float
    argmax: DiscreteDistribution
    argmin: DiscreteDistribution

    def __post_init__(self):
        tol = DEFAULT_TOLERANCE.abs_tol
        cap = math.log(self.argmax.class_count)
        if not (-tol <= self.lower <= self.upper + tol and self.upper <= cap + tol):
            raise ValidationError("entropy bounds must satisfy 0 <= lower <= upper <= ln C")


@dataclass(frozen=True)
class CredalSet:
    """A non-empty interval-induced credal set with its extreme points cached.

    Construct through :meth:`from_intervals`, which checks feasibility,
    tightens the bounds to reachability, and enumerates vertices eagerly.
    """

    intervals: ProbabilityIntervals
    vertices: tuple[DiscreteDistribution, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValidationError("credal set needs at least one vertex")

    @classmethod
    def from_intervals(
        cls, intervals: ProbabilityIntervals, tolerance: Tolerance = DEFAULT_TOLERANCE
    ) -> "CredalSet":
        if not intervals.is_proper(tolerance.abs_tol):
            raise ValidationError(
                f"intervals cut an empty credal set: need sum of lower bounds "
                f"({intervals.lowers.sum():.9g}) <= 1 <= sum of upper bounds "
                f"({intervals.uppers.sum():.9g})"
            )
        reach = intervals.reachable(tolerance.abs_tol)
        verts = enumerate_vertices(reach, tolerance.abs_tol)
        return cls(intervals=reach, vertices=tuple(verts))

    @classmethod
    def precise(cls, probs) -> "CredalSet":
        """The singleton credal set of one distribution."""
        p = DiscreteDistribution(np.asarray(probs, dtype=float)).probs
        return cls.from_intervals(ProbabilityIntervals(p, p))

    @classmethod
    def vacuous(cls, class_count: int) -> "CredalSet":
        """The full probability simplex on ``class_count`` labels."""
        return cls.from_intervals(
            ProbabilityIntervals(np.zeros(class_count), np.ones(class_count))
        )

    @property
    def class_count(self) -> int:
        return self.intervals.class_count

    def _check_gamble(self, g: Gamble) -> np.ndarray:
        if g.domain_kind != "finite-labels":
            raise ValidationError("credal expectations need a finite-labels gamble")
        if g.values.size != self.class_count:
            raise ValidationError(
                f"gamble has {g.values.size} labels, credal set has {self.class_count}"
            )
        return g.values

    def _greedy_min(self, payoffs: np.ndarray) -> float:
        # Fill as much mass as possible onto the cheapest labels; payoff ties
        # are broken by ascending label index (stable sort).
        lo, up = self.intervals.lowers, self.intervals.uppers
        y = lo.copy()
        budget = 1.0 - lo.sum()
        for k in np.argsort(payoffs, kind="stable"):
            if budget <= 0.0:
                break
            step = min(up[k] - lo[k], budget)
            y[k] += step
            budget -= step
        return float(y @ payoffs)

    def lower_expectation(self, g: Gamble) -> float:
        """Minimum of the linear expectation over the credal set (greedy, exact)."""
        return self._greedy_min(self._check_gamble(g))

    def upper_expectation(self, g: Gamble) -> float:
        """Maximum of the linear expectation; conjugate of the lower bound."""
        return -self._greedy_min(-self._check_gamble(g))

    def entropy_bounds(self, tolerance: Tolerance = DEFAULT_TOLERANCE) -> EntropyBounds:
        """Upper and lower Shannon entropy over the credal set (natural log).

        The maximum is the clipped-uniform water-filling solution: pushing
        every coordinate toward a common level t, clipped into its bounds,
        with t chosen by bisection so the mass sums to 1. This satisfies the
        KKT conditions of the concave program, hence is the global maximum.
        The minimum of a concave function over a polytope is attained at a
        vertex, so it is read off the enumerated extreme points.
        """
        lo, up = self.intervals.lowers, self.intervals.uppers
        t_lo, t_hi = 0.0, 1.0
        for _ in range(_WATERFILL_ITERS):
            t = 0.5 * (t_lo + t_hi)
            if np.clip(t, lo, up).sum() < 1.0:
                t_lo = t
            else:
                t_hi = t
        y_max = np.clip(0.5 * (t_lo + t_hi), lo, up)
        if abs(y_max.sum() - 1.0) > tolerance.opt_tol:
            raise ConvergenceError(
                "entropy maximisation failed to balance probability mass within "
                f"{tolerance.opt_tol:g} after {_WATERFILL_ITERS} bisection steps",
                best=y_max,
            )
        argmax = DiscreteDistribution(y_max)
        h_max = shannon_entropy(y_max)

        h_min = math.inf
        argmin = self.vertices[0]
        for vertex in self.vertices:
            h = shannon_entropy(vertex.probs)
            if h < h_min:
                h_min = h
                argmin = vertex
        h_max = max(h_max, h_min)  # guard against rounding inversion
        return EntropyBounds(upper=h_max, lower=h_min, argmax=argmax, argmin=argmin)

    def decompose(self, tolerance: Tolerance = DEFAULT_TOLERANCE) -> Decomposition:
        """Entropy-based split: total = upper entropy, aleatoric = lower entropy,
        epistemic = their gap."""
        eb = self.entropy_bounds(tolerance)
        return Decomposition(
            tu=eb.upper,
            au=eb.lower,
            eu=max(eb.upper - eb.lower, 0.0),
            rule="credal-entropy",
        )
