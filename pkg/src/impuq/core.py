"""Shared numeric foundations: gambles, distributions, tabulated CDFs.

Everything here is tabulated rather than symbolic. Payoff functions and CDFs
are stored on finite grids with piecewise-linear interpolation, which makes
every infimum/supremum computed elsewhere in the package exact for the
tabulated representation and cheap to cross-check with brute force.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy


class ImpuqError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(ImpuqError):
    """Invalid input: a broken invariant, an infeasible model, or a domain violation."""


class ParseError(ValidationError):
    """Malformed input file; the message carries the path and line number."""


class ConvergenceError(ImpuqError):
    """An iterative scheme hit its iteration cap; carries the best iterate found."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class Tolerance:
    """Numeric policy: absolute comparisons, optimizer stopping, default grid size."""

    abs_tol: float = 1e-9
    opt_tol: float = 1e-8
    grid_resolution: int = 4096

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.opt_tol > 0 and self.grid_resolution > 0):
            raise ValidationError("tolerances and grid resolution must be strictly positive")


DEFAULT_TOLERANCE = Tolerance()


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be a one-dimensional sequence")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must contain only finite values (no NaN or infinity)")
    return arr


def shannon_entropy(probs) -> float:
    """Shannon entropy in nats, with the 0*log(0) = 0 convention."""
    p = np.asarray(probs, dtype=float)
    return float(-xlogy(p, p).sum())


@dataclass(frozen=True)
class Gamble:
    """A bounded payoff function tabulated on a finite label set or a real grid.

    With ``grid=None`` the gamble is defined on labels ``0..len(values)-1``.
    Otherwise ``grid`` holds strictly increasing abscissae (at least two) and
    evaluation interpolates linearly between them, so tabulated extrema are
    the true extrema of the represented function.
    """

    values: np.ndarray
    grid: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_float_array(self.values, "values"))
        if self.grid is None:
            if self.values.size < 1:
                raise ValidationError("finite-label gamble needs at least one value")
        else:
            object.__setattr__(self, "grid", _as_float_array(self.grid, "grid"))
            if self.grid.size != self.values.size:
                raise ValidationError("grid and values must have the same length")
            if self.grid.size < 2:
                raise ValidationError("real-grid gamble needs at least two knots")
            if not np.all(np.diff(self.grid) > 0):
                raise ValidationError("grid must be strictly increasing")

    @property
    def domain_kind(self) -> str:
        return "finite-labels" if self.grid is None else "real-grid"

    def evaluate(self, y) -> float:
        """Payoff at ``y``: a label index for finite labels, interpolated on a grid."""
        if self.grid is None:
            k = int(y)
            if k != y or not 0 <= k < self.values.size:
                raise ValidationError(
                    f"label index {y!r} outside 0..{self.values.size - 1}"
                )
            return float(self.values[k])
        y = float(y)
        if y < self.grid[0] or y > self.grid[-1]:
            raise ValidationError(
                f"point {y} outside gamble grid range [{self.grid[0]}, {self.grid[-1]}]"
            )
        return float(np.interp(y, self.grid, self.values))

    @classmethod
    def tabulate(cls, fn, lo: float, hi: float, resolution: int | None = None) -> "Gamble":
        """Tabulate a callable on an even grid over [lo, hi]."""
        n = resolution or DEFAULT_TOLERANCE.grid_resolution
        xs = np.linspace(lo, hi, n)
        return cls(values=np.array([fn(x) for x in xs]), grid=xs)


@dataclass(frozen=True)
class DiscreteDistribution:
    """A probability vector over a finite label set; must sum to 1 within 1e-9."""

    probs: np.ndarray

    def __post_init__(self):
        arr = _as_float_array(self.probs, "probs")
        if arr.size < 1:
            raise ValidationError("distribution needs at least one class")
        if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
            raise ValidationError("probabilities must lie in [0, 1]")
        total = arr.sum()
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"probabilities sum to {total!r}, expected 1 within 1e-9")
        object.__setattr__(self, "probs", np.clip(arr, 0.0, 1.0))

    @property
    def class_count(self) -> int:
        return int(self.probs.size)

    def entropy(self) -> float:
        return shannon_entropy(self.probs)


@dataclass(frozen=True)
class TabulatedCDF:
    """A CDF tabulated on strictly increasing knots, linearly interpolated.

    ``ps`` must be non-decreasing, within [0, 1], and end at 1 (within 1e-9;
    the stored value is snapped to exactly 1). A jump is modelled by two knots
    at nearly the same abscissa; no right-continuity is assumed or needed,
    interpolation makes the tabulated function continuous.
    """

    xs: np.ndarray
    ps: np.ndarray

    def __post_init__(self):
        xs = _as_float_array(self.xs, "xs")
        ps = _as_float_array(self.ps, "ps")
        if xs.size != ps.size:
            raise ValidationError("xs and ps must have the same length")
        if xs.size < 2:
            raise ValidationError("CDF needs at least two knots")
        if not np.all(np.diff(xs) > 0):
            raise ValidationError("xs must be strictly increasing")
        if np.any(ps < -1e-12) or np.any(ps > 1.0 + 1e-12):
            raise ValidationError("ps must lie in [0, 1]")
        if np.any(np.diff(ps) < -1e-12):
            raise ValidationError("ps must be non-decreasing")
        if abs(ps[-1] - 1.0) > 1e-9:
            raise ValidationError(f"last CDF value is {ps[-1]!r}, expected 1 within 1e-9")
        ps = np.clip(ps, 0.0, 1.0)
        ps[-1] = 1.0
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)

    def evaluate(self, s):
        """Cumulative probability at ``s``: 0 left of the first knot, 1 from the last on."""
        s_arr = np.asarray(s, dtype=float)
        out = np.interp(s_arr, self.xs, self.ps, left=0.0, right=1.0)
        return float(out) if s_arr.ndim == 0 else out

    def quantile(self, p: float) -> float:
        """Smallest point of the tabulated support where the CDF reaches ``p``.

        Found by binary search over the probability knots plus linear
        interpolation; at ``p == 0`` this is the support infimum.
        """
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"quantile level {p} outside [0, 1]")
        j = int(np.searchsorted(self.ps, p, side="left"))
        if j == 0 or p <= self.ps[0]:
            return float(self.xs[0])
        x0, x1 = self.xs[j - 1], self.xs[j]
        p0, p1 = self.ps[j - 1], self.ps[j]
        return float(x0 + (p - p0) * (x1 - x0) / (p1 - p0))

    def mass_support(self) -> tuple[float, float]:
        """The smallest knot interval carrying all probability mass."""
        rising = np.nonzero(np.diff(self.ps) > 0)[0]
        if rising.size == 0:
            # all mass sits in a single atom at the first knot
            return float(self.xs[0]), float(self.xs[0])
        lo = self.xs[0] if self.ps[0] > 0 else self.xs[rising[0]]
        hi = self.xs[rising[-1] + 1]
        return float(lo), float(hi)

    @classmethod
    def uniform(cls, a: float, b: float, knots: int = 2) -> "TabulatedCDF":
        """The uniform distribution on [a, b]."""
        xs = np.linspace(a, b, max(knots, 2))
        return cls(xs=xs, ps=(xs - a) / (b - a))


_KNOWN_RULES = ("additive", "weighted", "contnn", "credal-entropy")


@dataclass(frozen=True)
class Decomposition:
    """A total-uncertainty split into aleatoric and epistemic parts.

    Additive-style rules require tu = au + eu; the weighted rule requires
    tu = alpha1*au + alpha2*eu and tu >= max(au, eu), both within 1e-9.
    """

    tu: float
    au: float
    eu: float
    rule: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        tol = DEFAULT_TOLERANCE.abs_tol
        if self.rule not in _KNOWN_RULES:
            raise ValidationError(f"unknown decomposition rule {self.rule!r}")
        if self.au < -tol or self.eu < -tol:
            raise ValidationError("aleatoric and epistemic parts must be non-negative")
        if self.rule == "weighted":
            a1 = self.params.get("alpha1")
            a2 = self.params.get("alpha2")
            if a1 is None or a2 is None:
                raise ValidationError("weighted decomposition needs alpha1 and alpha2 params")
            if abs(self.tu - (a1 * self.au + a2 * self.eu)) > tol:
                raise ValidationError("total must equal alpha1*au + alpha2*eu")
            if self.tu < max(self.au, self.eu) - tol:
                raise ValidationError(
                    "total uncertainty must be at least the larger of the two parts"
                )
        else:
            if abs(self.tu - (self.au + self.eu)) > tol:
                raise ValidationError("total must equal au + eu for additive-style rules")
