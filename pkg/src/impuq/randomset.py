"""Belief-function outputs for set-valued classification.

Mass assignments live on label subsets (focal sets). Belief and plausibility
of an event are mass sums over contained and overlapping focal sets, and the
singleton belief/plausibility pairs bridge to per-class probability
intervals. Candidate focal sets are ranked by the geometric overlap of
per-class coverage ellipsoids, estimated with Monte Carlo sampling, and a
fixed budget of the best non-singleton subsets is selected by scanning
cardinalities with early stopping.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import chi2

from .core import ValidationError
from .credal import ProbabilityIntervals

MIN_OVERLAP_SAMPLES = 10_000

# Focal selection enumerates cliques of the box-overlap graph, so its cost
# scales with the number of mutually-overlapping groups per cardinality, not
# with 2^N. The cap guards the dense worst case where every box overlaps.
MAX_FOCAL_CLASSES = 128


def _as_mask(labels: Iterable[int] | int, n_labels: int) -> int:
    if isinstance(labels, (int, np.integer)):
        mask = int(labels)
    else:
        mask = 0
        for k in labels:
            k = int(k)
            if not 0 <= k < n_labels:
                raise ValidationError(f"label {k} outside 0..{n_labels - 1}")
            mask |= 1 << k
    if mask < 0 or mask >= (1 << n_labels):
        raise ValidationError(f"subset mask {mask} outside the {n_labels}-label universe")
    return mask


def _mask_labels(mask: int) -> tuple[int, ...]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


@dataclass(frozen=True)
class MassAssignment:
    """Non-negative masses on distinct non-empty label subsets, summing to 1."""

    n_labels: int
    focal_masks: tuple[int, ...]
    masses: np.ndarray

    def __post_init__(self):
        if self.n_labels < 1:
            raise ValidationError("need at least one label")
        masses = np.asarray(self.masses, dtype=float)
        if masses.ndim != 1 or masses.size != len(self.focal_masks):
            raise ValidationError("need exactly one mass per focal set")
        if masses.size < 1:
            raise ValidationError("need at least one focal set")
        if np.any(masses < -1e-12) or not np.all(np.isfinite(masses)):
            raise ValidationError("masses must be finite and non-negative")
        if abs(masses.sum() - 1.0) > 1e-9:
            raise ValidationError(f"masses sum to {masses.sum()!r}, expected 1 within 1e-9")
        seen = set()
        for mask in self.focal_masks:
            if mask == 0:
                raise ValidationError("focal sets must be non-empty")
            if mask >= (1 << self.n_labels):
                raise ValidationError(f"focal set {mask} outside the label universe")
            if mask in seen:
                raise ValidationError(f"duplicate focal set {_mask_labels(mask)}")
            seen.add(mask)
        object.__setattr__(self, "masses", np.clip(masses, 0.0, None))
        object.__setattr__(self, "focal_masks", tuple(int(m) for m in self.focal_masks))

    @classmethod
    def from_subsets(cls, n_labels: int, assignment: dict) -> "MassAssignment":
        """Build from a mapping of label iterables (or masks) to masses."""
        masks = []
        masses = []
        for subset, mass in assignment.items():
            masks.append(_as_mask(subset, n_labels))
            masses.append(float(mass))
        return cls(n_labels=n_labels, focal_masks=tuple(masks), masses=np.asarray(masses))

    def belief(self, labels: Iterable[int] | int) -> float:
        """Total mass of focal sets contained in the event."""
        mask = _as_mask(labels, self.n_labels)
        if mask == 0:
            raise ValidationError("belief of the empty event is undefined here")
        return float(
            sum(m for f, m in zip(self.focal_masks, self.masses) if f & ~mask == 0)
        )

    def plausibility(self, labels: Iterable[int] | int) -> float:
        """Total mass of focal sets overlapping the event."""
        mask = _as_mask(labels, self.n_labels)
        if mask == 0:
            raise ValidationError("plausibility of the empty event is undefined here")
        return float(sum(m for f, m in zip(self.focal_masks, self.masses) if f & mask))

    def to_probability_intervals(self) -> ProbabilityIntervals:
        """Per-class bounds: lower = singleton belief, upper = singleton plausibility."""
        lowers = np.array([self.belief(1 << k) for k in range(self.n_labels)])
        uppers = np.array([self.plausibility(1 << k) for k in range(self.n_labels)])
        return ProbabilityIntervals(lowers, uppers)


@dataclass(frozen=True)
class ClassEllipsoid:
    """A coverage ellipsoid for one class: mean, covariance, and mass fraction.

    Membership of a point x is (x - mean)' C^-1 (x - mean) <= r2 where r2 is
    the chi-square quantile of the coverage level with 3 degrees of freedom.
    """

    mean: np.ndarray
    covariance: np.ndarray
    coverage: float = 0.95

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        if mean.shape != (3,):
            raise ValidationError("ellipsoid mean must be a 3-vector")
        if cov.shape != (3, 3):
            raise ValidationError("ellipsoid covariance must be a 3x3 matrix")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValidationError("ellipsoid parameters must be finite")
        if np.max(np.abs(cov - cov.T)) > 1e-9:
            raise ValidationError("covariance must be symmetric")
        eigenvalues = np.linalg.eigvalsh(cov)
        if eigenvalues.min() <= 0:
            raise ValidationError(
                f"covariance must be positive definite (smallest eigenvalue "
                f"{eigenvalues.min():.3g})"
            )
        if not 0.0 < self.coverage < 1.0:
            raise ValidationError("coverage must lie strictly between 0 and 1")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", 0.5 * (cov + cov.T))
        object.__setattr__(self, "_inverse", np.linalg.inv(self.covariance))
        object.__setattr__(self, "_radius2", float(chi2.ppf(self.coverage, df=3)))

    def contains(self, points: np.ndarray) -> np.ndarray:
        diff = points - self.mean
        dist2 = np.einsum("ij,jk,ik->i", diff, self._inverse, diff)
        return dist2 <= self._radius2

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        half = np.sqrt(self._radius2 * np.diag(self.covariance))
        return self.mean - half, self.mean + half


@dataclass(frozen=True)
class OverlapEstimate:
    """Monte-Carlo intersection-over-union with its standard error."""

    value: float
    standard_error: float
    samples: int

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class RankedSubset:
    """A candidate focal set with its overlap score."""

    labels: tuple[int, ...]
    score: float
    standard_error: float


def _boxes_disjoint(e1: ClassEllipsoid, e2: ClassEllipsoid) -> bool:
    lo1, hi1 = e1.bounding_box()
    lo2, hi2 = e2.bounding_box()
    return bool(np.any(hi1 < lo2) or np.any(hi2 < lo1))


def _mc_overlap(
    ellipsoids: Sequence[ClassEllipsoid], samples: int, rng: np.random.Generator
) -> OverlapEstimate:
    for e1, e2 in itertools.combinations(ellipsoids, 2):
        if _boxes_disjoint(e1, e2):
            # a disjoint pair empties the whole intersection
            return OverlapEstimate(value=0.0, standard_error=0.0, samples=samples)
    boxes = [e.bounding_box() for e in ellipsoids]
    lo = np.min([b[0] for b in boxes], axis=0)
    hi = np.max([b[1] for b in boxes], axis=0)
    points = rng.uniform(lo, hi, size=(samples, 3))
    member = np.stack([e.contains(points) for e in ellipsoids])
    n_inter = int(member.all(axis=0).sum())
    n_union = int(member.any(axis=0).sum())
    if n_union == 0:
        return OverlapEstimate(value=0.0, standard_error=0.0, samples=samples)
    value = n_inter / n_union
    se = math.sqrt(max(value * (1.0 - value), 0.0) / n_union)
    return OverlapEstimate(value=value, standard_error=se, samples=samples)


def ellipsoid_overlap(
    e1: ClassEllipsoid, e2: ClassEllipsoid, samples: int = MIN_OVERLAP_SAMPLES, seed: int = 0
) -> OverlapEstimate:
    """Monte-Carlo IoU of two coverage ellipsoids, deterministic given the seed.

    Points are drawn uniformly from the joint bounding box; the estimate is
    the ratio of intersection hits to union hits.
    """
    if samples < MIN_OVERLAP_SAMPLES:
        raise ValidationError(f"need at least {MIN_OVERLAP_SAMPLES} samples, got {samples}")
    return _mc_overlap((e1, e2), samples, np.random.default_rng(seed))


def subset_overlap(
    ellipsoids: Sequence[ClassEllipsoid],
    labels: Sequence[int],
    samples: int = MIN_OVERLAP_SAMPLES,
    seed: int = 0,
) -> OverlapEstimate:
    """IoU of the ellipsoids named by ``labels`` (volume of the common
    intersection over the volume of the union).

    The random stream is derived from the seed and the sorted labels, so
    scores do not depend on evaluation order.
    """
    if samples < MIN_OVERLAP_SAMPLES:
        raise ValidationError(f"need at least {MIN_OVERLAP_SAMPLES} samples, got {samples}")
    chosen = sorted(int(k) for k in labels)
    if len(chosen) < 2 or len(set(chosen)) != len(chosen):
        raise ValidationError("need at least two distinct labels")
    if chosen[0] < 0 or chosen[-1] >= len(ellipsoids):
        raise ValidationError(f"labels outside 0..{len(ellipsoids) - 1}")
    rng = np.random.default_rng([seed, *chosen])
    return _mc_overlap([ellipsoids[k] for k in chosen], samples, rng)


def select_focal_budget(
    ellipsoids: Sequence[ClassEllipsoid],
    budget: int,
    samples: int = MIN_OVERLAP_SAMPLES,
    seed: int = 0,
    max_cardinality: int | None = None,
) -> list[RankedSubset]:
    """The ``budget`` non-singleton label subsets with the highest overlap.

    Cardinalities are scanned in increasing order starting at 2. Only
    subsets whose members have pairwise-intersecting bounding boxes can have
    positive overlap, so those are enumerated as cliques of the box-overlap
    graph and scored with Monte Carlo; every other subset scores exactly
    zero and is only pulled in (in lexicographic order) while the running
    list is short or bottoms out at zero. The scan stops one cardinality
    after the top list stops changing. Ties are broken by lexicographic
    subset order. The result has min(budget, available subsets) entries.
    """
    n = len(ellipsoids)
    if n < 2:
        raise ValidationError("need at least two classes")
    if n > MAX_FOCAL_CLASSES:
        raise ValidationError(f"focal selection supports at most {MAX_FOCAL_CLASSES} classes")
    if budget < 1:
        raise ValidationError("focal budget must be at least 1")

    adjacent = [
        [i != j and not _boxes_disjoint(ellipsoids[i], ellipsoids[j]) for j in range(n)]
        for i in range(n)
    ]

    def merged(current: list[RankedSubset], extra: list[RankedSubset]) -> list[RankedSubset]:
        pool = current + extra
        pool.sort(key=lambda r: (-r.score, r.labels))
        return pool[:budget]

    top: list[RankedSubset] = []
    cliques: list[tuple[int, ...]] = [(i,) for i in range(n)]
    limit = min(max_cardinality or n, n)
    cardinality = 1
    while cardinality < limit:
        cardinality += 1
        grown = [
            q + (v,)
            for q in cliques
            for v in range(q[-1] + 1, n)
            if all(adjacent[v][m] for m in q)
        ]
        scored = []
        for labels in grown:
            est = subset_overlap(ellipsoids, labels, samples=samples, seed=seed)
            scored.append(
                RankedSubset(labels=labels, score=est.value, standard_error=est.standard_error)
            )
        if len(top) < budget or (top and top[-1].score <= 0.0):
            # zero-score subsets can still make the cut; pull them lazily
            clique_set = set(grown)
            pulled = 0
            for combo in itertools.combinations(range(n), cardinality):
                if combo in clique_set:
                    continue
                scored.append(RankedSubset(labels=combo, score=0.0, standard_error=0.0))
                pulled += 1
                if pulled >= budget:
                    break
        new_top = merged(top, scored)
        unchanged = [r.labels for r in new_top] == [r.labels for r in top]
        top = new_top
        cliques = grown
        if cardinality >= 3 and unchanged:
            break
    return top
