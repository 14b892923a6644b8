"""Total-uncertainty rules and the weight-estimation heuristics behind them.

The additive rule sums the aleatoric and epistemic parts. The weighted rule
combines them linearly with coefficients (alpha1, alpha2) constrained to
alpha1 + alpha2 > 1 so that the total exceeds either part in the intended
regime. Four estimators produce the coefficients from model diagnostics.
The contamination-network rule blends sampled precise predictions with
per-class interval predictions and splits uncertainty into the mean sample
entropy (aleatoric) plus the entropy gap of the induced credal set
(epistemic). A small synthetic experiment demonstrates that the two parts
are statistically coupled: shrinking the data raises the dispersion of the
noise estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    DEFAULT_TOLERANCE,
    Decomposition,
    Tolerance,
    ValidationError,
    shannon_entropy,
)
from .credal import CredalSet, ProbabilityIntervals

_SAMPLE_KINDS = ("bnn-samples", "ensemble")
_INTERVAL_KINDS = ("inn-intervals", "credal")
BUNDLE_KINDS = _SAMPLE_KINDS + _INTERVAL_KINDS

_DEPENDENCY_FUNCTIONS = {
    "linear": lambda x: x,
    "sine": lambda x: np.sin(2.0 * np.pi * x),
}


@dataclass(frozen=True)
class AlphaEstimate:
    """Weights for the weighted total-uncertainty rule; alpha1 + alpha2 > 1."""

    alpha1: float
    alpha2: float
    method: str
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.alpha1 > 0.0 and self.alpha2 > 0.0):
            raise ValidationError("alpha weights must be strictly positive")
        if self.alpha1 + self.alpha2 <= 1.0:
            raise ValidationError(
                f"alpha1 + alpha2 = {self.alpha1 + self.alpha2:.9g} violates the "
                "constraint alpha1 + alpha2 > 1"
            )


@dataclass(frozen=True)
class PredictionBundle:
    """Per-instance predictions of one kind.

    Sample kinds ("bnn-samples", "ensemble") carry ``samples`` shaped
    (instances, members, classes) where every member row is a probability
    vector. Interval kinds ("inn-intervals", "credal") carry ``lowers`` and
    ``uppers`` shaped (instances, classes) with 0 <= lower <= upper <= 1.
    """

    kind: str
    samples: np.ndarray | None = None
    lowers: np.ndarray | None = None
    uppers: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in BUNDLE_KINDS:
            raise ValidationError(f"unknown bundle kind {self.kind!r}")
        if self.kind in _SAMPLE_KINDS:
            if self.samples is None or self.lowers is not None or self.uppers is not None:
                raise ValidationError(f"{self.kind} bundle needs a samples payload only")
            arr = np.asarray(self.samples, dtype=float)
            if arr.ndim != 3:
                raise ValidationError("samples must be (instances, members, classes)")
            if arr.shape[0] < 1 or arr.shape[2] < 1:
                raise ValidationError("samples must be non-empty")
            if arr.shape[1] < 2:
                raise ValidationError("need at least two sampled predictions per instance")
            if not np.all(np.isfinite(arr)):
                raise ValidationError("samples must be finite")
            if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
                raise ValidationError("sampled probabilities must lie in [0, 1]")
            sums = arr.sum(axis=2)
            if np.max(np.abs(sums - 1.0)) > 1e-9:
                raise ValidationError("each sampled prediction must sum to 1 within 1e-9")
            object.__setattr__(self, "samples", np.clip(arr, 0.0, 1.0))
        else:
            if self.lowers is None or self.uppers is None or self.samples is not None:
                raise ValidationError(f"{self.kind} bundle needs lowers and uppers payloads")
            lo = np.asarray(self.lowers, dtype=float)
            up = np.asarray(self.uppers, dtype=float)
            if lo.ndim != 2 or lo.shape != up.shape or lo.shape[0] < 1 or lo.shape[1] < 1:
                raise ValidationError("lowers and uppers must be equal non-empty "
                                      "(instances, classes) arrays")
            if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(up))):
                raise ValidationError("interval bounds must be finite")
            if np.any(lo < -1e-12) or np.any(up > 1.0 + 1e-12) or np.any(up - lo < -1e-12):
                raise ValidationError("need 0 <= lower <= upper <= 1 per class")
            object.__setattr__(self, "lowers", np.clip(lo, 0.0, 1.0))
            object.__setattr__(self, "uppers", np.clip(up, 0.0, 1.0))

    @property
    def instance_count(self) -> int:
        base = self.samples if self.samples is not None else self.lowers
        return int(base.shape[0])

    @property
    def class_count(self) -> int:
        base = self.samples if self.samples is not None else self.lowers
        return int(base.shape[-1])


def additive_tu(au: float, eu: float) -> Decomposition:
    """Total uncertainty as the plain sum of the two parts."""
    if au < 0 or eu < 0:
        raise ValidationError("aleatoric and epistemic parts must be non-negative")
    return Decomposition(tu=au + eu, au=au, eu=eu, rule="additive")


def weighted_tu(au: float, eu: float, alphas: AlphaEstimate) -> Decomposition:
    """Total uncertainty as alpha1*au + alpha2*eu."""
    if au < 0 or eu < 0:
        raise ValidationError("aleatoric and epistemic parts must be non-negative")
    if alphas.alpha1 + alphas.alpha2 <= 1.0:
        raise ValidationError("alpha1 + alpha2 must exceed 1")
    return Decomposition(
        tu=alphas.alpha1 * au + alphas.alpha2 * eu,
        au=au,
        eu=eu,
        rule="weighted",
        params={"alpha1": alphas.alpha1, "alpha2": alphas.alpha2},
    )


def _normalized_range(losses: np.ndarray) -> float:
    span = float(losses.max() - losses.min())
    scale = float(np.mean(np.abs(losses)))
    return span / scale if scale > 0 else 0.0


def estimate_alphas_sensitivity(
    model_eval: Callable[[float, float], float],
    noise_grid: Sequence[float],
    fraction_grid: Sequence[float],
    baseline_noise: float | None = None,
) -> AlphaEstimate:
    """Alpha weights from loss sensitivity to noise versus data size.

    ``model_eval(noise_scale, data_fraction)`` returns a loss. The aleatoric
    sensitivity is the normalized loss range over ``noise_grid`` at full
    data; the epistemic sensitivity is the normalized range over
    ``fraction_grid`` at the baseline noise (the first grid point unless
    given). Weights are 1/2 + own share of total sensitivity, hence they sum
    to 2; with no sensitivity at all both default to 1 (the additive rule).
    """
    noise_grid = [float(v) for v in noise_grid]
    fraction_grid = [float(v) for v in fraction_grid]
    if len(noise_grid) < 3 or len(fraction_grid) < 3:
        raise ValidationError("sensitivity grids need at least three points each")
    base = noise_grid[0] if baseline_noise is None else float(baseline_noise)
    noise_losses = np.array([float(model_eval(nu, 1.0)) for nu in noise_grid])
    size_losses = np.array([float(model_eval(base, f)) for f in fraction_grid])
    s_noise = _normalized_range(noise_losses)
    s_size = _normalized_range(size_losses)
    total = s_noise + s_size
    if total <= 0:
        alpha1 = alpha2 = 1.0
    else:
        alpha1 = 0.5 + s_noise / total
        alpha2 = 0.5 + s_size / total
    return AlphaEstimate(
        alpha1=alpha1,
        alpha2=alpha2,
        method="sensitivity",
        evidence={
            "noise_sensitivity": s_noise,
            "size_sensitivity": s_size,
            "noise_losses": noise_losses.tolist(),
            "size_losses": size_losses.tolist(),
        },
    )


def _alphas_from_width(width: float, method: str, evidence: dict,
                       tolerance: Tolerance) -> AlphaEstimate:
    floor = tolerance.abs_tol
    alpha2 = max(width, floor)
    alpha1 = max(1.0 + floor - alpha2, floor)
    return AlphaEstimate(alpha1=alpha1, alpha2=alpha2, method=method, evidence=evidence)


def estimate_alpha2_credal(
    credal_set: CredalSet, tolerance: Tolerance = DEFAULT_TOLERANCE
) -> AlphaEstimate:
    """alpha2 from the entropy gap of a credal set (its imprecision)."""
    eb = credal_set.entropy_bounds(tolerance)
    return _alphas_from_width(
        eb.upper - eb.lower,
        "credal-imprecision",
        {"upper_entropy": eb.upper, "lower_entropy": eb.lower},
        tolerance,
    )


def estimate_alpha2_interval_width(
    bundle: PredictionBundle, tolerance: Tolerance = DEFAULT_TOLERANCE
) -> AlphaEstimate:
    """alpha2 from the mean per-class width of interval predictions."""
    if bundle.kind != "inn-intervals":
        raise ValidationError(f"expected an inn-intervals bundle, got {bundle.kind!r}")
    width = float(np.mean(bundle.uppers - bundle.lowers))
    return _alphas_from_width(width, "inn-width", {"mean_width": width}, tolerance)


def estimate_alpha2_ensemble(
    bundle: PredictionBundle, tolerance: Tolerance = DEFAULT_TOLERANCE
) -> AlphaEstimate:
    """alpha2 from the mean per-class spread (max - min) across ensemble members."""
    if bundle.kind != "ensemble":
        raise ValidationError(f"expected an ensemble bundle, got {bundle.kind!r}")
    spread = bundle.samples.max(axis=1) - bundle.samples.min(axis=1)
    mean_spread = float(np.mean(spread))
    return _alphas_from_width(
        mean_spread, "ensemble-spread", {"mean_spread": mean_spread}, tolerance
    )


def estimate_alphas_for_bundle(
    bundle: PredictionBundle, method: str, tolerance: Tolerance = DEFAULT_TOLERANCE
) -> AlphaEstimate:
    """Dispatch alpha estimation by method name over a prediction bundle.

    "credal" averages per-instance entropy gaps of interval bundles;
    "inn-width" and "ensemble" delegate to their dedicated estimators.
    """
    if method == "inn-width":
        return estimate_alpha2_interval_width(bundle, tolerance)
    if method == "ensemble":
        return estimate_alpha2_ensemble(bundle, tolerance)
    if method == "credal":
        if bundle.kind not in _INTERVAL_KINDS:
            raise ValidationError(
                f"credal alpha estimation needs an interval bundle, got {bundle.kind!r}"
            )
        gaps = []
        for i in range(bundle.instance_count):
            credal = CredalSet.from_intervals(
                ProbabilityIntervals(bundle.lowers[i], bundle.uppers[i]), tolerance
            )
            eb = credal.entropy_bounds(tolerance)
            gaps.append(max(eb.upper - eb.lower, 0.0))
        width = float(np.mean(gaps))
        return _alphas_from_width(
            width, "credal-imprecision", {"mean_entropy_gap": width}, tolerance
        )
    raise ValidationError(f"unknown alpha estimation method {method!r}")


def contnn_combine(
    bnn: PredictionBundle,
    inn: PredictionBundle,
    eps: float,
    convention: str = "definition",
) -> tuple[np.ndarray, np.ndarray]:
    """Blend sampled means with interval predictions into per-class bounds.

    Under the "definition" convention ``eps`` weights the imprecise
    (interval) part, matching the contamination model; "eq12" swaps the
    roles so ``eps`` weights the precise part. Outputs are clipped to [0, 1]
    and returned as (lowers, uppers) arrays of shape (instances, classes).
    """
    if bnn.kind != "bnn-samples":
        raise ValidationError(f"expected a bnn-samples bundle, got {bnn.kind!r}")
    if inn.kind != "inn-intervals":
        raise ValidationError(f"expected an inn-intervals bundle, got {inn.kind!r}")
    if (bnn.instance_count, bnn.class_count) != (inn.instance_count, inn.class_count):
        raise ValidationError(
            f"bundle shapes disagree: {bnn.instance_count}x{bnn.class_count} vs "
            f"{inn.instance_count}x{inn.class_count}"
        )
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"epsilon {eps} outside [0, 1]")
    if convention == "definition":
        w_precise, w_imprecise = 1.0 - eps, eps
    elif convention == "eq12":
        w_precise, w_imprecise = eps, 1.0 - eps
    else:
        raise ValidationError(f"unknown epsilon convention {convention!r}")
    means = bnn.samples.mean(axis=1)
    lowers = np.clip(w_precise * means + w_imprecise * inn.lowers, 0.0, 1.0)
    uppers = np.clip(w_precise * means + w_imprecise * inn.uppers, 0.0, 1.0)
    return lowers, uppers


def contnn_decompose_instances(
    bnn: PredictionBundle,
    inn: PredictionBundle,
    eps: float,
    convention: str = "definition",
    tolerance: Tolerance = DEFAULT_TOLERANCE,
) -> list[Decomposition]:
    """Per-instance contamination-network decompositions.

    Aleatoric part: mean Shannon entropy of the sampled predictions.
    Epistemic part: entropy gap of the credal set induced by the blended
    per-class intervals after reachability tightening.
    """
    lowers, uppers = contnn_combine(bnn, inn, eps, convention)
    out = []
    for i in range(bnn.instance_count):
        au = float(np.mean([shannon_entropy(row) for row in bnn.samples[i]]))
        credal = CredalSet.from_intervals(
            ProbabilityIntervals(lowers[i], uppers[i]), tolerance
        )
        eb = credal.entropy_bounds(tolerance)
        eu = max(eb.upper - eb.lower, 0.0)
        out.append(
            Decomposition(tu=au + eu, au=au, eu=eu, rule="contnn", params={"epsilon": eps})
        )
    return out


def contnn_decompose(
    bnn: PredictionBundle,
    inn: PredictionBundle,
    eps: float,
    convention: str = "definition",
    tolerance: Tolerance = DEFAULT_TOLERANCE,
) -> Decomposition:
    """Aggregate contamination-network decomposition (means over instances)."""
    rows = contnn_decompose_instances(bnn, inn, eps, convention, tolerance)
    au = float(np.mean([r.au for r in rows]))
    eu = float(np.mean([r.eu for r in rows]))
    return Decomposition(tu=au + eu, au=au, eu=eu, rule="contnn", params={"epsilon": eps})


@dataclass(frozen=True)
class DependencyRow:
    """One observation of the data-size / noise-estimate coupling experiment."""

    seed: int
    size: int
    removed: int
    mean_difference: float
    sigma1_hat: float
    sigma2_hat: float
    noise_estimate: float  # sigma2 re-estimated on the retained points (aleatoric proxy)
    bootstrap_spread: float  # dispersion of that estimate under resampling (epistemic proxy)


def dependency_experiment(
    f_spec: str = "sine",
    sigma1: float = 0.1,
    sigma2: float = 1.0,
    sizes: Sequence[int] = (50, 500, 5000),
    removals: Sequence[int] = (0,),
    seeds: Sequence[int] = (42,),
    mu1: float = 0.0,
    mu2: float = 0.0,
    bootstrap: int = 200,
) -> list[DependencyRow]:
    """Generate two noisy copies of a signal and track how data removal
    inflates the dispersion of the noise estimate.

    For each seed and size, draws x uniformly on [0, 1] and forms
    X1 = f(x) + e1 and X2 = f(x) + e2 with Gaussian noise. For each removal
    level K, re-estimates the noise of X2 on a random subset of size - K
    points and reports the standard deviation of that estimate over
    bootstrap resamples. Fully deterministic given the seeds.
    """
    if f_spec not in _DEPENDENCY_FUNCTIONS:
        raise ValidationError(f"unknown signal {f_spec!r}; use one of "
                              f"{sorted(_DEPENDENCY_FUNCTIONS)}")
    if not (sigma1 > 0 and sigma2 > 0):
        raise ValidationError("noise scales must be strictly positive")
    sizes = [int(n) for n in sizes]
    removals = [int(k) for k in removals]
    if any(n < 10 for n in sizes):
        raise ValidationError("sizes must be at least 10")
    if any(k < 0 for k in removals):
        raise ValidationError("removal counts must be non-negative")
    bad = [(k, n) for k in removals for n in sizes if k >= n]
    if bad:
        raise ValidationError(f"removal {bad[0][0]} >= size {bad[0][1]}")
    if bootstrap < 2:
        raise ValidationError("need at least two bootstrap resamples")
    signal = _DEPENDENCY_FUNCTIONS[f_spec]

    rows = []
    for seed in seeds:
        for size in sizes:
            rng = np.random.default_rng([int(seed), size])
            x = rng.uniform(0.0, 1.0, size)
            fx = signal(x)
            x1 = fx + rng.normal(mu1, sigma1, size)
            x2 = fx + rng.normal(mu2, sigma2, size)
            mean_difference = float(x1.mean() - x2.mean())
            residuals1 = x1 - fx
            residuals2 = x2 - fx
            sigma1_hat = float(residuals1.std(ddof=1))
            sigma2_hat = float(residuals2.std(ddof=1))
            for removed in removals:
                kept = residuals2[rng.permutation(size)[: size - removed]]
                noise_estimate = float(kept.std(ddof=1))
                draws = rng.integers(0, kept.size, size=(bootstrap, kept.size))
                boot_sigmas = kept[draws].std(axis=1, ddof=1)
                rows.append(
                    DependencyRow(
                        seed=int(seed),
                        size=size,
                        removed=removed,
                        mean_difference=mean_difference,
                        sigma1_hat=sigma1_hat,
                        sigma2_hat=sigma2_hat,
                        noise_estimate=noise_estimate,
                        bootstrap_spread=float(boot_sigmas.std(ddof=1)),
                    )
                )
    return rows
