"""Figure rendering for the CLI report paths.

Each function takes already-computed report rows and writes a PNG next to
the delimited output. Rendering is deliberately plain: one axes per figure,
default style, fixed dpi.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_entropy_bounds(bounds, path, unit="nats"):
    k = np.arange(bounds.argmax.class_count)
    width = 0.4
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(k - width / 2, bounds.argmax.probs, width, label="max-entropy member")
    ax.bar(k + width / 2, bounds.argmin.probs, width, label="min-entropy member")
    ax.set_xlabel("class")
    ax.set_ylabel("probability")
    ax.set_title(
        f"entropy bounds: upper={bounds.upper:.6g}, lower={bounds.lower:.6g} ({unit})"
    )
    ax.set_xticks(k)
    ax.legend()
    _save(fig, path)


def save_decomposition(rows, path, unit="nats"):
    idx = np.arange(len(rows))
    au = [r["au"] for r in rows]
    eu = [r["eu"] for r in rows]
    tu = [r["tu"] for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(rows)), 4))
    ax.bar(idx, au, label="aleatoric")
    ax.bar(idx, eu, bottom=au, label="epistemic")
    ax.plot(idx, tu, "k.", label="total")
    ax.set_xlabel("instance")
    ax.set_ylabel(f"uncertainty ({unit})")
    ax.legend()
    _save(fig, path)


def save_pbox_convergence(rows, path):
    ns = [r[0] for r in rows]
    lows = [r[1] for r in rows]
    ups = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, lows, "o-", label="lower expectation")
    ax.plot(ns, ups, "s-", label="upper expectation")
    ax.set_xscale("log")
    ax.set_xlabel("partitions")
    ax.set_ylabel("expectation bound")
    ax.legend()
    _save(fig, path)


def save_contamination(result, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hlines(1, result["lower"], result["upper"], lw=6, color="tab:blue",
              label="expectation bounds")
    ax.plot([result["precise"]], [1], "k|", ms=24, label="precise expectation")
    ax.set_yticks([])
    ax.set_xlabel("expectation")
    ax.set_title(f"epsilon = {result['epsilon']:g}")
    ax.legend(loc="upper center")
    _save(fig, path)


def save_dependency(rows, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    removals = sorted({r.removed for r in rows})
    for removed in removals:
        pts = {}
        for r in rows:
            if r.removed == removed:
                pts.setdefault(r.size, []).append(r.bootstrap_spread)
        sizes = sorted(pts)
        means = [float(np.mean(pts[s])) for s in sizes]
        ax.plot(sizes, means, "o-", label=f"removed={removed}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("data size")
    ax.set_ylabel("bootstrap spread of noise estimate")
    ax.legend()
    _save(fig, path)


def save_focal_scores(subsets, path):
    labels = ["{" + ",".join(map(str, s.labels)) + "}" for s in subsets]
    scores = [s.score for s in subsets]
    shown = min(len(labels), 30)
    fig, ax = plt.subplots(figsize=(max(6, 0.3 * shown), 4))
    ax.bar(range(shown), scores[:shown])
    ax.set_xticks(range(shown))
    ax.set_xticklabels(labels[:shown], rotation=90, fontsize=7)
    ax.set_ylabel("overlap score")
    _save(fig, path)


def save_alphas(estimate, path):
    fig, ax = plt.subplots(figsize=(4, 3.5))
    ax.bar([0, 1], [estimate.alpha1, estimate.alpha2], tick_label=["alpha1", "alpha2"])
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_title(estimate.method)
    _save(fig, path)
