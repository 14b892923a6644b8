"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline.
Expected values tagged as derived were computed with the independent oracles
in tests/oracles.py before being frozen here.
"""

import itertools
import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.stats import chi2

from impuq import (
    AlphaEstimate,
    ClassEllipsoid,
    ContaminationModel,
    CredalSet,
    Gamble,
    IntervalModel,
    MassAssignment,
    PBox,
    PredictionBundle,
    ProbabilityIntervals,
    TabulatedCDF,
    ValidationError,
    additive_tu,
    contnn_decompose,
    dependency_experiment,
    ellipsoid_overlap,
    select_focal_budget,
    shannon_entropy,
    subset_overlap,
    weighted_tu,
)
from impuq.cli import main
from impuq.formats import write_ndjson

from .conftest import random_proper_intervals
from .oracles import (
    brute_entropy_min,
    brute_expectation_bounds,
    grid_entropy_max,
    sphere_iou,
)

LN2 = math.log(2.0)
LN3 = math.log(3.0)


@contextmanager
def criterion(number: int, description: str):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"[criterion {number:2d}] FAIL  {description}")
        raise
    elapsed = time.monotonic() - started
    print(f"[criterion {number:2d}] PASS  {description}  ({elapsed:.1f}s)")


def identity_gamble(lo, hi, n=4097):
    xs = np.linspace(lo, hi, n)
    return Gamble(values=xs, grid=xs)


def unit_ball(center):
    cov = np.eye(3) / chi2.ppf(0.95, df=3)  # 95% surface is the unit sphere
    return ClassEllipsoid(mean=np.asarray(center, float), covariance=cov)


def test_criterion_1_credal_entropy():
    with criterion(1, "credal entropy bounds vs vertex and grid oracles, < 5 s"):
        started = time.monotonic()

        vac = CredalSet.vacuous(3).entropy_bounds()
        assert abs(vac.upper - LN3) < 1e-6
        assert abs(vac.lower - 0.0) < 1e-9

        cs = CredalSet.from_intervals(
            ProbabilityIntervals([0.2, 0.2, 0.2], [0.6, 0.6, 0.6])
        )
        eb = cs.entropy_bounds()
        oracle_min = brute_entropy_min([0.2] * 3, [0.6] * 3)
        assert abs(eb.lower - oracle_min) < 1e-6
        assert abs(eb.lower - shannon_entropy([0.6, 0.2, 0.2])) < 1e-6

        for lowers, uppers in ([0, 0, 0], [1, 1, 1]), ([0.2] * 3, [0.6] * 3):
            got = CredalSet.from_intervals(
                ProbabilityIntervals(lowers, uppers)
            ).entropy_bounds().upper
            assert abs(got - grid_entropy_max(lowers, uppers, step=1e-3)) < 1e-4

        assert time.monotonic() - started < 5.0


def test_criterion_2_greedy_vs_vertex_oracle():
    with criterion(2, "greedy expectation equals vertex-scan oracle on 1000 systems, < 30 s"):
        started = time.monotonic()
        rng = np.random.default_rng(2024)
        for trial in range(1000):
            c = int(rng.integers(2, 9))
            lowers, uppers = random_proper_intervals(rng, c)
            payoffs = rng.normal(size=c)
            cs = CredalSet.from_intervals(ProbabilityIntervals(lowers, uppers))
            g = Gamble(values=payoffs)
            lo_oracle, hi_oracle = brute_expectation_bounds(
                lowers, uppers, payoffs, tol=1e-12
            )
            assert abs(cs.lower_expectation(g) - lo_oracle) < 1e-9
            assert abs(cs.upper_expectation(g) - hi_oracle) < 1e-9
        assert time.monotonic() - started < 30.0


def test_criterion_3_contamination_width_law():
    with criterion(3, "contamination width equals eps * payoff range; endpoints exact"):
        rng = np.random.default_rng(7)
        cdf = TabulatedCDF.uniform(0.0, 1.0, knots=33)
        box = IntervalModel(0.0, 1.0)
        for _ in range(1000):
            eps = float(rng.uniform(0.0, 1.0))
            vals = rng.uniform(-5.0, 5.0, size=33)
            g = Gamble(values=vals, grid=np.linspace(0.0, 1.0, 33))
            model = ContaminationModel(epsilon=eps, precise=cdf, imprecise=box)
            width = model.upper_expectation(g) - model.lower_expectation(g)
            assert abs(width - eps * (vals.max() - vals.min())) < 1e-9

        vals = rng.uniform(-5.0, 5.0, size=33)
        g = Gamble(values=vals, grid=np.linspace(0.0, 1.0, 33))
        at0 = ContaminationModel(epsilon=0.0, precise=cdf, imprecise=box)
        assert at0.lower_expectation(g) == at0.precise_expectation(g)
        assert at0.upper_expectation(g) == at0.precise_expectation(g)
        at1 = ContaminationModel(epsilon=1.0, precise=cdf, imprecise=box)
        assert at1.lower_expectation(g) == vals.min()
        assert at1.upper_expectation(g) == vals.max()


def test_criterion_4_pbox_convergence_and_coherence():
    with criterion(4, "p-box closed-form sweep, monotone refinement, coherence"):
        box = PBox(
            lower_cdf=TabulatedCDF.uniform(1.0, 2.0, knots=33),
            upper_cdf=TabulatedCDF.uniform(0.0, 1.0, knots=33),
        )
        g = identity_gamble(-1.0, 3.0)
        sweep = box.convergence_report(g, [5, 10, 100, 1000])
        for n, lo, hi in sweep:
            assert abs(lo - (0.5 - 1.0 / (2 * n))) < 1e-6
            assert abs(hi - (1.5 + 1.0 / (2 * n))) < 1e-6
        lows = [r[1] for r in sweep]
        highs = [r[2] for r in sweep]
        assert all(b >= a for a, b in zip(lows, lows[1:]))
        assert all(b <= a for a, b in zip(highs, highs[1:]))

        rng = np.random.default_rng(99)
        xs = np.linspace(0.0, 1.0, 17)
        grid = np.linspace(0.0, 1.0, 33)
        for _ in range(100):
            a = np.sort(rng.uniform(0.0, 1.0, 17))
            b = np.sort(rng.uniform(0.0, 1.0, 17))
            a[0] = b[0] = 0.0
            a[-1] = b[-1] = 1.0
            rbox = PBox(
                lower_cdf=TabulatedCDF(xs=xs, ps=np.minimum(a, b)),
                upper_cdf=TabulatedCDF(xs=xs, ps=np.maximum(a, b)),
            )
            for _ in range(10):
                rg = Gamble(values=rng.normal(size=33), grid=grid)
                assert rbox.lower_expectation(rg, 50) <= rbox.upper_expectation(rg, 50) + 1e-12


def test_criterion_5_belief_bridge():
    with criterion(5, "belief/plausibility bridge proper; belief <= plausibility"):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            count = int(rng.integers(1, min(2**n, 9)))
            masks = rng.choice(np.arange(1, 2**n), size=count, replace=False)
            m = MassAssignment(
                n_labels=n,
                focal_masks=tuple(int(x) for x in masks),
                masses=rng.dirichlet(np.ones(count)),
            )
            assert m.to_probability_intervals().is_proper()

        for n in range(2, 7):
            count = int(rng.integers(1, 2**n))
            masks = rng.choice(np.arange(1, 2**n), size=count, replace=False)
            m = MassAssignment(
                n_labels=n,
                focal_masks=tuple(int(x) for x in masks),
                masses=rng.dirichlet(np.ones(count)),
            )
            for mask in range(1, 2**n):
                assert m.belief(mask) <= m.plausibility(mask) + 1e-12


def test_criterion_6_focal_budget():
    with criterion(6, "focal budget: 100 + 200 = 300 outputs; exhaustive match at N=4"):
        est = ellipsoid_overlap(
            unit_ball([0, 0, 0]), unit_ball([1, 0, 0]), samples=100_000, seed=42
        )
        oracle = sphere_iou(1.0, 1.0, 1.0)
        assert abs(est.value - oracle) <= 3 * est.standard_error

        balls = [
            unit_ball([0.0, 0.0, 0.0]),
            unit_ball([0.5, 0.0, 0.0]),
            unit_ball([0.0, 0.6, 0.0]),
            unit_ball([40.0, 0.0, 0.0]),
        ]
        for budget in (1, 3, 5):
            chosen = select_focal_budget(balls, budget=budget, samples=10_000, seed=9)
            scored = [
                (labels, subset_overlap(balls, labels, samples=10_000, seed=9).value)
                for r in (2, 3, 4)
                for labels in itertools.combinations(range(4), r)
            ]
            scored.sort(key=lambda kv: (-kv[1], kv[0]))
            assert [s.labels for s in chosen] == [lab for lab, _ in scored[:budget]]

        line = [unit_ball([0.6 * i, 0.0, 0.0]) for i in range(100)]
        chosen = select_focal_budget(line, budget=200, samples=10_000, seed=42)
        assert len(chosen) == 200
        assert all(len(s.labels) >= 2 for s in chosen)
        outputs = len(line) + len(chosen)
        assert outputs == 300


def test_criterion_7_decomposition_algebra():
    with criterion(7, "weighted rule algebra and alpha constraint"):
        unit = AlphaEstimate(1.0, 1.0, "sensitivity")
        rng = np.random.default_rng(17)
        for _ in range(200):
            au, eu = rng.uniform(0.0, 3.0, size=2)
            assert weighted_tu(au, eu, unit).tu == additive_tu(au, eu).tu

        with pytest.raises(ValidationError):
            AlphaEstimate(0.5, 0.4, "sensitivity")

        for _ in range(1000):
            au, eu = rng.uniform(0.0, 3.0, size=2)
            alphas = AlphaEstimate(
                1.0 + rng.uniform(0.0, 2.0), 1.0 + rng.uniform(0.0, 2.0), "sensitivity"
            )
            d = weighted_tu(au, eu, alphas)
            assert alphas.alpha1 + alphas.alpha2 > 1.0
            assert d.tu >= max(d.au, d.eu) - 1e-9


def test_criterion_8_contnn():
    with criterion(8, "contnn limits, monotone eps sweep, worked fixture"):
        bnn = PredictionBundle(
            kind="bnn-samples", samples=np.array([[[0.8, 0.2], [0.6, 0.4]]])
        )
        inn = PredictionBundle(
            kind="inn-intervals",
            lowers=np.array([[0.5, 0.1]]),
            uppers=np.array([[0.9, 0.5]]),
        )
        assert contnn_decompose(bnn, inn, 0.0).eu == 0.0
        vacuous = PredictionBundle(
            kind="inn-intervals", lowers=np.zeros((1, 2)), uppers=np.ones((1, 2))
        )
        assert abs(contnn_decompose(bnn, vacuous, 1.0).eu - LN2) < 1e-6

        eus = [
            contnn_decompose(bnn, inn, float(eps)).eu
            for eps in np.linspace(0.0, 1.0, 21)
        ]
        assert all(b >= a - 1e-12 for a, b in zip(eus, eus[1:]))

        half = contnn_decompose(bnn, inn, 0.5)
        oracle_eu = grid_entropy_max([0.6, 0.2], [0.8, 0.4], step=1e-5) - \
            brute_entropy_min([0.6, 0.2], [0.8, 0.4])
        assert abs(half.eu - oracle_eu) < 1e-5
        assert abs(half.eu - 0.172610) < 1e-5


def test_criterion_9_dependency_demo(tmp_path):
    with criterion(9, "dependency demo: ratio, spread ordering, reproducibility, < 60 s"):
        started = time.monotonic()

        ratio_rows = dependency_experiment(
            sigma1=0.1, sigma2=1.0, sizes=[10_000], removals=[0], seeds=[42]
        )
        ratio = ratio_rows[0].sigma2_hat / ratio_rows[0].sigma1_hat
        assert 9.5 <= ratio <= 10.5

        rows = dependency_experiment(
            sigma1=0.1, sigma2=1.0, sizes=[50, 5000], removals=[0],
            seeds=list(range(100)),
        )
        spread = {(r.seed, r.size): r.bootstrap_spread for r in rows}
        wins = sum(spread[(s, 50)] > spread[(s, 5000)] for s in range(100))
        assert wins >= 95

        again = dependency_experiment(
            sigma1=0.1, sigma2=1.0, sizes=[50, 5000], removals=[0],
            seeds=list(range(100)),
        )
        assert rows == again
        paths = []
        for tag, batch in (("a", rows), ("b", again)):
            path = tmp_path / f"report_{tag}.ndjson"
            write_ndjson(
                [{"seed": r.seed, "size": r.size, "spread": r.bootstrap_spread}
                 for r in batch],
                path,
            )
            paths.append(path.read_bytes())
        assert paths[0] == paths[1]

        assert time.monotonic() - started < 60.0


def test_criterion_10_cli_contract(tmp_path, capsys):
    with criterion(10, "CLI exit codes cite violated conditions; byte-reproducible"):
        bad = tmp_path / "bad.json"
        bad.write_text('{"lowers": [0.5, 0.5, 0.5], "uppers": [0.6, 0.6, 0.6]}')
        assert main(["entropy-bounds", "--input", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "sum of lower bounds" in err and "sum of upper bounds" in err

        broken = tmp_path / "broken.json"
        broken.write_text('{"lowers": [0,\n 0, OOPS]}')
        assert main(["entropy-bounds", "--input", str(broken)]) == 2
        assert ":2:" in capsys.readouterr().err

        crossing_low = tmp_path / "low.csv"
        crossing_up = tmp_path / "up.csv"
        gamble_csv = tmp_path / "g.csv"
        xs = np.linspace(0.0, 2.0, 17)
        crossing_low.write_text(
            "x,p\n" + "\n".join(f"{x},{min(x, 1.0)}" for x in xs) + "\n"
        )
        crossing_up.write_text(
            "x,p\n" + "\n".join(f"{x},{min(max(x - 1.0, 0.0), 1.0)}" for x in xs) + "\n"
        )
        gamble_csv.write_text("x,value\n" + "\n".join(f"{x},{x}" for x in xs) + "\n")
        assert main([
            "pbox", "--lower-cdf", str(crossing_low), "--upper-cdf", str(crossing_up),
            "--gamble", str(gamble_csv),
        ]) == 2
        assert "cross" in capsys.readouterr().err

        intervals = tmp_path / "pi.json"
        intervals.write_text('{"lowers": [0.1, 0.2], "uppers": [0.7, 0.9]}')
        ellipsoids = tmp_path / "ell.json"
        ellipsoids.write_text(json.dumps({
            "ellipsoids": [
                {"mean": [0, 0, 0], "covariance": [1, 0, 0, 0, 1, 0, 0, 0, 1]},
                {"mean": [0.5, 0, 0], "covariance": [1, 0, 0, 0, 1, 0, 0, 0, 1]},
            ]
        }))
        bnn = tmp_path / "bnn.json"
        bnn.write_text(json.dumps(
            {"kind": "bnn-samples", "samples": [[[0.8, 0.2], [0.6, 0.4]]]}
        ))
        inn = tmp_path / "inn.json"
        inn.write_text(json.dumps(
            {"kind": "inn-intervals", "lowers": [[0.5, 0.1]], "uppers": [[0.9, 0.5]]}
        ))
        swap = tmp_path / "swap.csv"
        swap.write_text("x,p\n" + "\n".join(f"{x},{min(x, 1.0)}" for x in xs) + "\n")

        commands = {
            "entropy-bounds": ["entropy-bounds", "--input", str(intervals)],
            "alphas": ["alphas", "--method", "credal", "--input", str(intervals)],
            "decompose": ["decompose", "--rule", "contnn", "--bnn", str(bnn),
                          "--inn", str(inn), "--eps", "0.4"],
            "pbox": ["pbox", "--lower-cdf", str(crossing_up), "--upper-cdf", str(swap),
                     "--gamble", str(gamble_csv), "--n", "10", "50"],
            "contaminate": ["contaminate", "--cdf", str(swap), "--gamble",
                            str(gamble_csv), "--interval", "0", "2", "--eps", "0.25"],
            "demo-dependency": ["demo-dependency", "--sizes", "60", "--removals", "0",
                                "--seeds", "3", "--bootstrap", "40"],
            "focal-select": ["focal-select", "--input", str(ellipsoids),
                             "--budget", "1"],
        }
        for name, argv in commands.items():
            outputs = []
            for tag in ("x", "y"):
                out = tmp_path / f"{name}_{tag}.ndjson"
                assert main(argv + ["--out", str(out)]) == 0, name
                stdout = capsys.readouterr().out
                outputs.append((stdout, out.read_bytes()))
                fig = out.with_suffix(".png")
                assert fig.exists() and fig.stat().st_size > 0
            assert outputs[0] == outputs[1], f"{name} not byte-reproducible"
