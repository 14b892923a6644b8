import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from impuq import (
    ContaminationModel,
    DiscreteDistribution,
    Gamble,
    IntervalModel,
    TabulatedCDF,
    ValidationError,
)

from .oracles import stieltjes_expectation


def identity_on(lo, hi, n=4096):
    xs = np.linspace(lo, hi, n)
    return Gamble(values=xs, grid=xs)


def uniform_01_model(eps):
    return ContaminationModel(
        epsilon=eps,
        precise=TabulatedCDF.uniform(0.0, 1.0, knots=64),
        imprecise=IntervalModel(0.0, 1.0),
    )


def test_worked_uniform_example():
    # E = 0.5 under U(0,1); inf/sup of the identity on [0,1] are 0 and 1
    model = uniform_01_model(0.3)
    g = identity_on(0.0, 1.0)
    assert model.lower_expectation(g) == pytest.approx(0.35, abs=1e-12)
    assert model.upper_expectation(g) == pytest.approx(0.65, abs=1e-12)


def test_precise_expectation_matches_quadrature_oracle():
    model = uniform_01_model(0.3)
    g = identity_on(0.0, 1.0)
    oracle = stieltjes_expectation(
        lambda x: x, lambda x: np.clip(x, 0.0, 1.0), 0.0, 1.0
    )
    assert model.precise_expectation(g) == pytest.approx(oracle, abs=1e-6)


def test_precise_expectation_with_left_atom():
    # 30% of the mass sits as an atom at the first knot
    cdf = TabulatedCDF(xs=[0.0, 1.0], ps=[0.3, 1.0])
    model = ContaminationModel(epsilon=0.5, precise=cdf, imprecise=IntervalModel(0, 1))
    g = identity_on(0.0, 1.0, n=65)
    # E = 0.3 * 0 + integral of y * 0.7 dy over [0, 1] = 0.35
    assert model.precise_expectation(g) == pytest.approx(0.35, abs=1e-12)


def test_tiny_epsilon_collapses_to_precise():
    model = uniform_01_model(1e-12)
    g = identity_on(0.0, 1.0)
    assert model.lower_expectation(g) == pytest.approx(0.5, abs=1e-9)
    assert model.upper_expectation(g) == pytest.approx(0.5, abs=1e-9)


def test_endpoints_recover_precise_and_vacuous_exactly():
    g = identity_on(0.0, 1.0)
    precise = uniform_01_model(0.0)
    assert precise.lower_expectation(g) == precise.precise_expectation(g)
    assert precise.upper_expectation(g) == precise.precise_expectation(g)
    vacuous = uniform_01_model(1.0)
    assert vacuous.lower_expectation(g) == 0.0
    assert vacuous.upper_expectation(g) == 1.0


def test_strict_flag_restores_open_interval():
    with pytest.raises(ValidationError):
        ContaminationModel(
            epsilon=0.0,
            precise=TabulatedCDF.uniform(0.0, 1.0),
            imprecise=IntervalModel(0.0, 1.0),
            strict=True,
        )


def test_mixture_arithmetic():
    # E = 2, inf g = 1 at eps = 0.5 gives 1.5
    probs = DiscreteDistribution([0.0, 0.0, 1.0, 0.0])
    g = Gamble(values=[1.0, 5.0, 2.0, 7.0])
    model = ContaminationModel(epsilon=0.5, precise=probs, imprecise=IntervalModel(0, 3))
    assert model.precise_expectation(g) == 2.0
    assert model.lower_expectation(g) == pytest.approx(1.5, abs=1e-12)


def test_constant_gamble_coherent_for_any_eps():
    xs = np.linspace(0.0, 1.0, 32)
    g = Gamble(values=np.full(32, 4.5), grid=xs)
    for eps in (0.0, 0.25, 0.8, 1.0):
        model = uniform_01_model(eps)
        assert model.lower_expectation(g) == pytest.approx(4.5, abs=1e-12)
        assert model.upper_expectation(g) == pytest.approx(4.5, abs=1e-12)


def test_support_outside_interval_rejected():
    with pytest.raises(ValidationError, match="support"):
        ContaminationModel(
            epsilon=0.5,
            precise=TabulatedCDF.uniform(0.0, 2.0),
            imprecise=IntervalModel(0.0, 1.0),
        )


def test_discrete_support_outside_interval_rejected():
    with pytest.raises(ValidationError):
        ContaminationModel(
            epsilon=0.5,
            precise=DiscreteDistribution([0.5, 0.5]),
            imprecise=IntervalModel(0.0, 0.5),
        )


def test_epsilon_outside_unit_interval_rejected():
    with pytest.raises(ValidationError):
        uniform_01_model(1.5)


@given(
    eps=st.floats(min_value=0.0, max_value=1.0),
    seed=st.integers(min_value=0, max_value=2**16),
)
def test_width_law_and_conjugacy(eps, seed):
    rng = np.random.default_rng(seed)
    xs = np.linspace(0.0, 1.0, 65)
    vals = rng.uniform(-5.0, 5.0, size=65)
    g = Gamble(values=vals, grid=xs)
    neg = Gamble(values=-vals, grid=xs)
    model = uniform_01_model(eps)
    lo, hi = model.lower_expectation(g), model.upper_expectation(g)
    width = eps * (vals.max() - vals.min())
    assert hi - lo == pytest.approx(width, abs=1e-9)
    assert model.lower_expectation(neg) == pytest.approx(-hi, abs=1e-9)
    assert lo >= vals.min() - 1e-9 and hi <= vals.max() + 1e-9


def test_monotone_in_epsilon(rng):
    xs = np.linspace(0.0, 1.0, 65)
    g = Gamble(values=rng.uniform(-2, 2, size=65), grid=xs)
    lows, highs = [], []
    for eps in np.linspace(0.0, 1.0, 11):
        model = uniform_01_model(float(eps))
        lows.append(model.lower_expectation(g))
        highs.append(model.upper_expectation(g))
    assert np.all(np.diff(lows) <= 1e-12)
    assert np.all(np.diff(highs) >= -1e-12)
