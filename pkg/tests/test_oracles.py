import numpy as np
import pytest

from hexlogit.errors import InvalidArgumentError
from hexlogit.oracles import (
    HexadScenario,
    TetradScenario,
    closed_form_prob,
    closed_form_prob_tetrad,
    crosscheck_enumerators,
    exact_conditional_prob,
    exact_conditional_prob_tetrad,
    sufficiency_report,
)


@pytest.mark.parametrize("level", ["dyad", "node"])
def test_zero_slope_is_uniform(rng, level):
    sc = HexadScenario.random(rng, 2, level)
    sc = HexadScenario(sc.x, sc.fe, np.zeros(2))
    c = 2 if level == "dyad" else 4
    assert np.allclose(exact_conditional_prob(sc), 1 / c, atol=1e-15)


@pytest.mark.parametrize("level", ["dyad", "node"])
def test_closed_form_and_effect_invariance(rng, level):
    for _ in range(100):
        sc = HexadScenario.random(rng, 2, level)
        exact = exact_conditional_prob(sc)
        assert np.max(np.abs(exact - closed_form_prob(sc))) < 1e-12
        other = sc.with_fe(HexadScenario.random(rng, 2, level).fe)
        assert np.max(np.abs(exact - exact_conditional_prob(other))) < 1e-12


def test_translation_invariance(rng):
    sc = HexadScenario.random(rng)
    fe = sc.fe.copy()
    fe[0] += 0.7
    assert np.allclose(exact_conditional_prob(sc), exact_conditional_prob(sc.with_fe(fe)), atol=1e-13)


def test_effects_do_matter_unconditionally(rng):
    # sanity: the raw outcome probabilities do change with the effects
    from hexlogit.oracles import _BITS8, _outcome_logprobs

    sc = HexadScenario.random(rng)
    other = sc.with_fe(HexadScenario.random(rng).fe)
    assert not np.allclose(_outcome_logprobs(sc.index(), _BITS8), _outcome_logprobs(other.index(), _BITS8))


def test_tetrad_oracle(rng):
    for _ in range(100):
        sc = TetradScenario.random(rng, 2)
        assert np.allclose(exact_conditional_prob_tetrad(sc), closed_form_prob_tetrad(sc), atol=1e-12, rtol=0)
    sc = TetradScenario.random(rng)
    zero = TetradScenario(sc.x, sc.a, sc.b, [0.0])
    assert exact_conditional_prob_tetrad(zero) == pytest.approx((0.5, 0.5), abs=1e-15)
    shifted = TetradScenario(sc.x, sc.a + 2.5, sc.b, sc.beta)
    assert np.allclose(exact_conditional_prob_tetrad(sc), exact_conditional_prob_tetrad(shifted), atol=1e-13)


def test_report():
    rep = sufficiency_report(20, seed=3)
    assert rep["passed"]
    assert set(rep) >= {"dyad-fe", "node-fe", "dyadic"}


def test_scenario_validation():
    with pytest.raises(InvalidArgumentError):
        HexadScenario(np.zeros((8, 1)), np.zeros(5), [0.0])
    with pytest.raises(InvalidArgumentError):
        HexadScenario(np.full((8, 1), np.nan), np.zeros((3, 2)), [0.0])
    with pytest.raises(InvalidArgumentError):
        exact_conditional_prob(HexadScenario(np.zeros((8, 1)), np.zeros((3, 2)), [0.0]), "dyad-fe")


def test_crosscheck():
    assert crosscheck_enumerators(4, 0.3, 0, 100)["failed"] == 0
    assert crosscheck_enumerators(5, 0.0, 0, 3)["mean_informative"] == 0.0
    assert crosscheck_enumerators(5, 1.0, 0, 3)["mean_informative"] == 0.0
    with pytest.raises(InvalidArgumentError):
        crosscheck_enumerators(9, 0.3)
